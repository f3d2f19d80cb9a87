// Copyright 2026 The lra Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <string>
#include <vector>

#include "lra/geometry_types.hpp"

namespace lra {

// One annotation line: an image identifier and its word polygons.
struct AnnotationRecord {
  std::string id;
  std::vector<RawPolygon> polygons;
  int line = 0;  // 1-based source line, for downstream diagnostics
};

// A skipped line or polygon, with the 1-based source line number.
struct IngestDiagnostic {
  int line = 0;
  std::string message;
};

struct IngestResult {
  std::vector<AnnotationRecord> records;
  std::vector<IngestDiagnostic> diagnostics;
  int skipped_lines = 0;
  int skipped_polygons = 0;
};

// Reads newline-delimited JSON records of the form
//   {"id": "...", "polygons": [[[x, y], ...], ...]}
// Malformed lines and degenerate polygons are reported and skipped; valid
// content on the same line is kept. Unreadable files are a DataError.
IngestResult read_annotations_jsonl(const std::string& path);

}  // namespace lra
