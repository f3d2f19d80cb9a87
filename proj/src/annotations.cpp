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

#include "lra/annotations.hpp"

#include <cmath>
#include <fstream>

#include <nlohmann/json.hpp>

namespace lra {

using nlohmann::json;

namespace {

// Parses one [[x, y], ...] polygon; throws DataError on any malformation.
RawPolygon parse_polygon(const json& node) {
  if (!node.is_array()) throw DataError("polygon is not an array");
  std::vector<Point> vertices;
  vertices.reserve(node.size());
  for (const json& pair : node) {
    if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number() ||
        !pair[1].is_number()) {
      throw DataError("vertex is not a [x, y] number pair");
    }
    vertices.push_back({pair[0].get<double>(), pair[1].get<double>()});
  }
  return RawPolygon(std::move(vertices));
}

}  // namespace

IngestResult read_annotations_jsonl(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open annotation file: " + path);

  IngestResult result;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line.find_first_not_of(" \t\r") == std::string::npos) {
      continue;
    }
    const json record = json::parse(line, nullptr, /*allow_exceptions=*/false);
    if (record.is_discarded() || !record.is_object()) {
      result.diagnostics.push_back({line_no, "not a JSON object"});
      ++result.skipped_lines;
      continue;
    }
    if (!record.contains("id") || !record["id"].is_string()) {
      result.diagnostics.push_back({line_no, "missing or non-string 'id'"});
      ++result.skipped_lines;
      continue;
    }
    if (!record.contains("polygons") || !record["polygons"].is_array()) {
      result.diagnostics.push_back({line_no, "missing or non-array 'polygons'"});
      ++result.skipped_lines;
      continue;
    }

    AnnotationRecord annotation;
    annotation.id = record["id"].get<std::string>();
    annotation.line = line_no;
    const json& polygons = record["polygons"];
    for (std::size_t i = 0; i < polygons.size(); ++i) {
      try {
        annotation.polygons.push_back(parse_polygon(polygons[i]));
      } catch (const DataError& err) {
        result.diagnostics.push_back(
            {line_no, "record '" + annotation.id + "' polygon " +
                          std::to_string(i) + ": " + err.what()});
        ++result.skipped_polygons;
      }
    }
    result.records.push_back(std::move(annotation));
  }
  return result;
}

}  // namespace lra
