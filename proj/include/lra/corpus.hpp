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

#include <Eigen/Core>
#include <string>
#include <vector>

#include "lra/annotations.hpp"
#include "lra/geometry_types.hpp"
#include "lra/ribbon.hpp"

namespace lra {

// Where evaluation contours come from: an annotation file, the synthetic
// ribbon generator, or raw draws from a planted linear subspace.
struct CorpusSpec {
  std::string jsonl_path;  // non-empty selects the file-backed source
  std::string family = "ribbon";  // "ribbon" | "rank" when synthetic
  int count = 500;
  std::uint64_t seed = 1;
  int n_vertices = 14;
  CanonFlags flags;
  RibbonParams ribbon;
  int rank = 6;                     // planted subspace dimension
  double rank_coeff_scale = 100.0;  // coefficient std dev of the top direction

  bool is_file() const { return !jsonl_path.empty(); }
};

struct Corpus {
  std::vector<Contour> contours;  // all with spec.n_vertices vertices
  std::vector<std::string> ids;
  std::vector<IngestDiagnostic> diagnostics;  // file-backed sources only
  std::string fingerprint;
};

// Materializes the corpus. File-backed polygons are resampled to
// spec.n_vertices; unusable lines/polygons are reported in diagnostics and
// skipped. An empty usable corpus is a DataError.
Corpus load_corpus(const CorpusSpec& spec);

// Content fingerprint: file bytes for file corpora, canonical parameter
// string for synthetic ones. Stable across runs and platforms.
std::string corpus_fingerprint(const CorpusSpec& spec);

// The exact orthonormal basis a "rank" family corpus is drawn from, for
// recovery experiments.
Eigen::MatrixXd rank_family_basis(const CorpusSpec& spec);

}  // namespace lra
