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

#include <limits>
#include <map>
#include <string>
#include <vector>

#include "lra/codec.hpp"
#include "lra/corpus.hpp"
#include "lra/subspace.hpp"

namespace lra {

// Spike corruption: a random subset of contours has a few vertices thrown a
// large, bounding-box-relative distance in a random direction. Models gross
// annotation errors rather than jitter.
struct NoiseSpec {
  double corrupt_fraction = 0.20;  // of the corpus; > 0 corrupts at least one
  int vertices_min = 1;            // displaced vertices per corrupted contour
  int vertices_max = 5;
  double magnitude_lo = 0.5;  // displacement, in units of the bbox diagonal
  double magnitude_hi = 1.0;
  std::uint64_t seed = 7;
};

// Pure function: returns a corrupted copy, inputs untouched. Exactly
// max(1, floor(corrupt_fraction * L)) contours are altered when the fraction
// is positive, none when it is zero.
std::vector<Contour> inject_spike_noise(const std::vector<Contour>& contours,
                                        const NoiseSpec& spec);

// Reconstruction quality of a basis over a corpus.
struct EvalStats {
  double mean_iou = 0.0;
  double iou_q25 = 0.0;
  double iou_q50 = 0.0;
  double iou_q75 = 0.0;
  double mean_sq_err = 0.0;  // mean squared vertex error, image coordinates
  std::vector<double> per_contour_iou;
};

EvalStats evaluate_reconstruction(const OrthanchorBasis& basis,
                                  const std::vector<Contour>& contours,
                                  int resolution = 512);

// Same metrics for the truncated Fourier descriptor at `dims` real dof.
EvalStats evaluate_fourier(const std::vector<Contour>& contours, int dims,
                           int resolution = 512);

inline constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();

// One aggregate result line. Unused fields stay NaN and serialize empty.
struct ReportRow {
  std::string op;
  std::string condition;
  std::string method;
  int dim = 0;
  double noise = kMissing;
  double mean_iou = kMissing;
  double iou_q25 = kMissing;
  double iou_q50 = kMissing;
  double iou_q75 = kMissing;
  double mean_sq_err = kMissing;
  double objective = kMissing;
  double subspace_dist = kMissing;
  double explained_var = kMissing;
  double runtime_s = kMissing;
};

struct Report {
  std::vector<ReportRow> rows;
  std::string corpus_hash;
  std::string corpus_hash_b;  // second corpus where applicable
  std::uint64_t seed = 0;
  std::string config_hash;  // filled by the command-line driver
  std::map<std::string, std::string> meta;

  // IoU columns use three decimals; the wall-clock column is emitted only on
  // request so result files stay byte-reproducible by default.
  std::string to_csv(bool include_runtime = false) const;
  std::string to_json(bool include_runtime = false) const;
  void write_csv(const std::string& path, bool include_runtime = false) const;
  void write_json(const std::string& path, bool include_runtime = false) const;
};

// Fits both methods on a clean and a spike-corrupted copy of the corpus
// (one shared corruption draw) and reports reconstruction quality of every
// fit measured on the clean corpus, plus per-method degradation rows.
Report noise_benchmark(const CorpusSpec& corpus_spec, const NoiseSpec& noise,
                       int m, const FmsParams& fms = {}, int resolution = 512);

// Reconstruction quality across subspace dimensions for one method
// ("svd", "fms", or "fourier"). Dims are sorted and deduplicated.
Report dim_sweep(const CorpusSpec& corpus_spec, std::vector<int> dims,
                 const std::string& method, const FmsParams& fms = {},
                 int resolution = 512);

// Coefficient variance per basis direction over a corpus.
Report importance_profile(const CorpusSpec& corpus_spec,
                          const OrthanchorBasis& basis);

// Fits on one corpus, evaluates on another (same vertex count and flags),
// and reports in-sample, held-out, and gap rows.
Report generalization_check(const CorpusSpec& fit_spec, const CorpusSpec& eval_spec,
                            int m, FitMethod method = FitMethod::kFms,
                            const FmsParams& fms = {}, int resolution = 512);

// Per-contour IoU dump, one "id,iou" row per line.
void write_per_contour_csv(const std::vector<std::string>& ids,
                           const std::vector<double>& ious,
                           const std::string& path);

}  // namespace lra
