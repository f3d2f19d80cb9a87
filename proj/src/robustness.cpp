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

#include "lra/robustness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>

#include "lra/geometry.hpp"
#include "lra/rng.hpp"

namespace lra {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Linear-interpolation quantile of a sorted vector.
double quantile_sorted(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) throw DataError("quantile of empty sample");
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(pos);
  if (lo + 1 >= sorted.size()) return sorted.back();
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

void summarize_iou(EvalStats& stats) {
  std::vector<double> sorted = stats.per_contour_iou;
  std::sort(sorted.begin(), sorted.end());
  double sum = 0.0;
  for (double v : sorted) sum += v;
  stats.mean_iou = sum / static_cast<double>(sorted.size());
  stats.iou_q25 = quantile_sorted(sorted, 0.25);
  stats.iou_q50 = quantile_sorted(sorted, 0.50);
  stats.iou_q75 = quantile_sorted(sorted, 0.75);
}

Basis fit_method(const ContourMatrix& matrix, FitMethod method, int m,
                 const FmsParams& fms) {
  if (method == FitMethod::kSvd) return svd_subspace(matrix, m);
  return fms_subspace(matrix, m, fms).basis;
}

OrthanchorBasis wrap_basis(Basis basis, int n_vertices,
                           const std::string& corpus_id) {
  OrthanchorBasis out;
  out.n_vertices = n_vertices;
  out.provenance.corpus_id = corpus_id;
  out.provenance.params = "method=" + to_string(basis.method) +
                          ";m=" + std::to_string(basis.m);
  out.basis = std::move(basis);
  return out;
}

}  // namespace

std::vector<Contour> inject_spike_noise(const std::vector<Contour>& contours,
                                        const NoiseSpec& spec) {
  if (spec.corrupt_fraction < 0.0 || spec.corrupt_fraction > 1.0) {
    throw ConfigError("corrupt_fraction must lie in [0, 1]");
  }
  if (spec.vertices_min < 0 || spec.vertices_min > spec.vertices_max) {
    throw ConfigError("spike vertex count range must satisfy 0 <= min <= max");
  }
  if (spec.magnitude_lo < 0.0 || spec.magnitude_lo > spec.magnitude_hi) {
    throw ConfigError("spike magnitude range must satisfy 0 <= lo <= hi");
  }

  std::vector<Contour> out = contours;
  const int total = static_cast<int>(contours.size());
  if (total == 0) return out;

  const int n_corrupt =
      spec.corrupt_fraction == 0.0
          ? 0
          : std::max(1, static_cast<int>(std::floor(spec.corrupt_fraction *
                                                    static_cast<double>(total))));
  Rng rng(spec.seed);
  std::vector<int> targets = rng.sample_without_replacement(total, n_corrupt);
  std::sort(targets.begin(), targets.end());

  for (int idx : targets) {
    Contour& contour = out[idx];
    const int n = contour.size();
    if (spec.vertices_max > n) {
      throw ConfigError("spike vertices_max exceeds the contour vertex count");
    }
    const double diagonal = bounding_box(contour).diagonal();
    const int k = static_cast<int>(rng.uniform_int(spec.vertices_min, spec.vertices_max));
    std::vector<int> vertices = rng.sample_without_replacement(n, k);
    std::sort(vertices.begin(), vertices.end());
    for (int v : vertices) {
      const double magnitude = rng.uniform(spec.magnitude_lo, spec.magnitude_hi) * diagonal;
      const double angle = rng.uniform(0.0, 2.0 * std::numbers::pi);
      contour.points[v].x += magnitude * std::cos(angle);
      contour.points[v].y += magnitude * std::sin(angle);
    }
  }
  return out;
}

EvalStats evaluate_reconstruction(const OrthanchorBasis& basis,
                                  const std::vector<Contour>& contours,
                                  int resolution) {
  if (contours.empty()) throw DataError("evaluate_reconstruction on empty corpus");
  EvalStats stats;
  stats.per_contour_iou.reserve(contours.size());
  double sq_sum = 0.0;
  for (const Contour& contour : contours) {
    const Contour recon = decode(basis, encode(basis, contour));
    stats.per_contour_iou.push_back(polygon_iou(contour, recon, resolution));
    sq_sum += (flatten(contour) - flatten(recon)).squaredNorm();
  }
  stats.mean_sq_err = sq_sum / static_cast<double>(contours.size());
  summarize_iou(stats);
  return stats;
}

EvalStats evaluate_fourier(const std::vector<Contour>& contours, int dims,
                           int resolution) {
  if (contours.empty()) throw DataError("evaluate_fourier on empty corpus");
  EvalStats stats;
  stats.per_contour_iou.reserve(contours.size());
  double sq_sum = 0.0;
  for (const Contour& contour : contours) {
    const Contour recon = fourier_decode(fourier_encode(contour, dims), contour.size());
    stats.per_contour_iou.push_back(polygon_iou(contour, recon, resolution));
    sq_sum += (flatten(contour) - flatten(recon)).squaredNorm();
  }
  stats.mean_sq_err = sq_sum / static_cast<double>(contours.size());
  summarize_iou(stats);
  return stats;
}

namespace {

void fill_stats(ReportRow& row, const EvalStats& stats) {
  row.mean_iou = stats.mean_iou;
  row.iou_q25 = stats.iou_q25;
  row.iou_q50 = stats.iou_q50;
  row.iou_q75 = stats.iou_q75;
  row.mean_sq_err = stats.mean_sq_err;
}

}  // namespace

Report noise_benchmark(const CorpusSpec& corpus_spec, const NoiseSpec& noise,
                       int m, const FmsParams& fms, int resolution) {
  const Corpus corpus = load_corpus(corpus_spec);
  const std::vector<Contour> corrupted = inject_spike_noise(corpus.contours, noise);
  const ContourMatrix clean_matrix = build_matrix(corpus.contours, corpus_spec.flags);
  const ContourMatrix noisy_matrix = build_matrix(corrupted, corpus_spec.flags);

  Report report;
  report.corpus_hash = corpus.fingerprint;
  report.seed = noise.seed;
  const int n_corrupt =
      noise.corrupt_fraction == 0.0
          ? 0
          : std::max(1, static_cast<int>(std::floor(
                            noise.corrupt_fraction *
                            static_cast<double>(corpus.contours.size()))));
  report.meta["n_corrupted"] = std::to_string(n_corrupt);

  for (const FitMethod method : {FitMethod::kSvd, FitMethod::kFms}) {
    const auto clean_start = Clock::now();
    Basis clean_fit = fit_method(clean_matrix, method, m, fms);
    const OrthanchorBasis clean_basis =
        wrap_basis(clean_fit, corpus_spec.n_vertices, corpus.fingerprint);
    const EvalStats clean_stats =
        evaluate_reconstruction(clean_basis, corpus.contours, resolution);
    const double clean_time = seconds_since(clean_start);

    const auto noisy_start = Clock::now();
    Basis noisy_fit = fit_method(noisy_matrix, method, m, fms);
    const OrthanchorBasis noisy_basis =
        wrap_basis(noisy_fit, corpus_spec.n_vertices, corpus.fingerprint);
    const EvalStats noisy_stats =
        evaluate_reconstruction(noisy_basis, corpus.contours, resolution);
    const double noisy_time = seconds_since(noisy_start);

    ReportRow clean_row;
    clean_row.op = "noise";
    clean_row.condition = "clean_fit";
    clean_row.method = to_string(method);
    clean_row.dim = m;
    clean_row.noise = 0.0;
    fill_stats(clean_row, clean_stats);
    clean_row.objective = l12_objective(clean_matrix, clean_basis.basis);
    clean_row.runtime_s = clean_time;
    report.rows.push_back(clean_row);

    ReportRow noisy_row;
    noisy_row.op = "noise";
    noisy_row.condition = "noisy_fit";
    noisy_row.method = to_string(method);
    noisy_row.dim = m;
    noisy_row.noise = noise.corrupt_fraction;
    fill_stats(noisy_row, noisy_stats);
    noisy_row.objective = l12_objective(noisy_matrix, noisy_basis.basis);
    noisy_row.subspace_dist = subspace_distance(clean_basis.basis, noisy_basis.basis);
    noisy_row.runtime_s = noisy_time;
    report.rows.push_back(noisy_row);

    ReportRow drop_row;
    drop_row.op = "noise";
    drop_row.condition = "drop";
    drop_row.method = to_string(method);
    drop_row.dim = m;
    drop_row.noise = noise.corrupt_fraction;
    drop_row.mean_iou = clean_stats.mean_iou - noisy_stats.mean_iou;
    report.rows.push_back(drop_row);
  }
  return report;
}

Report dim_sweep(const CorpusSpec& corpus_spec, std::vector<int> dims,
                 const std::string& method, const FmsParams& fms,
                 int resolution) {
  if (method != "svd" && method != "fms" && method != "fourier") {
    throw ConfigError("sweep method must be svd, fms, or fourier");
  }
  if (dims.empty()) throw ConfigError("sweep requires at least one dimension");
  std::sort(dims.begin(), dims.end());
  dims.erase(std::unique(dims.begin(), dims.end()), dims.end());

  const Corpus corpus = load_corpus(corpus_spec);
  Report report;
  report.corpus_hash = corpus.fingerprint;
  report.seed = corpus_spec.seed;

  if (method == "fourier") {
    for (int dim : dims) {
      const auto start = Clock::now();
      const EvalStats stats = evaluate_fourier(corpus.contours, dim, resolution);
      ReportRow row;
      row.op = "sweep";
      row.condition = "dim";
      row.method = method;
      row.dim = dim;
      fill_stats(row, stats);
      row.runtime_s = seconds_since(start);
      report.rows.push_back(row);
    }
    return report;
  }

  const FitMethod fit = fit_method_from_string(method);
  const ContourMatrix matrix = build_matrix(corpus.contours, corpus_spec.flags);
  for (int dim : dims) {
    const auto start = Clock::now();
    Basis basis = fit_method(matrix, fit, dim, fms);
    const OrthanchorBasis wrapped =
        wrap_basis(std::move(basis), corpus_spec.n_vertices, corpus.fingerprint);
    const EvalStats stats =
        evaluate_reconstruction(wrapped, corpus.contours, resolution);
    ReportRow row;
    row.op = "sweep";
    row.condition = "dim";
    row.method = method;
    row.dim = dim;
    fill_stats(row, stats);
    row.objective = l12_objective(matrix, wrapped.basis);
    row.explained_var = explained_variance(matrix, wrapped.basis).sum();
    row.runtime_s = seconds_since(start);
    report.rows.push_back(row);
  }
  return report;
}

Report importance_profile(const CorpusSpec& corpus_spec,
                          const OrthanchorBasis& basis) {
  const Corpus corpus = load_corpus(corpus_spec);
  if (corpus_spec.n_vertices != basis.n_vertices) {
    throw DataError("importance_profile: corpus and basis vertex counts differ");
  }
  const ContourMatrix matrix = build_matrix(corpus.contours, basis.basis.flags);
  const Eigen::VectorXd variances = explained_variance(matrix, basis.basis);

  Report report;
  report.corpus_hash = corpus.fingerprint;
  report.seed = corpus_spec.seed;
  for (int i = 0; i < variances.size(); ++i) {
    ReportRow row;
    row.op = "importance";
    row.condition = "direction";
    row.method = to_string(basis.basis.method);
    row.dim = i;  // basis column index
    row.explained_var = variances[i];
    report.rows.push_back(row);
  }
  return report;
}

Report generalization_check(const CorpusSpec& fit_spec, const CorpusSpec& eval_spec,
                            int m, FitMethod method, const FmsParams& fms,
                            int resolution) {
  if (fit_spec.n_vertices != eval_spec.n_vertices) {
    throw DataError("generalization_check: corpora must share one vertex count");
  }
  if (!(fit_spec.flags == eval_spec.flags)) {
    throw DataError("generalization_check: corpora must share canonicalization flags");
  }

  const Corpus fit_corpus = load_corpus(fit_spec);
  const Corpus eval_corpus = load_corpus(eval_spec);
  const ContourMatrix matrix = build_matrix(fit_corpus.contours, fit_spec.flags);

  const auto start = Clock::now();
  Basis basis = fit_method(matrix, method, m, fms);
  const OrthanchorBasis wrapped =
      wrap_basis(std::move(basis), fit_spec.n_vertices, fit_corpus.fingerprint);
  const double fit_time = seconds_since(start);

  const EvalStats in_sample =
      evaluate_reconstruction(wrapped, fit_corpus.contours, resolution);
  const EvalStats held_out =
      evaluate_reconstruction(wrapped, eval_corpus.contours, resolution);

  Report report;
  report.corpus_hash = fit_corpus.fingerprint;
  report.corpus_hash_b = eval_corpus.fingerprint;
  report.seed = fit_spec.seed;

  ReportRow in_row;
  in_row.op = "generalize";
  in_row.condition = "in_sample";
  in_row.method = to_string(method);
  in_row.dim = m;
  fill_stats(in_row, in_sample);
  in_row.objective = l12_objective(matrix, wrapped.basis);
  in_row.runtime_s = fit_time;
  report.rows.push_back(in_row);

  ReportRow out_row;
  out_row.op = "generalize";
  out_row.condition = "held_out";
  out_row.method = to_string(method);
  out_row.dim = m;
  fill_stats(out_row, held_out);
  report.rows.push_back(out_row);

  ReportRow gap_row;
  gap_row.op = "generalize";
  gap_row.condition = "gap";
  gap_row.method = to_string(method);
  gap_row.dim = m;
  gap_row.mean_iou = in_sample.mean_iou - held_out.mean_iou;
  report.rows.push_back(gap_row);
  return report;
}

}  // namespace lra
