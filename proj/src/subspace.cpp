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

#include "lra/subspace.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <cmath>
#include <fstream>
#include <limits>

#include "lra/geometry.hpp"
#include "lra/hashing.hpp"

namespace lra {

std::string to_string(FitMethod method) {
  return method == FitMethod::kSvd ? "svd" : "fms";
}

FitMethod fit_method_from_string(const std::string& name) {
  if (name == "svd") return FitMethod::kSvd;
  if (name == "fms") return FitMethod::kFms;
  throw ConfigError("unknown fit method '" + name + "' (expected svd or fms)");
}

namespace {

// Flip columns so the largest-magnitude entry of each is positive; ties go to
// the lowest row index.
void apply_sign_convention(Eigen::MatrixXd& u) {
  for (int c = 0; c < u.cols(); ++c) {
    int pivot = 0;
    double best = std::abs(u(0, c));
    for (int r = 1; r < u.rows(); ++r) {
      const double mag = std::abs(u(r, c));
      if (mag > best) {
        best = mag;
        pivot = r;
      }
    }
    if (u(pivot, c) < 0.0) u.col(c) = -u.col(c);
  }
}

void check_rank_request(const ContourMatrix& a, int m) {
  const int limit = std::min(a.ambient_dim(), a.n_samples());
  if (m < 1 || m > limit) {
    throw ConfigError("requested subspace dimension " + std::to_string(m) +
                      " outside [1, " + std::to_string(limit) + "]");
  }
}

Basis top_left_singular_vectors(const Eigen::MatrixXd& matrix, int m,
                                const CanonFlags& flags) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(matrix, Eigen::ComputeThinU);
  Eigen::MatrixXd u = svd.matrixU().leftCols(m);
  if (!u.allFinite()) throw NumericalError("singular vector computation produced non-finite values");
  apply_sign_convention(u);
  Basis basis;
  basis.u = std::move(u);
  basis.m = m;
  basis.method = FitMethod::kSvd;
  basis.flags = flags;
  return basis;
}

}  // namespace

ContourMatrix build_matrix(const std::vector<Contour>& contours,
                           const CanonFlags& flags) {
  if (contours.empty()) throw DataError("cannot build a matrix from zero contours");
  const int n = contours.front().size();
  if (n == 0) throw DataError("contour 0 is empty");

  ContourMatrix out;
  out.n_vertices = n;
  out.flags = flags;
  out.data.resize(2 * n, static_cast<Eigen::Index>(contours.size()));
  for (std::size_t j = 0; j < contours.size(); ++j) {
    if (contours[j].size() != n) {
      throw DataError("contour " + std::to_string(j) + " has " +
                      std::to_string(contours[j].size()) + " vertices, expected " +
                      std::to_string(n));
    }
    const auto [canonical, frame] = canonicalize(contours[j], flags);
    out.data.col(static_cast<Eigen::Index>(j)) = flatten(canonical);
  }
  if (!out.data.allFinite()) throw DataError("contour matrix has non-finite entries");
  return out;
}

Basis svd_subspace(const ContourMatrix& a, int m) {
  check_rank_request(a, m);
  return top_left_singular_vectors(a.data, m, a.flags);
}

Basis weighted_pca_step(const ContourMatrix& a, const Eigen::VectorXd& weights,
                        int m) {
  check_rank_request(a, m);
  if (weights.size() != a.n_samples()) {
    throw ConfigError("weight vector length does not match sample count");
  }
  for (Eigen::Index j = 0; j < weights.size(); ++j) {
    if (!std::isfinite(weights[j]) || weights[j] <= 0.0) {
      throw ConfigError("weights must be positive and finite");
    }
  }
  const Eigen::MatrixXd scaled =
      a.data * weights.cwiseSqrt().asDiagonal();
  return top_left_singular_vectors(scaled, m, a.flags);
}

FmsResult fms_subspace(const ContourMatrix& a, int m, const FmsParams& params) {
  if (params.max_iterations < 1) throw ConfigError("max_iterations must be >= 1");
  if (!(params.tolerance > 0.0)) throw ConfigError("tolerance must be positive");
  if (!(params.weight_floor > 0.0)) throw ConfigError("weight_floor must be positive");
  check_rank_request(a, m);

  FmsResult result;
  result.basis = svd_subspace(a, m);
  result.trace.push_back(
      {0, l12_objective(a, result.basis), std::numeric_limits<double>::quiet_NaN()});

  Eigen::VectorXd weights(a.n_samples());
  for (int k = 1; k <= params.max_iterations; ++k) {
    const Eigen::MatrixXd residual =
        a.data - result.basis.u * (result.basis.u.transpose() * a.data);
    for (Eigen::Index j = 0; j < weights.size(); ++j) {
      weights[j] = 1.0 / std::max(residual.col(j).norm(), params.weight_floor);
    }
    Basis next = weighted_pca_step(a, weights, m);
    const double step = subspace_distance(result.basis, next);
    result.basis = std::move(next);
    result.iterations = k;
    result.trace.push_back({k, l12_objective(a, result.basis), step});
    if (step < params.tolerance) {
      result.converged = true;
      break;
    }
  }
  result.basis.method = FitMethod::kFms;
  return result;
}

double subspace_distance(const Basis& a, const Basis& b) {
  if (a.ambient_dim() != b.ambient_dim()) {
    throw DataError("subspace_distance: ambient dimensions differ");
  }
  if (a.m != b.m) throw DataError("subspace_distance: subspace dimensions differ");
  const Eigen::MatrixXd diff =
      a.u * a.u.transpose() - b.u * b.u.transpose();
  return diff.norm();
}

double l12_objective(const ContourMatrix& a, const Basis& basis) {
  if (basis.ambient_dim() != a.ambient_dim()) {
    throw DataError("l12_objective: basis does not match matrix dimensions");
  }
  const Eigen::MatrixXd residual = a.data - basis.u * (basis.u.transpose() * a.data);
  double total = 0.0;
  for (Eigen::Index j = 0; j < residual.cols(); ++j) {
    total += residual.col(j).norm();
  }
  return total;
}

Eigen::VectorXd explained_variance(const ContourMatrix& a, const Basis& basis) {
  if (basis.ambient_dim() != a.ambient_dim()) {
    throw DataError("explained_variance: basis does not match matrix dimensions");
  }
  if (a.n_samples() < 2) {
    throw DataError("explained_variance requires at least two samples");
  }
  const Eigen::MatrixXd coeffs = basis.u.transpose() * a.data;  // m x L
  Eigen::VectorXd variances(basis.m);
  for (int i = 0; i < basis.m; ++i) {
    const Eigen::RowVectorXd row = coeffs.row(i);
    const double mean = row.mean();
    variances[i] = (row.array() - mean).square().sum() /
                   static_cast<double>(a.n_samples() - 1);
  }
  return variances;
}

double orthonormality_residual(const Eigen::MatrixXd& u) {
  const Eigen::MatrixXd gram = u.transpose() * u;
  const Eigen::MatrixXd identity =
      Eigen::MatrixXd::Identity(u.cols(), u.cols());
  return (gram - identity).cwiseAbs().maxCoeff();
}

void write_fms_trace_csv(const FmsResult& result, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open trace file for writing: " + path);
  out << "iteration,objective,step_distance\n";
  for (const FmsIterationRecord& rec : result.trace) {
    out << rec.iteration << ',' << format_double17(rec.objective) << ',';
    if (std::isfinite(rec.step_distance)) out << format_double17(rec.step_distance);
    out << '\n';
  }
  if (!out.good()) throw DataError("failed while writing trace file: " + path);
}

}  // namespace lra
