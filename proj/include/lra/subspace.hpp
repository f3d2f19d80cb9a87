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

#include "lra/geometry_types.hpp"

namespace lra {

enum class FitMethod { kSvd, kFms };

std::string to_string(FitMethod method);
FitMethod fit_method_from_string(const std::string& name);

// Column-stacked training matrix: one canonicalized, flattened contour of
// 2 * n_vertices coordinates per column.
struct ContourMatrix {
  Eigen::MatrixXd data;  // (2 * n_vertices) x n_samples
  int n_vertices = 0;
  CanonFlags flags;

  int n_samples() const { return static_cast<int>(data.cols()); }
  int ambient_dim() const { return static_cast<int>(data.rows()); }
};

// Orthonormal column basis of the fitted subspace. Sign convention: in every
// column the entry of largest magnitude is positive (lowest index wins ties),
// which makes fits reproducible across runs and solvers.
struct Basis {
  Eigen::MatrixXd u;  // (2 * n_vertices) x m, orthonormal columns
  int m = 0;
  FitMethod method = FitMethod::kSvd;
  CanonFlags flags;

  int ambient_dim() const { return static_cast<int>(u.rows()); }
};

struct FmsParams {
  int max_iterations = 100;
  double tolerance = 1e-9;     // convergence threshold on the step distance
  double weight_floor = 1e-10;  // residual norms are clamped below by this
};

struct FmsIterationRecord {
  int iteration = 0;        // 0 is the spectral initialization
  double objective = 0.0;   // sum of residual norms after this iteration
  double step_distance = 0.0;  // NaN for iteration 0
};

struct FmsResult {
  Basis basis;
  int iterations = 0;  // number of reweighted steps actually taken
  bool converged = false;
  std::vector<FmsIterationRecord> trace;
};

// Canonicalizes every contour under `flags` and stacks the flattened results
// as columns. All contours must share one vertex count.
ContourMatrix build_matrix(const std::vector<Contour>& contours,
                           const CanonFlags& flags);

// Top-m left singular vectors (the least-squares subspace).
Basis svd_subspace(const ContourMatrix& a, int m);

// Minimizer of sum_j w_j * ||(I - U U^T) a_j||^2 over orthonormal U: the
// top-m left singular vectors of the sqrt(w)-scaled matrix.
Basis weighted_pca_step(const ContourMatrix& a, const Eigen::VectorXd& weights,
                        int m);

// Iteratively reweighted least squares for the least-absolute-deviation
// subspace: starts from the spectral fit and alternates inverse-residual
// weighting with weighted spectral steps until the basis stops moving.
FmsResult fms_subspace(const ContourMatrix& a, int m, const FmsParams& params = {});

// Frobenius distance between the orthogonal projectors of the two bases.
// Requires matching ambient dimension and m.
double subspace_distance(const Basis& a, const Basis& b);

// Sum over columns of the Euclidean residual norm against the basis.
double l12_objective(const ContourMatrix& a, const Basis& basis);

// Per-direction sample variance (n_samples - 1 divisor) of the coefficients
// u_i^T a_j. Requires at least two samples.
Eigen::VectorXd explained_variance(const ContourMatrix& a, const Basis& basis);

// Largest absolute entry of U^T U - I.
double orthonormality_residual(const Eigen::MatrixXd& u);

// Writes "iteration,objective,step_distance" rows for a fit; iteration 0 has
// an empty step field.
void write_fms_trace_csv(const FmsResult& result, const std::string& path);

}  // namespace lra
