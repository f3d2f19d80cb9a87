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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include <Eigen/Dense>

#include "lra/corpus.hpp"
#include "lra/errors.hpp"
#include "lra/geometry.hpp"
#include "lra/ribbon.hpp"
#include "lra/rng.hpp"
#include "lra/robustness.hpp"
#include "lra/subspace.hpp"

#include "support.hpp"

using namespace lra;
using testsupport::l12_oracle;
using testsupport::random_orthonormal;

namespace {

std::vector<Contour> ribbon_set(int count, std::uint64_t seed, int n = 14) {
  return generate_ribbon_corpus(count, n, RibbonParams{}, seed);
}

// Top-m eigenvectors of the (optionally weighted) scatter matrix, via a
// solver family the library does not use for fitting.
Eigen::MatrixXd scatter_eigenbasis(const Eigen::MatrixXd& data,
                                   const Eigen::VectorXd& weights, int m) {
  const Eigen::MatrixXd scatter =
      data * weights.asDiagonal() * data.transpose();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(scatter);
  // Eigenvalues ascend; take the trailing m columns.
  return eig.eigenvectors().rightCols(m);
}

double projector_distance(const Eigen::MatrixXd& u, const Eigen::MatrixXd& v) {
  return (u * u.transpose() - v * v.transpose()).norm();
}

}  // namespace

TEST_CASE("fit method names round trip and reject junk") {
  CHECK(to_string(FitMethod::kSvd) == "svd");
  CHECK(to_string(FitMethod::kFms) == "fms");
  CHECK(fit_method_from_string("svd") == FitMethod::kSvd);
  CHECK(fit_method_from_string("fms") == FitMethod::kFms);
  CHECK_THROWS_AS(fit_method_from_string("pca"), ConfigError);
}

TEST_CASE("build_matrix stacks canonicalized columns") {
  const std::vector<Contour> contours = ribbon_set(12, 4);
  CanonFlags flags;
  const ContourMatrix a = build_matrix(contours, flags);
  CHECK(a.n_vertices == 14);
  CHECK(a.ambient_dim() == 28);
  CHECK(a.n_samples() == 12);
  // Column j is the centered flattening of contour j.
  const auto [canon, frame] = canonicalize(contours[3], flags);
  CHECK((a.data.col(3) - flatten(canon)).norm() < 1e-14);

  std::vector<Contour> ragged = contours;
  ragged[5].points.pop_back();
  CHECK_THROWS_AS(build_matrix(ragged, flags), DataError);
  CHECK_THROWS_AS(build_matrix({}, flags), DataError);
}

TEST_CASE("svd fit matches an eigen-decomposition oracle") {
  const std::vector<Contour> contours = ribbon_set(80, 9);
  const ContourMatrix a = build_matrix(contours, CanonFlags{});
  for (int m : {2, 6, 14}) {
    const Basis basis = svd_subspace(a, m);
    CHECK(basis.m == m);
    CHECK(basis.method == FitMethod::kSvd);
    CHECK(orthonormality_residual(basis.u) < 1e-12);
    const Eigen::MatrixXd oracle = scatter_eigenbasis(
        a.data, Eigen::VectorXd::Ones(a.n_samples()), m);
    CHECK(projector_distance(basis.u, oracle) < 1e-8);
  }
}

TEST_CASE("svd fit beats random subspaces on squared error") {
  const std::vector<Contour> contours = ribbon_set(60, 2);
  const ContourMatrix a = build_matrix(contours, CanonFlags{});
  const Basis basis = svd_subspace(a, 6);
  const auto sq_residual = [&](const Eigen::MatrixXd& u) {
    return (a.data - u * (u.transpose() * a.data)).squaredNorm();
  };
  const double fitted = sq_residual(basis.u);
  std::mt19937 gen(33);
  for (int round = 0; round < 25; ++round) {
    CHECK(fitted <= sq_residual(random_orthonormal(gen, 28, 6)) + 1e-9);
  }
}

TEST_CASE("sign convention pins the largest entry positive") {
  const std::vector<Contour> contours = ribbon_set(40, 6);
  const ContourMatrix a = build_matrix(contours, CanonFlags{});
  const Basis basis = svd_subspace(a, 8);
  for (int j = 0; j < 8; ++j) {
    Eigen::Index where;
    basis.u.col(j).cwiseAbs().maxCoeff(&where);
    CHECK(basis.u(where, j) > 0.0);
  }
}

TEST_CASE("rank bounds are enforced") {
  const std::vector<Contour> contours = ribbon_set(50, 3);
  const ContourMatrix a = build_matrix(contours, CanonFlags{});
  CHECK_THROWS_AS(svd_subspace(a, 0), ConfigError);
  CHECK_THROWS_AS(svd_subspace(a, 29), ConfigError);
  CHECK_NOTHROW(svd_subspace(a, 28));
  CHECK_THROWS_AS(fms_subspace(a, -3), ConfigError);
}

TEST_CASE("weighted step matches the weighted scatter oracle") {
  const std::vector<Contour> contours = ribbon_set(70, 8);
  const ContourMatrix a = build_matrix(contours, CanonFlags{});
  Rng rng(77);
  Eigen::VectorXd weights(a.n_samples());
  for (Eigen::Index i = 0; i < weights.size(); ++i) {
    weights[i] = rng.uniform(0.1, 5.0);
  }
  const Basis stepped = weighted_pca_step(a, weights, 6);
  const Eigen::MatrixXd oracle = scatter_eigenbasis(a.data, weights, 6);
  CHECK(projector_distance(stepped.u, oracle) < 1e-8);

  Eigen::VectorXd bad = weights;
  bad[2] = 0.0;
  CHECK_THROWS_AS(weighted_pca_step(a, bad, 6), ConfigError);
  bad[2] = -1.0;
  CHECK_THROWS_AS(weighted_pca_step(a, bad, 6), ConfigError);
  CHECK_THROWS_AS(weighted_pca_step(a, weights.head(10), 6), ConfigError);
}

TEST_CASE("planted subspace is recovered exactly from clean data") {
  CorpusSpec spec;
  spec.family = "rank";
  spec.count = 200;
  spec.seed = 5;
  spec.rank = 6;
  // The planted basis is not centered, so canonicalization would move the
  // data into a different (equally exact) subspace.
  spec.flags.center = false;
  const Corpus corpus = load_corpus(spec);
  const ContourMatrix a = build_matrix(corpus.contours, spec.flags);
  const Eigen::MatrixXd planted = rank_family_basis(spec);

  const Basis svd = svd_subspace(a, 6);
  CHECK(projector_distance(svd.u, planted) < 1e-8);
  CHECK(l12_objective(a, svd) < 1e-8);
  CHECK(l12_oracle(a.data, svd.u) < 1e-8);

  const FmsResult fms = fms_subspace(a, 6);
  CHECK(projector_distance(fms.basis.u, planted) < 1e-8);
  CHECK(fms.iterations <= 2);
  CHECK(fms.converged);
}

TEST_CASE("reweighted fit traces a non-increasing objective") {
  for (std::uint64_t seed : {1ULL, 2ULL, 3ULL, 4ULL}) {
    const std::vector<Contour> clean = ribbon_set(150, seed);
    NoiseSpec noise;
    noise.seed = seed * 101 + 7;
    const std::vector<Contour> corrupted = inject_spike_noise(clean, noise);
    const ContourMatrix a = build_matrix(corrupted, CanonFlags{});
    const FmsResult fms = fms_subspace(a, 10);
    REQUIRE(fms.trace.size() >= 2);
    for (std::size_t i = 1; i < fms.trace.size(); ++i) {
      CHECK(fms.trace[i].objective <= fms.trace[i - 1].objective + 1e-7);
    }
    // The trace records the objective the oracle computes.
    const FmsIterationRecord& last = fms.trace.back();
    CHECK(last.objective ==
          doctest::Approx(l12_oracle(a.data, fms.basis.u)).epsilon(1e-10));
    CHECK(std::isnan(fms.trace[0].step_distance));
  }
}

TEST_CASE("reweighted fit beats the plain svd objective under outliers") {
  const std::vector<Contour> clean = ribbon_set(200, 31);
  NoiseSpec noise;
  noise.seed = 99;
  const std::vector<Contour> corrupted = inject_spike_noise(clean, noise);
  const ContourMatrix a = build_matrix(corrupted, CanonFlags{});
  const Basis svd = svd_subspace(a, 10);
  const FmsResult fms = fms_subspace(a, 10);
  CHECK(l12_oracle(a.data, fms.basis.u) < l12_oracle(a.data, svd.u));
}

TEST_CASE("a huge weight floor collapses the reweighted fit onto svd") {
  const std::vector<Contour> contours = ribbon_set(60, 12);
  const ContourMatrix a = build_matrix(contours, CanonFlags{});
  FmsParams params;
  params.weight_floor = 1e9;  // all weights clamp to 1e-9, i.e. uniform
  const FmsResult fms = fms_subspace(a, 6, params);
  const Basis svd = svd_subspace(a, 6);
  CHECK(projector_distance(fms.basis.u, svd.u) < 1e-10);
}

TEST_CASE("fms parameter validation") {
  const std::vector<Contour> contours = ribbon_set(20, 13);
  const ContourMatrix a = build_matrix(contours, CanonFlags{});
  FmsParams params;
  params.max_iterations = 0;
  CHECK_THROWS_AS(fms_subspace(a, 4, params), ConfigError);
  params = {};
  params.tolerance = -1.0;
  CHECK_THROWS_AS(fms_subspace(a, 4, params), ConfigError);
  params = {};
  params.weight_floor = 0.0;
  CHECK_THROWS_AS(fms_subspace(a, 4, params), ConfigError);
}

TEST_CASE("subspace distance against hand values and invariances") {
  // Orthogonal planes in R^3: projectors differ in two diagonal entries.
  Eigen::MatrixXd e1 = Eigen::MatrixXd::Zero(3, 1);
  Eigen::MatrixXd e2 = Eigen::MatrixXd::Zero(3, 1);
  e1(0, 0) = 1.0;
  e2(1, 0) = 1.0;
  Basis a;
  a.u = e1;
  a.m = 1;
  Basis b;
  b.u = e2;
  b.m = 1;
  CHECK(subspace_distance(a, b) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  CHECK(subspace_distance(a, a) == 0.0);

  // Any orthogonal recombination of the columns spans the same space.
  std::mt19937 gen(41);
  const Eigen::MatrixXd u = random_orthonormal(gen, 12, 4);
  const Eigen::MatrixXd q = random_orthonormal(gen, 4, 4);
  Basis c;
  c.u = u;
  c.m = 4;
  Basis d;
  d.u = u * q;
  d.m = 4;
  CHECK(subspace_distance(c, d) < 1e-12);

  Basis mismatched;
  mismatched.u = random_orthonormal(gen, 10, 4);
  mismatched.m = 4;
  CHECK_THROWS_AS(subspace_distance(c, mismatched), DataError);
}

TEST_CASE("explained variance sums to the total variance at full rank") {
  const std::vector<Contour> contours = ribbon_set(90, 15);
  CanonFlags flags;  // centered
  const ContourMatrix a = build_matrix(contours, flags);
  const Basis full = svd_subspace(a, 28);
  const Eigen::VectorXd per_direction = explained_variance(a, full);
  REQUIRE(per_direction.size() == 28);

  // Oracle: total sample variance from the covariance trace.
  const Eigen::VectorXd mean = a.data.rowwise().mean();
  const Eigen::MatrixXd centered = a.data.colwise() - mean;
  const double total_var =
      centered.squaredNorm() / static_cast<double>(a.n_samples() - 1);
  CHECK(per_direction.sum() == doctest::Approx(total_var).epsilon(1e-10));

  // Oracle: each entry is the variance of the projections onto that column.
  for (int j : {0, 5, 17}) {
    const Eigen::VectorXd proj = full.u.col(j).transpose() * a.data;
    const double mu = proj.mean();
    const double var = (proj.array() - mu).square().sum() /
                       static_cast<double>(proj.size() - 1);
    CHECK(per_direction[j] == doctest::Approx(var).epsilon(1e-12));
  }

  // Svd ordering makes the profile non-increasing.
  for (int j = 1; j < 28; ++j) {
    CHECK(per_direction[j] <= per_direction[j - 1] + 1e-12);
  }
}

TEST_CASE("l12 objective is zero on in-span data and positive otherwise") {
  std::mt19937 gen(55);
  const Eigen::MatrixXd u = random_orthonormal(gen, 8, 3);
  ContourMatrix a;
  a.n_vertices = 4;
  Eigen::MatrixXd coeffs = Eigen::MatrixXd::Random(3, 20);
  a.data = u * coeffs;
  Basis basis;
  basis.u = u;
  basis.m = 3;
  CHECK(l12_objective(a, basis) < 1e-12);

  a.data.col(0) += Eigen::VectorXd::Unit(8, 0) * 2.5;
  const double perturbed = l12_objective(a, basis);
  // One column moved off-span by a vector with a known out-of-span part.
  const Eigen::VectorXd residual =
      a.data.col(0) - u * (u.transpose() * a.data.col(0));
  CHECK(perturbed == doctest::Approx(residual.norm()).epsilon(1e-12));
}

TEST_CASE("fms trace csv matches the recorded trace") {
  const std::vector<Contour> contours = ribbon_set(40, 18);
  const ContourMatrix a = build_matrix(contours, CanonFlags{});
  const FmsResult fms = fms_subspace(a, 6);

  testsupport::TempDir dir;
  const std::string path = dir.file("trace.csv");
  write_fms_trace_csv(fms, path);
  std::ifstream in(path);
  std::string line;
  REQUIRE(std::getline(in, line));
  CHECK(line == "iteration,objective,step_distance");
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    std::istringstream fields(line);
    std::string iteration, objective, step;
    std::getline(fields, iteration, ',');
    std::getline(fields, objective, ',');
    std::getline(fields, step, ',');
    REQUIRE(rows < fms.trace.size());
    CHECK(std::stoi(iteration) == fms.trace[rows].iteration);
    CHECK(std::stod(objective) ==
          doctest::Approx(fms.trace[rows].objective).epsilon(1e-15));
    if (rows == 0) {
      CHECK(step.empty());  // no step distance before the first update
    } else {
      CHECK(std::stod(step) ==
            doctest::Approx(fms.trace[rows].step_distance).epsilon(1e-15));
    }
    ++rows;
  }
  CHECK(rows == fms.trace.size());
}
