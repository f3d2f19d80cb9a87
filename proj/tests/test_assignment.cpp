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
#include <random>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lra/assignment.hpp"
#include "lra/errors.hpp"
#include "lra/geometry.hpp"
#include "lra/rng.hpp"

#include "support.hpp"

using namespace lra;
using nlohmann::json;
using testsupport::brute_force_assignment;
using testsupport::rectangle;

namespace {

// Test-side focal formula, written independently of the library.
double focal_oracle(double score, double alpha = 0.25, double gamma = 2.0,
                    double clamp = 1e-7) {
  const double b = std::min(std::max(score, clamp), 1.0 - clamp);
  return -alpha * std::pow(1.0 - b, gamma) * std::log(b) +
         (1.0 - alpha) * std::pow(b, gamma) * std::log(1.0 - b);
}

PredictionGrid tiny_grid(int h, int w, const std::vector<Contour>& gts,
                         std::uint64_t seed) {
  ScenarioSpec spec;
  spec.grid_h = h;
  spec.grid_w = w;
  spec.gts = gts;
  spec.seed = seed;
  spec.tr_dilate = 1e6;  // every cell eligible
  return simulate_grid(spec);
}

CostMatrix wrap_matrix(const Eigen::MatrixXd& entries) {
  CostMatrix cost;
  cost.entries = entries;
  cost.replication = 1;
  cost.instances = static_cast<int>(entries.cols());
  return cost;
}

}  // namespace

TEST_CASE("focal cost against the closed form") {
  // -0.25 * 0.25 * ln(1/2) + 0.75 * 0.25 * ln(1/2) = 0.125 * ln(1/2)
  CHECK(focal_cost(0.5) == doctest::Approx(0.125 * std::log(0.5)).epsilon(1e-12));
  CHECK(focal_cost(0.5) == doctest::Approx(-0.0866).epsilon(1e-3));

  Rng rng(1);
  for (int round = 0; round < 200; ++round) {
    const double score = rng.uniform();
    CHECK(focal_cost(score) == doctest::Approx(focal_oracle(score)).epsilon(1e-12));
  }
}

TEST_CASE("focal cost is strictly decreasing and clamped") {
  Rng rng(2);
  for (int round = 0; round < 1000; ++round) {
    double a = rng.uniform();
    double b = rng.uniform();
    if (a == b) continue;
    if (a > b) std::swap(a, b);
    CHECK(focal_cost(a) > focal_cost(b));
  }
  CHECK(std::isfinite(focal_cost(0.0)));
  CHECK(std::isfinite(focal_cost(1.0)));
  FocalParams params;
  CHECK(focal_cost(0.0) == focal_cost(params.clamp));
  CHECK(focal_cost(1.0) == focal_cost(1.0 - params.clamp));
  CHECK(focal_cost(0.0) > 0.0);   // confident miss is penalized
  CHECK(focal_cost(1.0) < 0.0);   // confident hit is rewarded
}

TEST_CASE("focal cost validates parameters and scores") {
  FocalParams params;
  params.alpha = 1.5;
  CHECK_THROWS_AS(focal_cost(0.5, params), ConfigError);
  params = {};
  params.gamma = -1.0;
  CHECK_THROWS_AS(focal_cost(0.5, params), ConfigError);
  params = {};
  params.clamp = 0.5;
  CHECK_THROWS_AS(focal_cost(0.5, params), ConfigError);
  CHECK_THROWS_AS(focal_cost(std::numeric_limits<double>::quiet_NaN()), DataError);
}

TEST_CASE("cost matrix replicates instances and masks non-text cells") {
  const std::vector<Contour> gts = {rectangle(0, 0, 30, 12),
                                    rectangle(60, 0, 95, 14)};
  ScenarioSpec spec;
  spec.grid_h = 4;
  spec.grid_w = 5;
  spec.gts = gts;
  spec.seed = 3;
  const PredictionGrid grid = simulate_grid(spec);

  const int k = 3;
  const double lambda = 2.0;
  const CostMatrix cost = cost_matrix(grid, gts, k, lambda);
  CHECK(cost.rows() == 20);
  CHECK(cost.cols() == 6);
  CHECK(cost.replication == k);
  CHECK(cost.instances == 2);

  for (int cell = 0; cell < cost.rows(); ++cell) {
    for (int j = 0; j < 2; ++j) {
      // The k columns of one instance are identical.
      for (int r = 1; r < k; ++r) {
        CHECK(cost.entries(cell, j * k + r) == cost.entries(cell, j * k));
      }
      const double entry = cost.entries(cell, j * k);
      if (!grid.in_text_region[static_cast<std::size_t>(cell)]) {
        CHECK(entry == kCostSentinel);
      } else {
        // Independent re-evaluation: focal plus lambda times the summed
        // per-vertex distance.
        double regression = 0.0;
        const Contour& pred = grid.contours[static_cast<std::size_t>(cell)];
        for (int v = 0; v < pred.size(); ++v) {
          const Point d = pred.points[static_cast<std::size_t>(v)] -
                          gts[static_cast<std::size_t>(j)].points[static_cast<std::size_t>(v)];
          regression += std::hypot(d.x, d.y);
        }
        const double expected =
            focal_oracle(grid.scores[static_cast<std::size_t>(cell)]) +
            lambda * regression;
        CHECK(std::abs(entry - expected) <= 1e-10);
      }
    }
  }
}

TEST_CASE("per-coordinate l1 regression is supported") {
  const std::vector<Contour> gts = {rectangle(0, 0, 10, 10)};
  const PredictionGrid grid = tiny_grid(2, 2, gts, 4);
  const CostMatrix l2 = cost_matrix(grid, gts, 1, 1.0, FocalParams{},
                                    RegressionNorm::kPerVertexL2);
  const CostMatrix l1 = cost_matrix(grid, gts, 1, 1.0, FocalParams{},
                                    RegressionNorm::kPerCoordL1);
  for (int cell = 0; cell < 4; ++cell) {
    double l1_sum = 0.0;
    const Contour& pred = grid.contours[static_cast<std::size_t>(cell)];
    for (int v = 0; v < pred.size(); ++v) {
      const Point d = pred.points[static_cast<std::size_t>(v)] -
                      gts[0].points[static_cast<std::size_t>(v)];
      l1_sum += std::abs(d.x) + std::abs(d.y);
    }
    const double focal_part =
        focal_oracle(grid.scores[static_cast<std::size_t>(cell)]);
    CHECK(std::abs(l1.entries(cell, 0) - (focal_part + l1_sum)) <= 1e-10);
    // l1 >= l2 per vertex, with equality only for axis-aligned offsets.
    CHECK(l1.entries(cell, 0) >= l2.entries(cell, 0) - 1e-12);
  }
}

TEST_CASE("cost matrix validates shapes and parameters") {
  const std::vector<Contour> gts = {rectangle(0, 0, 10, 10)};
  const PredictionGrid grid = tiny_grid(2, 2, gts, 5);
  CHECK_THROWS_AS(cost_matrix(grid, gts, 0, 1.0), ConfigError);
  CHECK_THROWS_AS(cost_matrix(grid, gts, 1, -0.5), ConfigError);
  CHECK_THROWS_AS(cost_matrix(grid, {}, 1, 1.0), DataError);

  PredictionGrid broken = grid;
  broken.scores[0] = 1.5;
  CHECK_THROWS_AS(cost_matrix(broken, gts, 1, 1.0), DataError);
  broken = grid;
  broken.scores.pop_back();
  CHECK_THROWS_AS(cost_matrix(broken, gts, 1, 1.0), DataError);
  broken = grid;
  broken.contours[1].points.pop_back();
  CHECK_THROWS_AS(cost_matrix(broken, gts, 1, 1.0), DataError);
}

TEST_CASE("hungarian reproduces the worked example") {
  Eigen::MatrixXd entries(3, 3);
  entries << 1, 2, 3, 2, 4, 6, 3, 6, 9;
  const Assignment result = hungarian(wrap_matrix(entries));
  CHECK(result.total_cost == 10.0);
  CHECK(result.complete);
  REQUIRE(result.pairs.size() == 3);
  // Anti-diagonal optimum: 3 + 4 + 3.
  CHECK(result.pairs[0] == std::pair<int, int>{2, 0});
  CHECK(result.pairs[1] == std::pair<int, int>{1, 1});
  CHECK(result.pairs[2] == std::pair<int, int>{0, 2});
}

TEST_CASE("hungarian equals brute force on random matrices") {
  Rng rng(6);
  for (int round = 0; round < 300; ++round) {
    const int rows = static_cast<int>(rng.uniform_int(1, 7));
    const int cols = static_cast<int>(rng.uniform_int(1, 7));
    Eigen::MatrixXd entries(rows, cols);
    for (int r = 0; r < rows; ++r) {
      for (int c = 0; c < cols; ++c) {
        // Integer costs make optimal totals exactly comparable.
        entries(r, c) = static_cast<double>(rng.uniform_int(-20, 50));
      }
    }
    // Sprinkle forbidden pairs.
    for (int r = 0; r < rows; ++r) {
      for (int c = 0; c < cols; ++c) {
        if (rng.uniform() < 0.15) entries(r, c) = kCostSentinel;
      }
    }
    const Assignment result = hungarian(wrap_matrix(entries));
    const auto oracle = brute_force_assignment(entries);
    CHECK(result.total_cost == oracle.total);
    CHECK(static_cast<int>(result.pairs.size()) == oracle.assigned);

    // Structural checks: distinct rows, sorted by instance, real entries.
    std::set<int> rows_used;
    for (const auto& [row, instance] : result.pairs) {
      CHECK(rows_used.insert(row).second);
      CHECK(entries(row, instance) < kCostSentinel);
    }
    for (std::size_t i = 1; i < result.pairs.size(); ++i) {
      CHECK(result.pairs[i - 1].second <= result.pairs[i].second);
    }
  }
}

TEST_CASE("hungarian reports unmatchable columns instead of forcing them") {
  Eigen::MatrixXd entries(3, 2);
  entries << 1, kCostSentinel, 2, kCostSentinel, 3, kCostSentinel;
  const Assignment result = hungarian(wrap_matrix(entries));
  REQUIRE(result.pairs.size() == 1);
  CHECK(result.pairs[0] == std::pair<int, int>{0, 0});
  CHECK(result.total_cost == 1.0);
  CHECK_FALSE(result.complete);
  CHECK(result.unmatched_instances == std::vector<int>{1});
}

TEST_CASE("more columns than rows leaves the surplus unmatched") {
  Eigen::MatrixXd entries(2, 3);
  entries << 5, 1, 9, 2, 7, 3;
  const Assignment result = hungarian(wrap_matrix(entries));
  const auto oracle = brute_force_assignment(entries);
  CHECK(result.total_cost == oracle.total);
  CHECK(static_cast<int>(result.pairs.size()) == 2);
  CHECK_FALSE(result.complete);
  CHECK(result.unmatched_instances.size() == 1);
}

TEST_CASE("k-replication assigns k distinct rows per instance") {
  const std::vector<Contour> gts = {rectangle(0, 0, 40, 16),
                                    rectangle(100, 0, 150, 20)};
  const PredictionGrid grid = tiny_grid(6, 6, gts, 7);
  const int k = 3;
  const Assignment result = sparse_assign(grid, gts, k, 2.0);
  CHECK(result.complete);
  REQUIRE(result.pairs.size() == static_cast<std::size_t>(k * 2));
  std::set<int> rows_used;
  int per_instance[2] = {0, 0};
  for (const auto& [row, instance] : result.pairs) {
    CHECK(rows_used.insert(row).second);  // no double-booked cells
    ++per_instance[instance];
  }
  CHECK(per_instance[0] == k);
  CHECK(per_instance[1] == k);
  CHECK(result.unmatched_instances.empty());
}

TEST_CASE("assignments prefer near, confident cells") {
  // One instance, K=1: the chosen cell should be the cheapest by the same
  // cost the matrix builder reports.
  const std::vector<Contour> gts = {rectangle(10, 10, 50, 26)};
  const PredictionGrid grid = tiny_grid(5, 5, gts, 8);
  const CostMatrix cost = cost_matrix(grid, gts, 1, 2.0);
  const Assignment result = hungarian(cost);
  REQUIRE(result.pairs.size() == 1);
  Eigen::Index best;
  cost.entries.col(0).minCoeff(&best);
  CHECK(result.pairs[0].first == static_cast<int>(best));
}

TEST_CASE("simulator is deterministic and well-formed") {
  const std::vector<Contour> gts = {rectangle(0, 0, 30, 10),
                                    rectangle(50, 30, 90, 44)};
  ScenarioSpec spec;
  spec.grid_h = 7;
  spec.grid_w = 9;
  spec.gts = gts;
  spec.seed = 11;
  const PredictionGrid a = simulate_grid(spec);
  const PredictionGrid b = simulate_grid(spec);
  REQUIRE(a.cells() == 63);
  CHECK(a.scores == b.scores);
  for (int cell = 0; cell < a.cells(); ++cell) {
    CHECK(a.scores[static_cast<std::size_t>(cell)] >= 0.0);
    CHECK(a.scores[static_cast<std::size_t>(cell)] <= 1.0);
    CHECK(a.contours[static_cast<std::size_t>(cell)].size() == 4);
  }
  CHECK(a.in_text_region == b.in_text_region);

  ScenarioSpec reseeded = spec;
  reseeded.seed = 12;
  const PredictionGrid c = simulate_grid(reseeded);
  CHECK(a.scores != c.scores);
}

TEST_CASE("text region mask matches point membership") {
  const std::vector<Contour> gts = {rectangle(0, 0, 40, 40)};
  ScenarioSpec spec;
  spec.grid_h = 8;
  spec.grid_w = 8;
  spec.gts = gts;
  spec.seed = 13;
  spec.has_extent = true;
  spec.extent = {-10.0, -10.0, 70.0, 70.0};
  const PredictionGrid grid = simulate_grid(spec);
  const double cell_w = 80.0 / 8;
  const double cell_h = 80.0 / 8;
  for (int r = 0; r < 8; ++r) {
    for (int c = 0; c < 8; ++c) {
      const Point center{-10.0 + (c + 0.5) * cell_w, -10.0 + (r + 0.5) * cell_h};
      const bool inside = point_in_polygon(center, gts[0]);
      CHECK(static_cast<bool>(grid.in_text_region[static_cast<std::size_t>(
                r * 8 + c)]) == inside);
    }
  }
}

TEST_CASE("scenario files load and validate") {
  testsupport::TempDir dir;
  const std::string good = dir.file("good.json");
  testsupport::spit(good, R"({
    "grid": {"h": 4, "w": 6},
    "gts": [[[0, 0], [20, 0], [20, 10], [0, 10]]],
    "score_noise": 0.2,
    "contour_noise": 0.1,
    "tr_dilate": 2.5,
    "k": 2,
    "lambda": 1.5,
    "seed": 9,
    "extent": [-5, -5, 30, 20]
  })");
  const ScenarioSpec spec = load_scenario(good);
  CHECK(spec.grid_h == 4);
  CHECK(spec.grid_w == 6);
  REQUIRE(spec.gts.size() == 1);
  CHECK(spec.gts[0].size() == 4);
  CHECK(spec.k == 2);
  CHECK(spec.lambda == 1.5);
  CHECK(spec.seed == 9);
  CHECK(spec.tr_dilate == 2.5);
  REQUIRE(spec.has_extent);
  CHECK(spec.extent[2] == 30.0);

  const std::string unknown = dir.file("unknown.json");
  testsupport::spit(unknown, R"({"grid": {"h": 2, "w": 2}, "gts": [[[0,0],[1,0],[1,1]]], "typo_key": 1})");
  CHECK_THROWS_AS(load_scenario(unknown), ConfigError);

  const std::string no_gts = dir.file("no_gts.json");
  testsupport::spit(no_gts, R"({"grid": {"h": 2, "w": 2}, "gts": []})");
  CHECK_THROWS_AS(load_scenario(no_gts), DataError);

  const std::string ragged = dir.file("ragged.json");
  testsupport::spit(ragged, R"({"grid": {"h": 2, "w": 2},
    "gts": [[[0,0],[9,0],[9,9],[0,9]], [[0,0],[5,0],[5,5]]]})");
  CHECK_THROWS_AS(load_scenario(ragged), DataError);

  const std::string bad_k = dir.file("bad_k.json");
  testsupport::spit(bad_k, R"({"grid": {"h": 2, "w": 2},
    "gts": [[[0,0],[9,0],[9,9]]], "k": 0})");
  CHECK_THROWS_AS(load_scenario(bad_k), ConfigError);

  const std::string mangled = dir.file("mangled.json");
  testsupport::spit(mangled, "{ not json");
  CHECK_THROWS_AS(load_scenario(mangled), DataError);

  CHECK_THROWS_AS(load_scenario(dir.file("absent.json")), DataError);
}

TEST_CASE("assignment json reports pairs with grid coordinates") {
  testsupport::TempDir dir;
  const std::vector<Contour> gts = {rectangle(0, 0, 60, 24)};
  ScenarioSpec spec;
  spec.grid_h = 5;
  spec.grid_w = 4;
  spec.gts = gts;
  spec.seed = 21;
  spec.k = 2;
  spec.tr_dilate = 1e6;
  const PredictionGrid grid = simulate_grid(spec);
  const Assignment assignment =
      sparse_assign(grid, gts, spec.k, spec.lambda);
  const std::string path = dir.file("assign.json");
  write_assignment_json(assignment, grid, spec, "deadbeef", path);

  const json doc = json::parse(testsupport::slurp(path));
  CHECK(doc["grid"]["h"] == 5);
  CHECK(doc["grid"]["w"] == 4);
  CHECK(doc["k"] == 2);
  CHECK(doc["seed"] == 21);
  CHECK(doc["config_hash"] == "deadbeef");
  CHECK(doc["complete"] == assignment.complete);
  CHECK(doc["total_cost"] == assignment.total_cost);
  REQUIRE(doc["pairs"].size() == assignment.pairs.size());
  for (std::size_t i = 0; i < assignment.pairs.size(); ++i) {
    const json& pair = doc["pairs"][i];
    CHECK(pair["row"] == assignment.pairs[i].first);
    CHECK(pair["instance"] == assignment.pairs[i].second);
    const int row = pair["row"].get<int>();
    CHECK(pair["cell"][0] == row / 4);
    CHECK(pair["cell"][1] == row % 4);
  }
}
