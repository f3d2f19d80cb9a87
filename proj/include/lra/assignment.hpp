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
#include <array>
#include <string>
#include <utility>
#include <vector>

#include "lra/geometry_types.hpp"

namespace lra {

// Focal-style classification cost of assigning a prediction with confidence
// `score`. Strictly decreasing in the score, negative for confident
// predictions; scores are clamped away from {0, 1} before the logarithms.
struct FocalParams {
  double alpha = 0.25;
  double gamma = 2.0;
  double clamp = 1e-7;
};

double focal_cost(double score, const FocalParams& params = {});

// How the contour regression residual is accumulated in the matching cost.
enum class RegressionNorm {
  kPerVertexL2,  // sum over vertices of the Euclidean distance (default)
  kPerCoordL1,   // sum over coordinates of absolute differences
};

// Dense per-cell detector output on an h x w grid, row-major.
struct PredictionGrid {
  int height = 0;
  int width = 0;
  std::vector<double> scores;                // confidence in [0, 1]
  std::vector<Contour> contours;             // one decoded contour per cell
  std::vector<std::uint8_t> in_text_region;  // eligibility mask

  int cells() const { return height * width; }
};

// Entries at or above this value mark forbidden pairs (cells outside the
// text region). Kept finite so matrices stay printable and comparable.
inline constexpr double kCostSentinel = 1e18;

// (cells) x (replication * instances) cost matrix; the K columns of one
// instance are contiguous and identical by construction.
struct CostMatrix {
  Eigen::MatrixXd entries;
  int replication = 0;  // K
  int instances = 0;    // number of ground-truth contours

  int rows() const { return static_cast<int>(entries.rows()); }
  int cols() const { return static_cast<int>(entries.cols()); }
};

// Builds the matching cost: focal term plus lambda times the regression
// residual between the cell's predicted contour and the instance, replicated
// K times per instance; sentinel outside the text region.
CostMatrix cost_matrix(const PredictionGrid& grid, const std::vector<Contour>& gts,
                       int k, double lambda, const FocalParams& focal = {},
                       RegressionNorm norm = RegressionNorm::kPerVertexL2);

struct Assignment {
  // (row index, instance index), sorted by instance then row. Rows are
  // distinct; a complete assignment has exactly K pairs per instance.
  std::vector<std::pair<int, int>> pairs;
  double total_cost = 0.0;
  bool complete = true;
  std::vector<int> unmatched_instances;  // instances short of K rows, unique
};

// Optimal min-cost matching of columns to distinct rows (shortest
// augmenting path with potentials). Columns that can only be served by
// sentinel entries are reported unmatched instead of being force-assigned.
Assignment hungarian(const CostMatrix& cost);

// cost_matrix followed by hungarian.
Assignment sparse_assign(const PredictionGrid& grid, const std::vector<Contour>& gts,
                         int k, double lambda, const FocalParams& focal = {},
                         RegressionNorm norm = RegressionNorm::kPerVertexL2);

// A self-contained matching scenario: ground truths plus the parameters of a
// synthetic detector head whose grid the simulator fabricates.
struct ScenarioSpec {
  int grid_h = 16;
  int grid_w = 16;
  std::vector<Contour> gts;
  double score_noise = 0.1;
  double contour_noise = 0.05;  // vertex jitter, relative to the GT diagonal
  double tr_dilate = 0.0;       // extra text-region margin around each GT
  int k = 3;
  double lambda = 2.0;
  std::uint64_t seed = 1;
  std::array<double, 4> extent{0.0, 0.0, 0.0, 0.0};  // x0, y0, x1, y1
  bool has_extent = false;  // otherwise the padded joint GT bbox is used
};

ScenarioSpec load_scenario(const std::string& path);

// Deterministic synthetic head: per-cell scores peak near instances, per-cell
// contours are jittered copies of the nearest instance, and the text-region
// mask marks cells whose center lies in (or within tr_dilate of) an instance.
PredictionGrid simulate_grid(const ScenarioSpec& spec);

void write_assignment_json(const Assignment& assignment, const PredictionGrid& grid,
                           const ScenarioSpec& spec, const std::string& config_hash,
                           const std::string& path);

}  // namespace lra
