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

#include "lra/assignment.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>

#include <nlohmann/json.hpp>

#include "lra/geometry.hpp"
#include "lra/hashing.hpp"
#include "lra/rng.hpp"

namespace lra {

using nlohmann::json;

double focal_cost(double score, const FocalParams& params) {
  if (!(params.alpha >= 0.0 && params.alpha <= 1.0)) {
    throw ConfigError("focal alpha must lie in [0, 1]");
  }
  if (!(params.gamma >= 0.0)) throw ConfigError("focal gamma must be >= 0");
  if (!(params.clamp > 0.0 && params.clamp < 0.5)) {
    throw ConfigError("focal clamp must lie in (0, 0.5)");
  }
  if (!std::isfinite(score)) throw DataError("focal score must be finite");
  const double b = std::clamp(score, params.clamp, 1.0 - params.clamp);
  return -params.alpha * std::pow(1.0 - b, params.gamma) * std::log(b) +
         (1.0 - params.alpha) * std::pow(b, params.gamma) * std::log(1.0 - b);
}

CostMatrix cost_matrix(const PredictionGrid& grid, const std::vector<Contour>& gts,
                       int k, double lambda, const FocalParams& focal,
                       RegressionNorm norm) {
  if (grid.height < 1 || grid.width < 1) throw DataError("prediction grid is empty");
  const int cells = grid.cells();
  if (static_cast<int>(grid.scores.size()) != cells ||
      static_cast<int>(grid.contours.size()) != cells ||
      static_cast<int>(grid.in_text_region.size()) != cells) {
    throw DataError("prediction grid field lengths do not match h * w");
  }
  if (k < 1) throw ConfigError("replication k must be >= 1");
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw ConfigError("lambda must be finite and >= 0");
  }
  if (gts.empty()) throw DataError("cost_matrix requires at least one instance");
  const int n = gts.front().size();
  if (n < 3) throw DataError("instance contours need at least three vertices");
  for (std::size_t j = 0; j < gts.size(); ++j) {
    if (gts[j].size() != n) {
      throw DataError("instance " + std::to_string(j) + " has a mismatched vertex count");
    }
  }
  for (int i = 0; i < cells; ++i) {
    if (!(grid.scores[i] >= 0.0 && grid.scores[i] <= 1.0)) {
      throw DataError("score out of [0, 1] at cell " + std::to_string(i));
    }
    if (grid.contours[i].size() != n) {
      throw DataError("predicted contour at cell " + std::to_string(i) +
                      " has a mismatched vertex count");
    }
  }

  const int instances = static_cast<int>(gts.size());
  CostMatrix out;
  out.replication = k;
  out.instances = instances;
  out.entries.resize(cells, static_cast<Eigen::Index>(k) * instances);

  for (int i = 0; i < cells; ++i) {
    if (!grid.in_text_region[i]) {
      out.entries.row(i).setConstant(kCostSentinel);
      continue;
    }
    const double fl = focal_cost(grid.scores[i], focal);
    const Contour& pred = grid.contours[i];
    for (int j = 0; j < instances; ++j) {
      double regression = 0.0;
      if (norm == RegressionNorm::kPerVertexL2) {
        for (int v = 0; v < n; ++v) {
          regression += lra::norm(pred.points[v] - gts[j].points[v]);
        }
      } else {
        for (int v = 0; v < n; ++v) {
          regression += std::abs(pred.points[v].x - gts[j].points[v].x) +
                        std::abs(pred.points[v].y - gts[j].points[v].y);
        }
      }
      const double value = fl + lambda * regression;
      if (!std::isfinite(value)) {
        throw NumericalError("non-finite matching cost at cell " + std::to_string(i));
      }
      for (int r = 0; r < k; ++r) {
        out.entries(i, static_cast<Eigen::Index>(j) * k + r) = value;
      }
    }
  }
  return out;
}

Assignment hungarian(const CostMatrix& cost) {
  const int n_rows = cost.rows();
  const int n_cols = cost.cols();
  if (n_rows < 1 || n_cols < 1) throw DataError("hungarian: empty cost matrix");
  if (cost.replication < 1 || cost.instances < 1 ||
      cost.replication * cost.instances != n_cols) {
    throw DataError("hungarian: replication metadata does not match the matrix");
  }
  if (!cost.entries.allFinite()) throw DataError("hungarian: non-finite cost entries");

  // Sentinel (and virtual padding) entries are remapped to a big-M that
  // dominates every feasible assignment but keeps the potentials well
  // conditioned; matches landing on them are reported as unmatched.
  const double forbidden = kCostSentinel / 2.0;
  double max_abs = 0.0;
  for (Eigen::Index r = 0; r < cost.entries.rows(); ++r) {
    for (Eigen::Index c = 0; c < cost.entries.cols(); ++c) {
      const double v = cost.entries(r, c);
      if (v < forbidden) max_abs = std::max(max_abs, std::abs(v));
    }
  }
  const double big = 2.0 * (n_cols + 1) * (max_abs + 1.0);
  const int padded_rows = std::max(n_rows, n_cols);
  const auto entry = [&](int row, int col) -> double {
    if (row >= n_rows) return big;
    const double v = cost.entries(row, col);
    return v >= forbidden ? big : v;
  };

  // Shortest augmenting path with potentials; columns are the small side.
  // Ties in the path selection resolve to the lowest row index.
  const double inf = std::numeric_limits<double>::infinity();
  const int m = padded_rows;
  std::vector<double> col_pot(n_cols + 1, 0.0), row_pot(m + 1, 0.0);
  std::vector<int> matched_col(m + 1, 0), way(m + 1, 0);
  for (int i = 1; i <= n_cols; ++i) {
    matched_col[0] = i;
    int j0 = 0;
    std::vector<double> min_slack(m + 1, inf);
    std::vector<char> used(m + 1, 0);
    do {
      used[j0] = 1;
      const int i0 = matched_col[j0];
      int j1 = -1;
      double delta = inf;
      for (int j = 1; j <= m; ++j) {
        if (used[j]) continue;
        const double reduced = entry(j - 1, i0 - 1) - col_pot[i0] - row_pot[j];
        if (reduced < min_slack[j]) {
          min_slack[j] = reduced;
          way[j] = j0;
        }
        if (min_slack[j] < delta) {
          delta = min_slack[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= m; ++j) {
        if (used[j]) {
          col_pot[matched_col[j]] += delta;
          row_pot[j] -= delta;
        } else {
          min_slack[j] -= delta;
        }
      }
      j0 = j1;
    } while (matched_col[j0] != 0);
    do {
      const int j1 = way[j0];
      matched_col[j0] = matched_col[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  Assignment result;
  std::vector<int> matched_per_instance(cost.instances, 0);
  for (int j = 1; j <= m; ++j) {
    const int col = matched_col[j];
    if (col == 0) continue;
    const int row = j - 1;
    const int instance = (col - 1) / cost.replication;
    if (row < n_rows && cost.entries(row, col - 1) < forbidden) {
      result.pairs.emplace_back(row, instance);
      result.total_cost += cost.entries(row, col - 1);
      ++matched_per_instance[instance];
    }
  }
  std::sort(result.pairs.begin(), result.pairs.end(),
            [](const auto& a, const auto& b) {
              return a.second != b.second ? a.second < b.second : a.first < b.first;
            });
  for (int j = 0; j < cost.instances; ++j) {
    if (matched_per_instance[j] < cost.replication) {
      result.unmatched_instances.push_back(j);
    }
  }
  result.complete = result.unmatched_instances.empty();
  return result;
}

Assignment sparse_assign(const PredictionGrid& grid, const std::vector<Contour>& gts,
                         int k, double lambda, const FocalParams& focal,
                         RegressionNorm norm) {
  return hungarian(cost_matrix(grid, gts, k, lambda, focal, norm));
}

namespace {

double point_segment_distance(Point p, Point a, Point b) {
  const Point d = b - a;
  const double len_sq = d.x * d.x + d.y * d.y;
  double t = len_sq > 0.0 ? ((p.x - a.x) * d.x + (p.y - a.y) * d.y) / len_sq : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return norm(p - (a + t * d));
}

double point_polygon_distance(Point p, const Contour& poly) {
  if (point_in_polygon(p, poly)) return 0.0;
  double best = std::numeric_limits<double>::infinity();
  const int n = poly.size();
  for (int i = 0; i < n; ++i) {
    best = std::min(best, point_segment_distance(p, poly.points[i],
                                                 poly.points[(i + 1) % n]));
  }
  return best;
}

}  // namespace

PredictionGrid simulate_grid(const ScenarioSpec& spec) {
  if (spec.grid_h < 1 || spec.grid_w < 1) throw ConfigError("grid must be at least 1x1");
  if (spec.gts.empty()) throw DataError("scenario has no ground-truth contours");
  if (spec.score_noise < 0.0 || spec.contour_noise < 0.0 || spec.tr_dilate < 0.0) {
    throw ConfigError("scenario noise levels must be >= 0");
  }

  double x0, y0, x1, y1;
  if (spec.has_extent) {
    x0 = spec.extent[0];
    y0 = spec.extent[1];
    x1 = spec.extent[2];
    y1 = spec.extent[3];
    if (!(x0 < x1 && y0 < y1)) throw ConfigError("scenario extent is degenerate");
  } else {
    BBox joint = bounding_box(spec.gts.front());
    for (const Contour& gt : spec.gts) {
      const BBox box = bounding_box(gt);
      joint.min_x = std::min(joint.min_x, box.min_x);
      joint.min_y = std::min(joint.min_y, box.min_y);
      joint.max_x = std::max(joint.max_x, box.max_x);
      joint.max_y = std::max(joint.max_y, box.max_y);
    }
    const double pad_x = 0.1 * std::max(joint.width(), 1.0);
    const double pad_y = 0.1 * std::max(joint.height(), 1.0);
    x0 = joint.min_x - pad_x;
    y0 = joint.min_y - pad_y;
    x1 = joint.max_x + pad_x;
    y1 = joint.max_y + pad_y;
  }

  std::vector<Point> centroids;
  std::vector<double> diagonals;
  for (const Contour& gt : spec.gts) {
    centroids.push_back(centroid(gt));
    diagonals.push_back(bounding_box(gt).diagonal());
  }

  PredictionGrid grid;
  grid.height = spec.grid_h;
  grid.width = spec.grid_w;
  grid.scores.resize(grid.cells());
  grid.contours.resize(grid.cells());
  grid.in_text_region.resize(grid.cells());

  Rng rng(spec.seed);
  const double cell_w = (x1 - x0) / spec.grid_w;
  const double cell_h = (y1 - y0) / spec.grid_h;
  for (int r = 0; r < spec.grid_h; ++r) {
    for (int c = 0; c < spec.grid_w; ++c) {
      const int cell = r * spec.grid_w + c;
      const Point center{x0 + (c + 0.5) * cell_w, y0 + (r + 0.5) * cell_h};

      int nearest = 0;
      double nearest_dist = norm(center - centroids[0]);
      for (std::size_t j = 1; j < spec.gts.size(); ++j) {
        const double d = norm(center - centroids[j]);
        if (d < nearest_dist) {
          nearest_dist = d;
          nearest = static_cast<int>(j);
        }
      }

      const double falloff =
          std::max(0.0, 1.0 - nearest_dist / (0.75 * diagonals[nearest]));
      const double noisy =
          falloff + spec.score_noise * (2.0 * rng.uniform() - 1.0);
      grid.scores[cell] = std::clamp(noisy, 0.0, 1.0);

      Contour pred = spec.gts[nearest];
      const double jitter = spec.contour_noise * diagonals[nearest];
      for (Point& p : pred.points) {
        p.x += jitter * rng.normal();
        p.y += jitter * rng.normal();
      }
      grid.contours[cell] = std::move(pred);

      bool in_region = false;
      for (const Contour& gt : spec.gts) {
        if (point_polygon_distance(center, gt) <= spec.tr_dilate) {
          in_region = true;
          break;
        }
      }
      grid.in_text_region[cell] = in_region ? 1 : 0;
    }
  }
  return grid;
}

ScenarioSpec load_scenario(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open scenario file: " + path);
  json doc = json::parse(in, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded() || !doc.is_object()) {
    throw DataError("scenario file is not a JSON object: " + path);
  }

  static const std::vector<std::string> known = {
      "grid",  "gts",  "score_noise", "contour_noise", "tr_dilate",
      "k",     "lambda", "seed",      "extent"};
  for (const auto& [key, value] : doc.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw ConfigError("unknown scenario key '" + key + "'");
    }
  }

  try {
    ScenarioSpec spec;
    if (!doc.contains("grid") || !doc["grid"].is_object()) {
      throw DataError("scenario is missing the grid object");
    }
    spec.grid_h = doc["grid"].at("h").get<int>();
    spec.grid_w = doc["grid"].at("w").get<int>();
    if (!doc.contains("gts") || !doc["gts"].is_array() || doc["gts"].empty()) {
      throw DataError("scenario needs a non-empty gts array");
    }
    for (const json& poly : doc["gts"]) {
      Contour gt;
      if (!poly.is_array() || poly.size() < 3) {
        throw DataError("scenario instance needs at least three vertices");
      }
      for (const json& pair : poly) {
        if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number() ||
            !pair[1].is_number()) {
          throw DataError("scenario vertex is not a [x, y] number pair");
        }
        gt.points.push_back({pair[0].get<double>(), pair[1].get<double>()});
      }
      spec.gts.push_back(std::move(gt));
    }
    for (std::size_t j = 1; j < spec.gts.size(); ++j) {
      if (spec.gts[j].size() != spec.gts[0].size()) {
        throw DataError("scenario instances must share one vertex count");
      }
    }
    if (doc.contains("score_noise")) spec.score_noise = doc["score_noise"].get<double>();
    if (doc.contains("contour_noise")) spec.contour_noise = doc["contour_noise"].get<double>();
    if (doc.contains("tr_dilate")) spec.tr_dilate = doc["tr_dilate"].get<double>();
    if (doc.contains("k")) spec.k = doc["k"].get<int>();
    if (doc.contains("lambda")) spec.lambda = doc["lambda"].get<double>();
    if (doc.contains("seed")) spec.seed = doc["seed"].get<std::uint64_t>();
    if (doc.contains("extent")) {
      const json& extent = doc["extent"];
      if (!extent.is_array() || extent.size() != 4) {
        throw DataError("scenario extent must be [x0, y0, x1, y1]");
      }
      for (int i = 0; i < 4; ++i) spec.extent[i] = extent[i].get<double>();
      spec.has_extent = true;
    }
    if (spec.k < 1) throw ConfigError("scenario k must be >= 1");
    if (!(spec.lambda >= 0.0)) throw ConfigError("scenario lambda must be >= 0");
    return spec;
  } catch (const json::exception& err) {
    throw DataError("malformed scenario file " + path + ": " + err.what());
  }
}

void write_assignment_json(const Assignment& assignment, const PredictionGrid& grid,
                           const ScenarioSpec& spec, const std::string& config_hash,
                           const std::string& path) {
  json doc;
  doc["grid"] = {{"h", grid.height}, {"w", grid.width}};
  doc["k"] = spec.k;
  doc["lambda"] = spec.lambda;
  doc["seed"] = spec.seed;
  doc["config_hash"] = config_hash;
  doc["total_cost"] = assignment.total_cost;
  doc["complete"] = assignment.complete;
  doc["unmatched_instances"] = assignment.unmatched_instances;
  doc["pairs"] = json::array();
  for (const auto& [row, instance] : assignment.pairs) {
    doc["pairs"].push_back({{"row", row},
                            {"cell", {row / grid.width, row % grid.width}},
                            {"instance", instance}});
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open assignment file for writing: " + path);
  out << doc.dump(2) << '\n';
  if (!out.good()) throw DataError("failed while writing assignment file: " + path);
}

}  // namespace lra
