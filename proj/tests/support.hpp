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

// Shared test fixtures: independent oracles and small data generators. The
// oracles deliberately avoid the library code paths they are used to check.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "lra/geometry_types.hpp"

namespace testsupport {

// Unique scratch directory, removed on destruction.
class TempDir {
 public:
  TempDir() {
    const auto base = std::filesystem::temp_directory_path();
    static std::atomic<int> counter{0};
    path_ = base / ("lra-test-" + std::to_string(::getpid()) + "-" +
                    std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  std::filesystem::path path_;
};

inline std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

inline void spit(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
}

// Star-shaped polygon around a center: strictly increasing angles with
// positive radii can never self-intersect.
inline lra::Contour star_polygon(std::mt19937& gen, int n_vertices = 12,
                                 double cx = 500.0, double cy = 500.0,
                                 double r_lo = 40.0, double r_hi = 120.0) {
  std::uniform_real_distribution<double> radius(r_lo, r_hi);
  std::uniform_real_distribution<double> jitter(0.05, 0.95);
  lra::Contour c;
  c.points.reserve(static_cast<std::size_t>(n_vertices));
  for (int i = 0; i < n_vertices; ++i) {
    const double angle =
        2.0 * M_PI * (static_cast<double>(i) + jitter(gen)) / n_vertices;
    const double r = radius(gen);
    c.points.push_back({cx + r * std::cos(angle), cy + r * std::sin(angle)});
  }
  return c;
}

inline lra::Contour regular_polygon(int n, double cx, double cy, double radius,
                                    double phase = 0.0) {
  lra::Contour c;
  for (int i = 0; i < n; ++i) {
    const double angle = phase + 2.0 * M_PI * i / n;
    c.points.push_back({cx + radius * std::cos(angle), cy + radius * std::sin(angle)});
  }
  return c;
}

inline lra::Contour rectangle(double x0, double y0, double x1, double y1) {
  return lra::Contour{{{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}}};
}

// Shoelace area, positive for counter-clockwise orientation.
inline double polygon_area(const lra::Contour& c) {
  double twice = 0.0;
  const int n = c.size();
  for (int i = 0; i < n; ++i) {
    const lra::Point& p = c.points[static_cast<std::size_t>(i)];
    const lra::Point& q = c.points[static_cast<std::size_t>((i + 1) % n)];
    twice += p.x * q.y - q.x * p.y;
  }
  return 0.5 * std::abs(twice);
}

// Random orthonormal columns via QR of a Gaussian matrix; independent of the
// library's fitting code.
inline Eigen::MatrixXd random_orthonormal(std::mt19937& gen, int rows, int cols) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd g(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) g(i, j) = normal(gen);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(rows, cols);
  return q;
}

// Sum over columns of the Euclidean residual norm against span(u).
inline double l12_oracle(const Eigen::MatrixXd& data, const Eigen::MatrixXd& u) {
  const Eigen::MatrixXd residual = data - u * (u.transpose() * data);
  double total = 0.0;
  for (Eigen::Index j = 0; j < residual.cols(); ++j) total += residual.col(j).norm();
  return total;
}

// Minimum total cost of assigning every column to a distinct row by brute
// force, skipping forbidden entries (>= threshold). Returns the minimum and
// how many columns an optimal solution leaves unassigned (forbidden-only
// columns are dropped rather than force-matched).
struct BruteForceResult {
  double total = 0.0;
  int assigned = 0;
};

inline void brute_force_recurse(const Eigen::MatrixXd& cost, double forbidden,
                                std::size_t col, std::vector<bool>& used,
                                double running, int matched, BruteForceResult& best) {
  const auto n_cols = static_cast<std::size_t>(cost.cols());
  if (col == n_cols) {
    if (matched > best.assigned ||
        (matched == best.assigned && running < best.total)) {
      best.total = running;
      best.assigned = matched;
    }
    return;
  }
  // Option: leave this column unmatched.
  brute_force_recurse(cost, forbidden, col + 1, used, running, matched, best);
  for (Eigen::Index row = 0; row < cost.rows(); ++row) {
    if (used[static_cast<std::size_t>(row)]) continue;
    const double entry = cost(row, static_cast<Eigen::Index>(col));
    if (entry >= forbidden) continue;
    used[static_cast<std::size_t>(row)] = true;
    brute_force_recurse(cost, forbidden, col + 1, used,
                        running + entry, matched + 1, best);
    used[static_cast<std::size_t>(row)] = false;
  }
}

inline BruteForceResult brute_force_assignment(const Eigen::MatrixXd& cost,
                                               double forbidden = 5e17) {
  BruteForceResult best;
  best.total = std::numeric_limits<double>::infinity();
  best.assigned = -1;
  std::vector<bool> used(static_cast<std::size_t>(cost.rows()), false);
  brute_force_recurse(cost, forbidden, 0, used, 0.0, 0, best);
  if (best.assigned < 0) {
    best.assigned = 0;
    best.total = 0.0;
  }
  return best;
}

}  // namespace testsupport
