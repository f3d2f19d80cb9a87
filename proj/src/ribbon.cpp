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

#include "lra/ribbon.hpp"

#include <cmath>
#include <string>

#include "lra/geometry.hpp"

namespace lra {
namespace {

struct Bezier {
  Point p0, p1, p2, p3;

  Point at(double t) const {
    const double s = 1.0 - t;
    return (s * s * s) * p0 + (3.0 * s * s * t) * p1 + (3.0 * s * t * t) * p2 +
           (t * t * t) * p3;
  }

  Point tangent(double t) const {
    const double s = 1.0 - t;
    return (3.0 * s * s) * (p1 - p0) + (6.0 * s * t) * (p2 - p1) +
           (3.0 * t * t) * (p3 - p2);
  }
};

}  // namespace

void validate(const RibbonParams& params) {
  const auto ordered = [](double lo, double hi) { return lo <= hi && lo > 0.0; };
  if (!ordered(params.length_lo, params.length_hi)) {
    throw ConfigError("ribbon length range must satisfy 0 < lo <= hi");
  }
  if (!ordered(params.aspect_lo, params.aspect_hi) || params.aspect_lo < 1.0) {
    throw ConfigError("ribbon aspect range must satisfy 1 <= lo <= hi");
  }
  if (params.bend_scale < 0.0) throw ConfigError("ribbon bend_scale must be >= 0");
  if (params.taper_max < 0.0 || params.taper_max >= 1.0) {
    throw ConfigError("ribbon taper_max must be in [0, 1)");
  }
  if (params.rotation_max < 0.0) throw ConfigError("ribbon rotation_max must be >= 0");
  if (params.place_lo > params.place_hi) {
    throw ConfigError("ribbon placement window is inverted");
  }
  if (params.max_retries < 1) throw ConfigError("ribbon max_retries must be >= 1");
}

Contour generate_ribbon(int n_vertices, const RibbonParams& params, Rng& rng) {
  validate(params);
  if (n_vertices < 6 || n_vertices % 2 != 0) {
    throw ConfigError("ribbon vertex count must be even and >= 6");
  }
  const int side = n_vertices / 2;

  for (int attempt = 0; attempt < params.max_retries; ++attempt) {
    // Fixed draw order keeps corpora reproducible across code changes.
    const double length = rng.uniform(params.length_lo, params.length_hi);
    const double aspect = rng.uniform(params.aspect_lo, params.aspect_hi);
    const double bend1 = rng.uniform(-0.3, 0.3) * params.bend_scale * length;
    const double bend2 = rng.uniform(-0.3, 0.3) * params.bend_scale * length;
    const double taper = rng.uniform(0.0, params.taper_max);
    const double theta = rng.uniform(-params.rotation_max, params.rotation_max);
    const double place_x = rng.uniform(params.place_lo, params.place_hi);
    const double place_y = rng.uniform(params.place_lo, params.place_hi);

    const double width0 = length / (2.0 * aspect);
    const Bezier center{{0.0, 0.0},
                        {length / 3.0, bend1},
                        {2.0 * length / 3.0, bend2},
                        {length, 0.0}};

    Contour ribbon;
    ribbon.points.resize(n_vertices);
    for (int i = 0; i < side; ++i) {
      const double t = static_cast<double>(i) / (side - 1);
      const Point c = center.at(t);
      const Point tan = center.tangent(t);
      const double tan_norm = norm(tan);
      const Point normal{-tan.y / tan_norm, tan.x / tan_norm};
      const double half_width = width0 * (1.0 - taper * t);
      ribbon.points[i] = c + half_width * normal;
      ribbon.points[n_vertices - 1 - i] = c - half_width * normal;
    }

    const double cos_t = std::cos(theta);
    const double sin_t = std::sin(theta);
    const Point pivot{length / 2.0, 0.0};
    for (Point& p : ribbon.points) {
      const Point d = p - pivot;
      p = {d.x * cos_t - d.y * sin_t + place_x, d.x * sin_t + d.y * cos_t + place_y};
    }

    if (is_simple(ribbon)) return ribbon;
  }
  throw NumericalError("failed to draw a simple ribbon in " +
                       std::to_string(params.max_retries) + " attempts");
}

std::vector<Contour> generate_ribbon_corpus(int count, int n_vertices,
                                            const RibbonParams& params,
                                            std::uint64_t seed) {
  if (count < 1) throw ConfigError("ribbon corpus count must be >= 1");
  Rng rng(seed);
  std::vector<Contour> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) {
    out.push_back(generate_ribbon(n_vertices, params, rng));
  }
  return out;
}

}  // namespace lra
