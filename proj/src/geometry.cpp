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

#include "lra/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "lra/spline.hpp"

namespace lra {

double norm(Point p) { return std::sqrt(p.x * p.x + p.y * p.y); }

RawPolygon::RawPolygon(std::vector<Point> vertices) {
  for (const Point& p : vertices) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
      throw DataError("polygon has non-finite coordinates");
    }
  }
  vertices_.reserve(vertices.size());
  for (const Point& p : vertices) {
    if (!vertices_.empty() && p.x == vertices_.back().x && p.y == vertices_.back().y) {
      continue;
    }
    vertices_.push_back(p);
  }
  while (vertices_.size() > 1 && vertices_.back().x == vertices_.front().x &&
         vertices_.back().y == vertices_.front().y) {
    vertices_.pop_back();
  }
  if (vertices_.size() < 3) {
    throw DataError("polygon has fewer than three distinct vertices");
  }
}

Eigen::VectorXd flatten(const Contour& c) {
  Eigen::VectorXd v(2 * c.size());
  for (int i = 0; i < c.size(); ++i) {
    v[2 * i] = c.points[i].x;
    v[2 * i + 1] = c.points[i].y;
  }
  return v;
}

Contour unflatten(const Eigen::VectorXd& v) {
  if (v.size() % 2 != 0) throw DataError("flattened contour has odd length");
  Contour c;
  c.points.resize(v.size() / 2);
  for (int i = 0; i < c.size(); ++i) {
    c.points[i] = {v[2 * i], v[2 * i + 1]};
  }
  return c;
}

Point centroid(const Contour& c) {
  if (c.size() == 0) throw DataError("centroid of empty contour");
  Point sum;
  for (const Point& p : c.points) sum = sum + p;
  return {sum.x / c.size(), sum.y / c.size()};
}

double perimeter(const Contour& c) {
  const int n = c.size();
  if (n < 2) return 0.0;
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    total += norm(c.points[(i + 1) % n] - c.points[i]);
  }
  return total;
}

double BBox::diagonal() const {
  return std::sqrt(width() * width() + height() * height());
}

BBox bounding_box(const Contour& c) {
  if (c.size() == 0) throw DataError("bounding box of empty contour");
  BBox box{c.points[0].x, c.points[0].y, c.points[0].x, c.points[0].y};
  for (const Point& p : c.points) {
    box.min_x = std::min(box.min_x, p.x);
    box.min_y = std::min(box.min_y, p.y);
    box.max_x = std::max(box.max_x, p.x);
    box.max_y = std::max(box.max_y, p.y);
  }
  return box;
}

Contour resample_contour(const RawPolygon& poly, int n) {
  if (n < 4) throw ConfigError("resample_contour requires n >= 4");

  std::vector<Point> distinct = poly.vertices();
  std::sort(distinct.begin(), distinct.end(), [](Point a, Point b) {
    return a.x != b.x ? a.x < b.x : a.y < b.y;
  });
  distinct.erase(std::unique(distinct.begin(), distinct.end(),
                             [](Point a, Point b) { return a.x == b.x && a.y == b.y; }),
                 distinct.end());
  if (distinct.size() < 3) {
    throw DataError("polygon has fewer than three distinct vertices");
  }

  const PeriodicCubicSpline spline(poly.vertices());
  const double total = spline.arc_length();
  if (!std::isfinite(total) || !(total > 0.0)) {
    throw DataError("polygon has degenerate arc length");
  }

  Contour out;
  out.points.resize(n);
  for (int k = 0; k < n; ++k) {
    const double s = total * static_cast<double>(k) / static_cast<double>(n);
    out.points[k] = spline.position(spline.param_at_arc_length(s));
  }
  return out;
}

std::pair<Contour, Frame> canonicalize(const Contour& c, const CanonFlags& flags) {
  if (c.size() == 0) throw DataError("canonicalize of empty contour");
  Contour out = c;
  Frame frame;
  if (flags.center) {
    const Point center = centroid(c);
    for (Point& p : out.points) p = p - center;
    frame.tx = center.x;
    frame.ty = center.y;
  }
  if (flags.normalize_scale) {
    const double scale = flatten(out).norm();
    if (!std::isfinite(scale) || !(scale > 0.0)) {
      throw DataError("cannot scale-normalize a zero-norm contour");
    }
    for (Point& p : out.points) {
      p.x /= scale;
      p.y /= scale;
    }
    frame.scale = scale;
  }
  return {out, frame};
}

Contour restore(const Contour& c, const Frame& f) {
  Contour out = c;
  for (Point& p : out.points) {
    p = {p.x * f.scale + f.tx, p.y * f.scale + f.ty};
  }
  return out;
}

namespace {

// Cell-index intervals [lo, hi) covered by the polygon interior on the
// scanline through cell-center ordinate yc (even-odd rule). Intervals come
// out sorted and disjoint.
void row_spans(const Contour& poly, double yc, double min_x, double cell_w,
               int resolution, std::vector<double>& crossings,
               std::vector<std::pair<int, int>>& out) {
  crossings.clear();
  out.clear();
  const int n = poly.size();
  for (int i = 0; i < n; ++i) {
    const Point& p = poly.points[i];
    const Point& q = poly.points[(i + 1) % n];
    if ((p.y > yc) != (q.y > yc)) {
      crossings.push_back(p.x + (yc - p.y) * (q.x - p.x) / (q.y - p.y));
    }
  }
  std::sort(crossings.begin(), crossings.end());
  for (std::size_t k = 0; k + 1 < crossings.size(); k += 2) {
    // Cells whose center lies in [crossings[k], crossings[k+1]).
    int lo = static_cast<int>(std::ceil((crossings[k] - min_x) / cell_w - 0.5));
    int hi = static_cast<int>(std::ceil((crossings[k + 1] - min_x) / cell_w - 0.5));
    lo = std::max(lo, 0);
    hi = std::min(hi, resolution);
    if (hi > lo) out.emplace_back(lo, hi);
  }
}

std::int64_t span_cells(const std::vector<std::pair<int, int>>& spans) {
  std::int64_t total = 0;
  for (const auto& [lo, hi] : spans) total += hi - lo;
  return total;
}

std::int64_t span_intersection(const std::vector<std::pair<int, int>>& a,
                               const std::vector<std::pair<int, int>>& b) {
  std::int64_t total = 0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    const int lo = std::max(a[i].first, b[j].first);
    const int hi = std::min(a[i].second, b[j].second);
    if (hi > lo) total += hi - lo;
    if (a[i].second < b[j].second) {
      ++i;
    } else {
      ++j;
    }
  }
  return total;
}

void validate_finite(const Contour& c, const char* role) {
  for (const Point& p : c.points) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
      throw DataError(std::string("polygon_iou: non-finite coordinates in ") + role);
    }
  }
}

}  // namespace

double polygon_iou(const Contour& a, const Contour& b, int resolution) {
  if (resolution < 64) throw ConfigError("polygon_iou requires resolution >= 64");
  if (a.size() == 0 || b.size() == 0) throw DataError("polygon_iou of empty contour");
  validate_finite(a, "first argument");
  validate_finite(b, "second argument");

  const BBox box_a = bounding_box(a);
  const BBox box_b = bounding_box(b);
  BBox joint{std::min(box_a.min_x, box_b.min_x), std::min(box_a.min_y, box_b.min_y),
             std::max(box_a.max_x, box_b.max_x), std::max(box_a.max_y, box_b.max_y)};
  const double fallback = std::max(joint.width(), joint.height());
  const double pad_x = 0.05 * (joint.width() > 0.0 ? joint.width()
                               : fallback > 0.0    ? fallback
                                                   : 1.0);
  const double pad_y = 0.05 * (joint.height() > 0.0 ? joint.height()
                               : fallback > 0.0     ? fallback
                                                    : 1.0);
  const double min_x = joint.min_x - pad_x;
  const double min_y = joint.min_y - pad_y;
  const double cell_w = (joint.width() + 2.0 * pad_x) / resolution;
  const double cell_h = (joint.height() + 2.0 * pad_y) / resolution;

  std::vector<double> crossings;
  std::vector<std::pair<int, int>> spans_a, spans_b;
  std::int64_t inter = 0, cells_a = 0, cells_b = 0;
  for (int row = 0; row < resolution; ++row) {
    const double yc = min_y + (row + 0.5) * cell_h;
    row_spans(a, yc, min_x, cell_w, resolution, crossings, spans_a);
    row_spans(b, yc, min_x, cell_w, resolution, crossings, spans_b);
    cells_a += span_cells(spans_a);
    cells_b += span_cells(spans_b);
    inter += span_intersection(spans_a, spans_b);
  }

  const std::int64_t unite = cells_a + cells_b - inter;
  if (unite == 0) {
    // Nothing rasterized: degenerate shapes. Identical boxes count as a
    // perfect match, anything else as a miss.
    return box_a == box_b ? 1.0 : 0.0;
  }
  return static_cast<double>(inter) / static_cast<double>(unite);
}

bool point_in_polygon(Point p, const Contour& poly) {
  const int n = poly.size();
  bool inside = false;
  for (int i = 0; i < n; ++i) {
    const Point& a = poly.points[i];
    const Point& b = poly.points[(i + 1) % n];
    if ((a.y > p.y) != (b.y > p.y)) {
      const double x_cross = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
      if (p.x < x_cross) inside = !inside;
    }
  }
  return inside;
}

namespace {

int orientation(Point a, Point b, Point c) {
  const double v = (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
  return (v > 0.0) - (v < 0.0);
}

bool collinear_point_on(Point a, Point b, Point p) {
  return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) &&
         std::min(a.y, b.y) <= p.y && p.y <= std::max(a.y, b.y);
}

bool segments_touch(Point a, Point b, Point c, Point d) {
  const int o1 = orientation(a, b, c);
  const int o2 = orientation(a, b, d);
  const int o3 = orientation(c, d, a);
  const int o4 = orientation(c, d, b);
  if (o1 != o2 && o3 != o4) return true;
  if (o1 == 0 && collinear_point_on(a, b, c)) return true;
  if (o2 == 0 && collinear_point_on(a, b, d)) return true;
  if (o3 == 0 && collinear_point_on(c, d, a)) return true;
  if (o4 == 0 && collinear_point_on(c, d, b)) return true;
  return false;
}

}  // namespace

bool is_simple(const Contour& c) {
  const int n = c.size();
  if (n < 3) return false;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const bool adjacent = (j == i + 1) || (i == 0 && j == n - 1);
      if (adjacent) continue;
      if (segments_touch(c.points[i], c.points[(i + 1) % n], c.points[j],
                         c.points[(j + 1) % n])) {
        return false;
      }
    }
  }
  return true;
}

}  // namespace lra
