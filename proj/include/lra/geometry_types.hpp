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
#include <vector>

#include "lra/errors.hpp"

namespace lra {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

inline Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
inline Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
inline Point operator*(double s, Point p) { return {s * p.x, s * p.y}; }
double norm(Point p);

// A closed polygon as annotated, in image pixel coordinates. Construction
// removes consecutive duplicate vertices (including a trailing repeat of the
// first vertex) and rejects non-finite coordinates or fewer than three
// remaining vertices.
class RawPolygon {
 public:
  explicit RawPolygon(std::vector<Point> vertices);

  const std::vector<Point>& vertices() const { return vertices_; }
  int size() const { return static_cast<int>(vertices_.size()); }

 private:
  std::vector<Point> vertices_;
};

// Fixed-length closed contour: ordered boundary vertices, implicit edge from
// the last vertex back to the first. Flattens to [x1, y1, ..., xN, yN].
struct Contour {
  std::vector<Point> points;

  int size() const { return static_cast<int>(points.size()); }
};

Eigen::VectorXd flatten(const Contour& c);
Contour unflatten(const Eigen::VectorXd& v);

Point centroid(const Contour& c);
double perimeter(const Contour& c);

struct BBox {
  double min_x = 0.0, min_y = 0.0, max_x = 0.0, max_y = 0.0;

  double width() const { return max_x - min_x; }
  double height() const { return max_y - min_y; }
  double diagonal() const;

  friend bool operator==(const BBox&, const BBox&) = default;
};

BBox bounding_box(const Contour& c);

// The pose information removed by canonicalize(); restore() reapplies it
// (scale first, then translation).
struct Frame {
  double tx = 0.0;
  double ty = 0.0;
  double scale = 1.0;
};

struct CanonFlags {
  bool center = true;
  bool normalize_scale = false;

  friend bool operator==(const CanonFlags&, const CanonFlags&) = default;
};

}  // namespace lra
