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

#include <vector>

#include "lra/geometry_types.hpp"

namespace lra {

// Closed C2 cubic spline through a polygon's vertices, parameterized by
// cumulative chord length. Periodic end conditions are solved with a cyclic
// tridiagonal system (Sherman-Morrison correction over a Thomas solve), so
// construction is O(K) in the vertex count.
class PeriodicCubicSpline {
 public:
  // `vertices` are the distinct polygon corners, without a trailing copy of
  // the first point. Requires at least three vertices and positive chord
  // lengths between consecutive ones.
  explicit PeriodicCubicSpline(const std::vector<Point>& vertices);

  // Chord-length parameter domain is [0, total_chord()]; the curve is
  // periodic with that period.
  double total_chord() const { return knots_.back(); }

  Point position(double t) const;
  Point derivative(double t) const;

  // Total arc length, and the arc length of [0, t]; both by fixed-order
  // Gauss-Legendre quadrature per spline segment.
  double arc_length() const { return cumulative_.back(); }
  double arc_length_to(double t) const;

  // Inverse of arc_length_to on [0, arc_length()], by bisection on the
  // containing segment to an absolute parameter tolerance of 1e-9.
  double param_at_arc_length(double s) const;

  int segment_count() const { return static_cast<int>(knots_.size()) - 1; }

 private:
  // Quadrature over [t_begin, t_end]; exact only within a single segment.
  double arc_between(double t_begin, double t_end) const;

  std::vector<double> knots_;       // K+1 parameter values, knots_[0] == 0
  std::vector<Point> values_;       // K+1 points, values_[K] == values_[0]
  std::vector<double> second_x_;    // K+1 second derivatives per coordinate
  std::vector<double> second_y_;
  std::vector<double> cumulative_;  // K+1 cumulative arc lengths
};

}  // namespace lra
