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

#include <utility>

#include "lra/geometry_types.hpp"

namespace lra {

// Resamples a polygon to exactly `n` vertices, equally spaced in arc length
// along the closed periodic cubic spline through the polygon's vertices.
// The first output vertex coincides with the polygon's first vertex. Requires
// n >= 4 and at least three distinct input vertices.
Contour resample_contour(const RawPolygon& poly, int n);

// Removes translation (centroid) and, optionally, scale (Euclidean norm of
// the centered coordinate vector) per the flags. Returns the canonical
// contour and the frame that restore() needs to undo it. Normalizing a
// zero-norm contour is a DataError.
std::pair<Contour, Frame> canonicalize(const Contour& c, const CanonFlags& flags);

// Inverse of canonicalize: scales, then translates.
Contour restore(const Contour& c, const Frame& f);

// Intersection-over-union of two filled polygons (even-odd rule), measured on
// a `resolution` x `resolution` grid of cell centers spanning the joint
// bounding box expanded by 5% per side. Exactly symmetric in its arguments.
// If both rasterize empty, returns 1.0 when the bounding boxes are identical
// and 0.0 otherwise. Requires resolution >= 64.
double polygon_iou(const Contour& a, const Contour& b, int resolution = 512);

// Even-odd point membership test (boundary cases resolve by half-open edge
// convention; not for exact boundary queries).
bool point_in_polygon(Point p, const Contour& poly);

// True when no two non-adjacent edges of the closed contour intersect or
// touch. Adjacent edges only share their common endpoint.
bool is_simple(const Contour& c);

}  // namespace lra
