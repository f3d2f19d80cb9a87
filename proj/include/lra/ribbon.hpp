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
#include "lra/rng.hpp"

namespace lra {

// Synthetic word-shaped ribbons: a cubic Bezier centerline swept with a
// linearly tapering half-width, then rotated and placed on a nominal
// 1000 x 1000 page. Six shape degrees of freedom per sample (length, aspect,
// two bend offsets, taper, rotation) plus two placement offsets.
struct RibbonParams {
  double length_lo = 80.0;
  double length_hi = 240.0;
  double aspect_lo = 2.0;    // length / (2 * half_width)
  double aspect_hi = 12.0;
  double bend_scale = 1.0;   // scales both centerline bend offsets
  double taper_max = 0.4;    // half-width shrinks by up to this fraction
  double rotation_max = 0.45;  // radians
  double place_lo = 300.0;   // uniform placement window for the center
  double place_hi = 700.0;
  int max_retries = 100;     // attempts to produce a simple polygon
};

// Validates parameter ranges; throws ConfigError.
void validate(const RibbonParams& params);

// Draws one simple (non-self-intersecting) closed ribbon with n vertices:
// n/2 samples along the top edge, n/2 back along the bottom. Requires even
// n >= 6. Re-draws on self-intersection up to max_retries, then throws
// NumericalError.
Contour generate_ribbon(int n_vertices, const RibbonParams& params, Rng& rng);

// `count` ribbons from a fresh stream seeded with `seed`.
std::vector<Contour> generate_ribbon_corpus(int count, int n_vertices,
                                            const RibbonParams& params,
                                            std::uint64_t seed);

}  // namespace lra
