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

#include <complex>
#include <string>
#include <vector>

#include "lra/subspace.hpp"

namespace lra {

struct BasisProvenance {
  std::string corpus_id;  // fingerprint/description of the training corpus
  std::string params;     // fit parameters, for audit only
};

// A fitted basis packaged for encoding work: the orthonormal matrix plus the
// vertex count and canonicalization convention it expects.
struct OrthanchorBasis {
  Basis basis;
  int n_vertices = 0;
  BasisProvenance provenance;

  int m() const { return basis.m; }
};

// Compact contour code: subspace coefficients plus the pose frame removed by
// canonicalization.
struct ShapeCode {
  Eigen::VectorXd coefficients;
  Frame frame;
};

// Projects a contour onto the basis. The contour is canonicalized with the
// basis' own flags; its vertex count must match the basis.
ShapeCode encode(const OrthanchorBasis& basis, const Contour& contour);

// Reconstructs the contour: basis times coefficients, then frame restore.
Contour decode(const OrthanchorBasis& basis, const ShapeCode& code);

// polygon_iou between a contour and its own encode/decode round trip.
double reconstruction_iou(const OrthanchorBasis& basis, const Contour& contour,
                          int resolution = 512);

// Truncated Fourier descriptor of the complex boundary signal x_k + i y_k.
// `frequencies` lists the retained integer frequencies in the canonical
// low-to-high order 0, +1, -1, +2, -2, ...
struct FourierCode {
  std::vector<int> frequencies;
  std::vector<std::complex<double>> coefficients;
};

// The first `dims`/2 frequencies in canonical order for an n-point contour.
// `dims` counts real degrees of freedom; it must be even and in [2, 2n].
std::vector<int> fourier_frequency_order(int dims, int n);

FourierCode fourier_encode(const Contour& contour, int dims);

// Inverse transform at n output vertices, unlisted frequencies set to zero.
Contour fourier_decode(const FourierCode& code, int n);

// Versioned JSON persistence. Matrix entries are written as 17-significant-
// digit decimal strings in row-major order and fingerprinted, so save/load
// round-trips are bit-exact and tampering is detected on load.
void save_basis(const OrthanchorBasis& basis, const std::string& path);
OrthanchorBasis load_basis(const std::string& path);

// Fingerprint over the serialized row-major matrix entries.
std::string basis_matrix_hash(const Eigen::MatrixXd& u);

// One {"id", "coefficients", "frame"} JSON object per line.
void write_codes_jsonl(const std::vector<std::string>& ids,
                       const std::vector<ShapeCode>& codes,
                       const std::string& path);

}  // namespace lra
