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

#include "lra/codec.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include <nlohmann/json.hpp>

#include "lra/geometry.hpp"
#include "lra/hashing.hpp"

namespace lra {

using nlohmann::json;

namespace {

constexpr int kBasisFileVersion = 1;
constexpr double kOrthonormalityTolerance = 1e-6;

void check_contour_against_basis(const OrthanchorBasis& basis,
                                 const Contour& contour) {
  if (contour.size() != basis.n_vertices) {
    throw DataError("contour has " + std::to_string(contour.size()) +
                    " vertices but the basis expects " +
                    std::to_string(basis.n_vertices));
  }
}

}  // namespace

ShapeCode encode(const OrthanchorBasis& basis, const Contour& contour) {
  check_contour_against_basis(basis, contour);
  const auto [canonical, frame] = canonicalize(contour, basis.basis.flags);
  ShapeCode code;
  code.coefficients = basis.basis.u.transpose() * flatten(canonical);
  code.frame = frame;
  return code;
}

Contour decode(const OrthanchorBasis& basis, const ShapeCode& code) {
  if (code.coefficients.size() != basis.m()) {
    throw DataError("code has " + std::to_string(code.coefficients.size()) +
                    " coefficients but the basis expects " +
                    std::to_string(basis.m()));
  }
  const Eigen::VectorXd flat = basis.basis.u * code.coefficients;
  return restore(unflatten(flat), code.frame);
}

double reconstruction_iou(const OrthanchorBasis& basis, const Contour& contour,
                          int resolution) {
  return polygon_iou(contour, decode(basis, encode(basis, contour)), resolution);
}

std::vector<int> fourier_frequency_order(int dims, int n) {
  if (n < 1) throw ConfigError("fourier_frequency_order requires n >= 1");
  if (dims < 2 || dims > 2 * n || dims % 2 != 0) {
    throw ConfigError("fourier dims must be even and within [2, " +
                      std::to_string(2 * n) + "]");
  }
  std::vector<int> order;
  order.reserve(dims / 2);
  order.push_back(0);
  for (int f = 1; static_cast<int>(order.size()) < dims / 2; ++f) {
    order.push_back(f);
    if (static_cast<int>(order.size()) == dims / 2) break;
    // For even n the frequencies +n/2 and -n/2 alias to one mode, so list
    // the negative twin only while it is distinct.
    if (2 * f == n) continue;
    order.push_back(-f);
  }
  return order;
}

FourierCode fourier_encode(const Contour& contour, int dims) {
  const int n = contour.size();
  if (n == 0) throw DataError("fourier_encode of empty contour");
  FourierCode code;
  code.frequencies = fourier_frequency_order(dims, n);
  code.coefficients.reserve(code.frequencies.size());
  for (int f : code.frequencies) {
    std::complex<double> acc{0.0, 0.0};
    for (int k = 0; k < n; ++k) {
      const double angle = -2.0 * std::numbers::pi * f * k / n;
      const std::complex<double> z{contour.points[k].x, contour.points[k].y};
      acc += z * std::complex<double>{std::cos(angle), std::sin(angle)};
    }
    code.coefficients.push_back(acc / static_cast<double>(n));
  }
  return code;
}

Contour fourier_decode(const FourierCode& code, int n) {
  if (n < 1) throw ConfigError("fourier_decode requires n >= 1");
  if (code.frequencies.size() != code.coefficients.size()) {
    throw DataError("fourier code has mismatched frequency and coefficient lists");
  }
  Contour out;
  out.points.resize(n);
  for (int k = 0; k < n; ++k) {
    std::complex<double> acc{0.0, 0.0};
    for (std::size_t i = 0; i < code.frequencies.size(); ++i) {
      const double angle = 2.0 * std::numbers::pi * code.frequencies[i] * k / n;
      acc += code.coefficients[i] *
             std::complex<double>{std::cos(angle), std::sin(angle)};
    }
    out.points[k] = {acc.real(), acc.imag()};
  }
  return out;
}

std::string basis_matrix_hash(const Eigen::MatrixXd& u) {
  std::uint64_t state = kFnvOffsetBasis;
  for (Eigen::Index r = 0; r < u.rows(); ++r) {
    for (Eigen::Index c = 0; c < u.cols(); ++c) {
      state = fnv1a64(format_double17(u(r, c)), state);
      state = fnv1a64("\n", state);
    }
  }
  return to_hex(state);
}

void save_basis(const OrthanchorBasis& basis, const std::string& path) {
  if (basis.basis.u.rows() != 2 * basis.n_vertices || basis.basis.u.cols() != basis.m()) {
    throw DataError("basis matrix shape does not match its metadata");
  }
  json doc;
  doc["version"] = kBasisFileVersion;
  doc["n_vertices"] = basis.n_vertices;
  doc["m"] = basis.m();
  doc["fit_method"] = to_string(basis.basis.method);
  doc["canonicalization"] = {{"center", basis.basis.flags.center},
                             {"normalize_scale", basis.basis.flags.normalize_scale}};
  std::vector<std::string> entries;
  entries.reserve(static_cast<std::size_t>(basis.basis.u.size()));
  for (Eigen::Index r = 0; r < basis.basis.u.rows(); ++r) {
    for (Eigen::Index c = 0; c < basis.basis.u.cols(); ++c) {
      entries.push_back(format_double17(basis.basis.u(r, c)));
    }
  }
  doc["matrix"] = entries;
  doc["provenance"] = {{"corpus_id", basis.provenance.corpus_id},
                       {"params", basis.provenance.params}};
  doc["hash"] = basis_matrix_hash(basis.basis.u);

  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open basis file for writing: " + path);
  out << doc.dump(2) << '\n';
  if (!out.good()) throw DataError("failed while writing basis file: " + path);
}

namespace {

OrthanchorBasis load_basis_checked(json doc) {

  const auto require = [&](const char* key) -> const json& {
    if (!doc.contains(key)) throw DataError(std::string("basis file missing '") + key + "'");
    return doc[key];
  };

  if (!require("version").is_number_integer() ||
      doc["version"].get<int>() != kBasisFileVersion) {
    throw DataError("unsupported basis file version");
  }
  const int n = require("n_vertices").get<int>();
  const int m = require("m").get<int>();
  if (n < 2 || m < 1 || m > 2 * n) throw DataError("basis file has implausible dimensions");

  OrthanchorBasis out;
  out.n_vertices = n;
  out.basis.m = m;
  out.basis.method = fit_method_from_string(require("fit_method").get<std::string>());
  const json& canon = require("canonicalization");
  if (!canon.is_object() || !canon.contains("center") ||
      !canon.contains("normalize_scale")) {
    throw DataError("basis file has malformed canonicalization flags");
  }
  out.basis.flags.center = canon["center"].get<bool>();
  out.basis.flags.normalize_scale = canon["normalize_scale"].get<bool>();

  const json& matrix = require("matrix");
  if (!matrix.is_array() ||
      matrix.size() != static_cast<std::size_t>(2 * n) * static_cast<std::size_t>(m)) {
    throw DataError("basis matrix has wrong entry count");
  }
  out.basis.u.resize(2 * n, m);
  std::size_t index = 0;
  for (Eigen::Index r = 0; r < out.basis.u.rows(); ++r) {
    for (Eigen::Index c = 0; c < out.basis.u.cols(); ++c, ++index) {
      if (!matrix[index].is_string()) throw DataError("basis matrix entries must be strings");
      out.basis.u(r, c) = parse_double_strict(matrix[index].get<std::string>());
    }
  }

  const json& provenance = require("provenance");
  if (provenance.is_object()) {
    if (provenance.contains("corpus_id") && provenance["corpus_id"].is_string()) {
      out.provenance.corpus_id = provenance["corpus_id"].get<std::string>();
    }
    if (provenance.contains("params") && provenance["params"].is_string()) {
      out.provenance.params = provenance["params"].get<std::string>();
    }
  }

  const std::string stored_hash = require("hash").get<std::string>();
  const std::string computed_hash = basis_matrix_hash(out.basis.u);
  if (stored_hash != computed_hash) {
    throw DataError("basis file hash mismatch (stored " + stored_hash +
                    ", computed " + computed_hash + ")");
  }
  const double residual = orthonormality_residual(out.basis.u);
  if (!(residual <= kOrthonormalityTolerance)) {
    throw DataError("basis matrix is not orthonormal (residual " +
                    format_double17(residual) + ")");
  }
  return out;
}

}  // namespace

OrthanchorBasis load_basis(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open basis file: " + path);
  json doc = json::parse(in, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded() || !doc.is_object()) {
    throw DataError("basis file is not a JSON object: " + path);
  }
  try {
    return load_basis_checked(std::move(doc));
  } catch (const json::exception& err) {
    // Wrong value types surface from the json accessors; report them as the
    // data problem they are.
    throw DataError("malformed basis file " + path + ": " + err.what());
  }
}

void write_codes_jsonl(const std::vector<std::string>& ids,
                       const std::vector<ShapeCode>& codes,
                       const std::string& path) {
  if (ids.size() != codes.size()) {
    throw DataError("write_codes_jsonl: id and code counts differ");
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open codes file for writing: " + path);
  for (std::size_t i = 0; i < codes.size(); ++i) {
    json line;
    line["id"] = ids[i];
    std::vector<std::string> coeffs;
    coeffs.reserve(static_cast<std::size_t>(codes[i].coefficients.size()));
    for (Eigen::Index k = 0; k < codes[i].coefficients.size(); ++k) {
      coeffs.push_back(format_double17(codes[i].coefficients[k]));
    }
    line["coefficients"] = coeffs;
    line["frame"] = {{"tx", format_double17(codes[i].frame.tx)},
                     {"ty", format_double17(codes[i].frame.ty)},
                     {"scale", format_double17(codes[i].frame.scale)}};
    out << line.dump() << '\n';
  }
  if (!out.good()) throw DataError("failed while writing codes file: " + path);
}

}  // namespace lra
