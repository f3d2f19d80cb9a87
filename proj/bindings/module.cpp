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

// Python bindings for the main operations. Contours travel as (n, 2) float64
// arrays; bases as ShapeBasis objects.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "lra/assignment.hpp"
#include "lra/codec.hpp"
#include "lra/errors.hpp"
#include "lra/geometry.hpp"
#include "lra/ribbon.hpp"
#include "lra/robustness.hpp"
#include "lra/subspace.hpp"

namespace py = pybind11;

namespace {

using namespace lra;

Contour to_contour(const Eigen::MatrixXd& points) {
  if (points.cols() != 2) throw DataError("expected an (n, 2) array of vertices");
  Contour c;
  c.points.resize(static_cast<std::size_t>(points.rows()));
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    c.points[static_cast<std::size_t>(i)] = {points(i, 0), points(i, 1)};
  }
  return c;
}

Eigen::MatrixXd to_matrix(const Contour& c) {
  Eigen::MatrixXd points(c.size(), 2);
  for (int i = 0; i < c.size(); ++i) {
    points(i, 0) = c.points[static_cast<std::size_t>(i)].x;
    points(i, 1) = c.points[static_cast<std::size_t>(i)].y;
  }
  return points;
}

std::vector<Contour> to_contours(const std::vector<Eigen::MatrixXd>& arrays) {
  std::vector<Contour> contours;
  contours.reserve(arrays.size());
  for (const Eigen::MatrixXd& a : arrays) contours.push_back(to_contour(a));
  return contours;
}

std::vector<Eigen::MatrixXd> to_matrices(const std::vector<Contour>& contours) {
  std::vector<Eigen::MatrixXd> arrays;
  arrays.reserve(contours.size());
  for (const Contour& c : contours) arrays.push_back(to_matrix(c));
  return arrays;
}

CanonFlags make_flags(bool center, bool normalize_scale) {
  CanonFlags flags;
  flags.center = center;
  flags.normalize_scale = normalize_scale;
  return flags;
}

OrthanchorBasis package(const Basis& basis, int n_vertices, const std::string& how) {
  OrthanchorBasis out;
  out.basis = basis;
  out.n_vertices = n_vertices;
  out.provenance.corpus_id = "python:list";
  out.provenance.params = how;
  return out;
}

OrthanchorBasis fit_svd_py(const std::vector<Eigen::MatrixXd>& arrays, int m,
                           bool center, bool normalize_scale) {
  const std::vector<Contour> contours = to_contours(arrays);
  if (contours.empty()) throw DataError("need at least one contour");
  const ContourMatrix a = build_matrix(contours, make_flags(center, normalize_scale));
  return package(svd_subspace(a, m), a.n_vertices,
                 "method=svd;m=" + std::to_string(m));
}

OrthanchorBasis fit_fms_py(const std::vector<Eigen::MatrixXd>& arrays, int m,
                           bool center, bool normalize_scale, int max_iterations,
                           double tolerance, double weight_floor) {
  const std::vector<Contour> contours = to_contours(arrays);
  if (contours.empty()) throw DataError("need at least one contour");
  const ContourMatrix a = build_matrix(contours, make_flags(center, normalize_scale));
  FmsParams params;
  params.max_iterations = max_iterations;
  params.tolerance = tolerance;
  params.weight_floor = weight_floor;
  return package(fms_subspace(a, m, params).basis, a.n_vertices,
                 "method=fms;m=" + std::to_string(m));
}

std::pair<std::vector<std::pair<int, int>>, double> linear_assignment_py(
    const Eigen::MatrixXd& cost) {
  CostMatrix matrix;
  matrix.entries = cost;
  matrix.replication = 1;
  matrix.instances = static_cast<int>(cost.cols());
  const Assignment result = hungarian(matrix);
  return {result.pairs, result.total_cost};
}

}  // namespace

PYBIND11_MODULE(_lra, m) {
  m.doc() = "low-rank contour representation: fitting, coding, and matching";

  py::register_exception<ConfigError>(m, "ConfigError");
  py::register_exception<DataError>(m, "DataError");
  py::register_exception<NumericalError>(m, "NumericalError");

  py::class_<Frame>(m, "Frame")
      .def(py::init([](double tx, double ty, double scale) {
             Frame f;
             f.tx = tx;
             f.ty = ty;
             f.scale = scale;
             return f;
           }),
           py::arg("tx") = 0.0, py::arg("ty") = 0.0, py::arg("scale") = 1.0)
      .def_readwrite("tx", &Frame::tx)
      .def_readwrite("ty", &Frame::ty)
      .def_readwrite("scale", &Frame::scale)
      .def("__repr__", [](const Frame& f) {
        return "Frame(tx=" + std::to_string(f.tx) + ", ty=" + std::to_string(f.ty) +
               ", scale=" + std::to_string(f.scale) + ")";
      });

  py::class_<OrthanchorBasis>(m, "ShapeBasis")
      .def_property_readonly(
          "n_vertices", [](const OrthanchorBasis& b) { return b.n_vertices; })
      .def_property_readonly("m", &OrthanchorBasis::m)
      .def_property_readonly(
          "method", [](const OrthanchorBasis& b) { return to_string(b.basis.method); })
      .def_property_readonly(
          "center", [](const OrthanchorBasis& b) { return b.basis.flags.center; })
      .def_property_readonly(
          "normalize_scale",
          [](const OrthanchorBasis& b) { return b.basis.flags.normalize_scale; })
      .def_property_readonly(
          "matrix", [](const OrthanchorBasis& b) -> Eigen::MatrixXd { return b.basis.u; })
      .def(
          "encode",
          [](const OrthanchorBasis& b, const Eigen::MatrixXd& points) {
            const ShapeCode code = encode(b, to_contour(points));
            return std::make_pair(Eigen::VectorXd(code.coefficients), code.frame);
          },
          py::arg("points"), "Project a contour; returns (coefficients, frame).")
      .def(
          "decode",
          [](const OrthanchorBasis& b, const Eigen::VectorXd& coefficients,
             std::optional<Frame> frame) {
            ShapeCode code;
            code.coefficients = coefficients;
            code.frame = frame.value_or(Frame{});
            return to_matrix(decode(b, code));
          },
          py::arg("coefficients"), py::arg("frame") = std::nullopt)
      .def(
          "reconstruction_iou",
          [](const OrthanchorBasis& b, const Eigen::MatrixXd& points, int resolution) {
            return reconstruction_iou(b, to_contour(points), resolution);
          },
          py::arg("points"), py::arg("resolution") = 512)
      .def("save",
           [](const OrthanchorBasis& b, const std::string& path) { save_basis(b, path); })
      .def_static("load", [](const std::string& path) { return load_basis(path); })
      .def("__repr__", [](const OrthanchorBasis& b) {
        return "ShapeBasis(n_vertices=" + std::to_string(b.n_vertices) +
               ", m=" + std::to_string(b.m()) + ", method=" + to_string(b.basis.method) +
               ")";
      });

  m.def(
      "resample",
      [](const Eigen::MatrixXd& points, int n) {
        return to_matrix(resample_contour(RawPolygon(to_contour(points).points), n));
      },
      py::arg("points"), py::arg("n"),
      "Arc-length resample a closed polygon to n vertices.");

  m.def(
      "canonicalize",
      [](const Eigen::MatrixXd& points, bool center, bool normalize_scale) {
        const auto [contour, frame] =
            canonicalize(to_contour(points), make_flags(center, normalize_scale));
        return std::make_pair(to_matrix(contour), frame);
      },
      py::arg("points"), py::arg("center") = true, py::arg("normalize_scale") = false);

  m.def(
      "restore",
      [](const Eigen::MatrixXd& points, const Frame& frame) {
        return to_matrix(restore(to_contour(points), frame));
      },
      py::arg("points"), py::arg("frame"));

  m.def(
      "polygon_iou",
      [](const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, int resolution) {
        return polygon_iou(to_contour(a), to_contour(b), resolution);
      },
      py::arg("a"), py::arg("b"), py::arg("resolution") = 512);

  m.def(
      "generate_ribbons",
      [](int count, int n_vertices, std::uint64_t seed, double bend_scale,
         double rotation_max, double taper_max) {
        RibbonParams params;
        params.bend_scale = bend_scale;
        params.rotation_max = rotation_max;
        params.taper_max = taper_max;
        return to_matrices(generate_ribbon_corpus(count, n_vertices, params, seed));
      },
      py::arg("count"), py::arg("n_vertices") = 14, py::arg("seed") = 1,
      py::arg("bend_scale") = 1.0, py::arg("rotation_max") = 0.45,
      py::arg("taper_max") = 0.4,
      "Sample smooth ribbon-shaped test polygons deterministically.");

  m.def("fit_svd", &fit_svd_py, py::arg("contours"), py::arg("m"),
        py::arg("center") = true, py::arg("normalize_scale") = false);

  m.def("fit_fms", &fit_fms_py, py::arg("contours"), py::arg("m"),
        py::arg("center") = true, py::arg("normalize_scale") = false,
        py::arg("max_iterations") = 100, py::arg("tolerance") = 1e-9,
        py::arg("weight_floor") = 1e-10);

  m.def(
      "subspace_distance",
      [](const OrthanchorBasis& a, const OrthanchorBasis& b) {
        return subspace_distance(a.basis, b.basis);
      },
      py::arg("a"), py::arg("b"),
      "Frobenius distance between the two orthogonal projectors.");

  m.def(
      "fourier_encode",
      [](const Eigen::MatrixXd& points, int dims) {
        const FourierCode code = fourier_encode(to_contour(points), dims);
        return std::make_pair(code.frequencies, code.coefficients);
      },
      py::arg("points"), py::arg("dims"),
      "Truncated Fourier descriptor; returns (frequencies, coefficients).");

  m.def(
      "fourier_decode",
      [](const std::vector<int>& frequencies,
         const std::vector<std::complex<double>>& coefficients, int n) {
        FourierCode code;
        code.frequencies = frequencies;
        code.coefficients = coefficients;
        return to_matrix(fourier_decode(code, n));
      },
      py::arg("frequencies"), py::arg("coefficients"), py::arg("n"));

  m.def(
      "focal_cost",
      [](double score, double alpha, double gamma, double clamp) {
        FocalParams params;
        params.alpha = alpha;
        params.gamma = gamma;
        params.clamp = clamp;
        return focal_cost(score, params);
      },
      py::arg("score"), py::arg("alpha") = 0.25, py::arg("gamma") = 2.0,
      py::arg("clamp") = 1e-7);

  m.def("linear_assignment", &linear_assignment_py, py::arg("cost"),
        "Min-cost assignment of columns to distinct rows; returns (pairs, total).");

  m.def(
      "inject_spike_noise",
      [](const std::vector<Eigen::MatrixXd>& arrays, double fraction, int vertices_min,
         int vertices_max, double magnitude_lo, double magnitude_hi,
         std::uint64_t seed) {
        NoiseSpec spec;
        spec.corrupt_fraction = fraction;
        spec.vertices_min = vertices_min;
        spec.vertices_max = vertices_max;
        spec.magnitude_lo = magnitude_lo;
        spec.magnitude_hi = magnitude_hi;
        spec.seed = seed;
        return to_matrices(inject_spike_noise(to_contours(arrays), spec));
      },
      py::arg("contours"), py::arg("fraction") = 0.2, py::arg("vertices_min") = 1,
      py::arg("vertices_max") = 5, py::arg("magnitude_lo") = 0.5,
      py::arg("magnitude_hi") = 1.0, py::arg("seed") = 7);
}
