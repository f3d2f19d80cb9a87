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

#include "lra/spline.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "lra/errors.hpp"

namespace lra {
namespace {

constexpr int kQuadratureOrder = 64;
constexpr double kParamTolerance = 1e-9;

struct Quadrature {
  std::array<double, kQuadratureOrder> nodes;    // on [-1, 1]
  std::array<double, kQuadratureOrder> weights;
};

// Gauss-Legendre nodes/weights by Newton iteration on the Legendre
// polynomial, computed once at first use.
const Quadrature& quadrature() {
  static const Quadrature table = [] {
    Quadrature q{};
    const int n = kQuadratureOrder;
    for (int i = 0; i < (n + 1) / 2; ++i) {
      double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
      double derivative = 0.0;
      for (int step = 0; step < 100; ++step) {
        double p_prev = 1.0;
        double p = x;
        for (int k = 2; k <= n; ++k) {
          const double p_next = ((2.0 * k - 1.0) * x * p - (k - 1.0) * p_prev) / k;
          p_prev = p;
          p = p_next;
        }
        derivative = n * (x * p - p_prev) / (x * x - 1.0);
        const double dx = p / derivative;
        x -= dx;
        if (std::abs(dx) < 1e-16) break;
      }
      q.nodes[i] = -x;
      q.nodes[n - 1 - i] = x;
      const double w = 2.0 / ((1.0 - x * x) * derivative * derivative);
      q.weights[i] = w;
      q.weights[n - 1 - i] = w;
    }
    return q;
  }();
  return table;
}

// Periodic tridiagonal system for natural cubic spline second derivatives:
// row i couples M_{i-1}, M_i, M_{i+1} (indices mod K) through the chord
// lengths. Solved as (T + u v^T) x = d via Sherman-Morrison on a Thomas
// solve; the matrix is strictly diagonally dominant, so no pivoting.
std::vector<double> solve_periodic_spline(const std::vector<double>& h,
                                          const std::vector<double>& y) {
  const int k = static_cast<int>(h.size());  // y has k+1 entries, y[k] == y[0]
  std::vector<double> sub(k), diag(k), sup(k), rhs(k);
  for (int i = 0; i < k; ++i) {
    const double h_prev = h[(i + k - 1) % k];
    const double h_cur = h[i];
    sub[i] = h_prev / 6.0;
    diag[i] = (h_prev + h_cur) / 3.0;
    sup[i] = h_cur / 6.0;
    const double y_prev = y[(i + k - 1) % k];
    rhs[i] = (y[i + 1] - y[i]) / h_cur - (y[i] - y_prev) / h_prev;
  }

  const double corner_top = sub[0];     // coefficient of M_{K-1} in row 0
  const double corner_bottom = sup[k - 1];  // coefficient of M_0 in row K-1
  const double gamma = -diag[0];
  std::vector<double> diag_mod = diag;
  diag_mod[0] -= gamma;
  diag_mod[k - 1] -= corner_bottom * corner_top / gamma;

  auto thomas = [&](const std::vector<double>& d) {
    std::vector<double> c_star(k), d_star(k), x(k);
    c_star[0] = sup[0] / diag_mod[0];
    d_star[0] = d[0] / diag_mod[0];
    for (int i = 1; i < k; ++i) {
      const double m = diag_mod[i] - sub[i] * c_star[i - 1];
      c_star[i] = sup[i] / m;
      d_star[i] = (d[i] - sub[i] * d_star[i - 1]) / m;
    }
    x[k - 1] = d_star[k - 1];
    for (int i = k - 2; i >= 0; --i) x[i] = d_star[i] - c_star[i] * x[i + 1];
    return x;
  };

  std::vector<double> u(k, 0.0);
  u[0] = gamma;
  u[k - 1] = corner_bottom;
  const std::vector<double> sol_rhs = thomas(rhs);
  const std::vector<double> sol_u = thomas(u);

  // v = (1, 0, ..., corner_top / gamma)
  const double v_dot_rhs = sol_rhs[0] + corner_top / gamma * sol_rhs[k - 1];
  const double v_dot_u = sol_u[0] + corner_top / gamma * sol_u[k - 1];
  const double factor = v_dot_rhs / (1.0 + v_dot_u);

  std::vector<double> m(k + 1);
  for (int i = 0; i < k; ++i) m[i] = sol_rhs[i] - factor * sol_u[i];
  m[k] = m[0];
  return m;
}

}  // namespace

PeriodicCubicSpline::PeriodicCubicSpline(const std::vector<Point>& vertices) {
  const int k = static_cast<int>(vertices.size());
  if (k < 3) throw DataError("spline requires at least three vertices");

  values_ = vertices;
  values_.push_back(vertices.front());

  std::vector<double> h(k);
  knots_.resize(k + 1);
  knots_[0] = 0.0;
  for (int i = 0; i < k; ++i) {
    h[i] = norm(values_[i + 1] - values_[i]);
    if (!(h[i] > 0.0)) throw DataError("spline requires distinct consecutive vertices");
    knots_[i + 1] = knots_[i] + h[i];
  }

  std::vector<double> xs(k + 1), ys(k + 1);
  for (int i = 0; i <= k; ++i) {
    xs[i] = values_[i].x;
    ys[i] = values_[i].y;
  }
  second_x_ = solve_periodic_spline(h, xs);
  second_y_ = solve_periodic_spline(h, ys);

  cumulative_.resize(k + 1);
  cumulative_[0] = 0.0;
  for (int i = 0; i < k; ++i) {
    cumulative_[i + 1] = cumulative_[i] + arc_between(knots_[i], knots_[i + 1]);
  }
}

Point PeriodicCubicSpline::position(double t) const {
  t = std::clamp(t, 0.0, total_chord());
  const auto it = std::upper_bound(knots_.begin(), knots_.end(), t);
  const int i = std::clamp(static_cast<int>(it - knots_.begin()) - 1, 0,
                           segment_count() - 1);
  const double h = knots_[i + 1] - knots_[i];
  const double a = (knots_[i + 1] - t) / h;
  const double b = (t - knots_[i]) / h;
  const double cubic_a = (a * a * a - a) * h * h / 6.0;
  const double cubic_b = (b * b * b - b) * h * h / 6.0;
  return {a * values_[i].x + b * values_[i + 1].x + cubic_a * second_x_[i] +
              cubic_b * second_x_[i + 1],
          a * values_[i].y + b * values_[i + 1].y + cubic_a * second_y_[i] +
              cubic_b * second_y_[i + 1]};
}

Point PeriodicCubicSpline::derivative(double t) const {
  t = std::clamp(t, 0.0, total_chord());
  const auto it = std::upper_bound(knots_.begin(), knots_.end(), t);
  const int i = std::clamp(static_cast<int>(it - knots_.begin()) - 1, 0,
                           segment_count() - 1);
  const double h = knots_[i + 1] - knots_[i];
  const double a = (knots_[i + 1] - t) / h;
  const double b = (t - knots_[i]) / h;
  const double da = -(3.0 * a * a - 1.0) * h / 6.0;
  const double db = (3.0 * b * b - 1.0) * h / 6.0;
  return {(values_[i + 1].x - values_[i].x) / h + da * second_x_[i] +
              db * second_x_[i + 1],
          (values_[i + 1].y - values_[i].y) / h + da * second_y_[i] +
              db * second_y_[i + 1]};
}

double PeriodicCubicSpline::arc_between(double t_begin, double t_end) const {
  if (t_end <= t_begin) return 0.0;
  const Quadrature& q = quadrature();
  const double mid = 0.5 * (t_begin + t_end);
  const double half = 0.5 * (t_end - t_begin);
  double sum = 0.0;
  for (int j = 0; j < kQuadratureOrder; ++j) {
    sum += q.weights[j] * norm(derivative(mid + half * q.nodes[j]));
  }
  return half * sum;
}

double PeriodicCubicSpline::arc_length_to(double t) const {
  t = std::clamp(t, 0.0, total_chord());
  const auto it = std::upper_bound(knots_.begin(), knots_.end(), t);
  const int i = std::clamp(static_cast<int>(it - knots_.begin()) - 1, 0,
                           segment_count() - 1);
  return cumulative_[i] + arc_between(knots_[i], t);
}

double PeriodicCubicSpline::param_at_arc_length(double s) const {
  s = std::clamp(s, 0.0, arc_length());
  const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), s);
  const int i = std::clamp(static_cast<int>(it - cumulative_.begin()) - 1, 0,
                           segment_count() - 1);
  const double target = s - cumulative_[i];
  double lo = knots_[i];
  double hi = knots_[i + 1];
  while (hi - lo > kParamTolerance) {
    const double mid = 0.5 * (lo + hi);
    if (arc_between(knots_[i], mid) < target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace lra
