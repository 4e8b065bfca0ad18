#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "common.hpp"

namespace hypereig {

// first-kind nodes on [a, b], ascending
inline std::vector<double> chebyshev_nodes(Index count, double a, double b) {
  std::vector<double> x(static_cast<std::size_t>(count));
  for (Index k = 0; k < count; ++k) {
    const double t = -std::cos(std::numbers::pi * (2.0 * k + 1.0) / (2.0 * count));
    x[k] = 0.5 * (a + b) + 0.5 * (b - a) * t;
  }
  return x;
}

// coefficients c_0..c_{N-1} of the interpolant in T_k on the reference interval
inline std::vector<double> chebyshev_coefficients(const std::vector<double>& values) {
  const Index count = static_cast<Index>(values.size());
  std::vector<double> c(values.size(), 0.0);
  for (Index j = 0; j < count; ++j) {
    double s = 0.0;
    for (Index k = 0; k < count; ++k)
      s += values[k] * std::cos(std::numbers::pi * j * (2.0 * (count - 1 - k) + 1.0) / (2.0 * count));
    c[j] = (j == 0 ? 1.0 : 2.0) * s / count;
  }
  return c;
}

// roots on the reference interval from the colleague matrix
inline std::vector<std::complex<double>> chebyshev_roots(std::vector<double> c, double trim_rel = 1e-13) {
  double scale = 0.0;
  for (double v : c) scale = std::max(scale, std::abs(v));
  if (scale == 0.0) return {};
  while (c.size() > 1 && std::abs(c.back()) <= trim_rel * scale) c.pop_back();
  const Index deg = static_cast<Index>(c.size()) - 1;
  if (deg < 1) return {};
  if (deg == 1) return {std::complex<double>(-c[0] / c[1], 0.0)};
  Matrix m = Matrix::Zero(deg, deg);
  m(0, 1) = 1.0;
  for (Index k = 1; k < deg; ++k) {
    m(k, k - 1) = 0.5;
    if (k + 1 < deg) m(k, k + 1) = 0.5;
  }
  for (Index j = 0; j < deg; ++j) m(deg - 1, j) -= c[j] / (2.0 * c[deg]);
  Eigen::EigenSolver<Matrix> es(m, false);
  std::vector<std::complex<double>> out;
  for (Index k = 0; k < deg; ++k) out.push_back(es.eigenvalues()(k));
  return out;
}

template <typename F>
double golden_minimize(F&& f, double a, double b, int iterations = 200) {
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = b - g * (b - a), x2 = a + g * (b - a);
  double f1 = f(x1), f2 = f(x2);
  for (int it = 0; it < iterations && b - a > 1e-16 * (1.0 + std::abs(a) + std::abs(b)); ++it) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - g * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + g * (b - a);
      f2 = f(x2);
    }
  }
  return f1 <= f2 ? x1 : x2;
}

}  // namespace hypereig
