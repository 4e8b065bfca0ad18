#pragma once

#include <array>
#include <numeric>
#include <random>

#include "chebyshev.hpp"
#include "linalg.hpp"

namespace hypereig {

struct Pencil {
  Matrix a;
  Matrix b;

  Pencil(Matrix a_, Matrix b_) : a(std::move(a_)), b(std::move(b_)) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
      throw dimension_error("pencil matrices differ in shape: " + std::to_string(a.rows()) + "x" +
                            std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) + "x" +
                            std::to_string(b.cols()));
    if (a.rows() == 0 || a.cols() == 0) throw dimension_error("empty pencil");
  }

  Index rows() const { return a.rows(); }
  Index cols() const { return a.cols(); }
  Matrix at(double lambda) const { return a - lambda * b; }
  CMatrix at(std::complex<double> lambda) const { return a.cast<std::complex<double>>() - lambda * b.cast<std::complex<double>>(); }

  Pencil rows_subset(const std::vector<Index>& rows) const {
    Matrix ra(rows.size(), a.cols()), rb(rows.size(), b.cols());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      ra.row(i) = a.row(rows[i]);
      rb.row(i) = b.row(rows[i]);
    }
    return {ra, rb};
  }
};

struct PencilOptions {
  std::optional<double> rank_tol;
  int rank_probes = 5;
  std::uint64_t seed = 42;
  double window_scale = 10.0;
  int max_widen = 2;
};

inline double uniform_pm1(std::mt19937_64& rng) {
  return 2.0 * static_cast<double>(rng() >> 11) * 0x1.0p-53 - 1.0;
}

inline std::vector<double> probe_lambdas(const PencilOptions& opts) {
  std::mt19937_64 rng(opts.seed);
  std::vector<double> out;
  for (int k = 0; k < std::max(opts.rank_probes, 1); ++k) out.push_back(uniform_pm1(rng));
  return out;
}

inline Index generic_rank(const Pencil& p, const PencilOptions& opts = {}) {
  Index best = 0;
  for (double l : probe_lambdas(opts)) best = std::max(best, numerical_rank(p.at(l), opts.rank_tol));
  return best;
}

enum class EigenKind { Essential, Quasi };

inline const char* to_string(EigenKind k) { return k == EigenKind::Essential ? "essential" : "quasi"; }

inline std::optional<EigenKind> classify(const Pencil& p, double lambda, Index rg, const PencilOptions& opts = {}) {
  const Index rank = numerical_rank(p.at(lambda), opts.rank_tol);
  if (rank < rg) return EigenKind::Essential;
  if (rank == rg && rg < p.cols()) return EigenKind::Quasi;
  return std::nullopt;
}

inline std::optional<EigenKind> classify(const Pencil& p, double lambda, const PencilOptions& opts = {}) {
  return classify(p, lambda, generic_rank(p, opts), opts);
}

// rows spanning the row space at a generic probe, via column-pivoted QR of the transpose
inline std::vector<Index> generic_rows(const Pencil& p, Index rg, const PencilOptions& opts = {}) {
  const auto probes = probe_lambdas(opts);
  const Matrix e = p.at(probes.front() * 0.5 + 0.25);
  Eigen::ColPivHouseholderQR<Matrix> qr(e.transpose());
  std::vector<Index> rows;
  for (Index k = 0; k < rg; ++k) rows.push_back(qr.colsPermutation().indices()(k));
  std::sort(rows.begin(), rows.end());
  return rows;
}

inline std::vector<std::complex<double>> finite_qz_eigenvalues(const Matrix& a, const Matrix& b) {
  Eigen::GeneralizedEigenSolver<Matrix> ges(a, b, false);
  if (ges.info() != Eigen::Success) throw numerical_error("QZ iteration failed");
  const double bscale = std::max(b.norm(), std::numeric_limits<double>::min());
  std::vector<std::complex<double>> out;
  for (Index k = 0; k < a.rows(); ++k) {
    const double beta = ges.betas()(k);
    if (std::abs(beta) <= 1e-13 * bscale) continue;
    out.push_back(ges.alphas()(k) / beta);
  }
  std::sort(out.begin(), out.end(), [](auto x, auto y) {
    return x.real() != y.real() ? x.real() < y.real() : x.imag() < y.imag();
  });
  return out;
}

inline std::vector<std::complex<double>> square_pencil_eigen(const Pencil& p, const PencilOptions& opts = {}) {
  if (p.rows() != p.cols()) throw dimension_error("square_pencil_eigen needs a square pencil");
  if (generic_rank(p, opts) < p.cols()) throw degenerate_pencil_error("singular pencil: det(A - lambda B) vanishes identically");
  return finite_qz_eigenvalues(p.a, p.b);
}

inline Matrix kernel_basis(const Pencil& p, double lambda, std::optional<double> rank_tol = std::nullopt) {
  return null_space(p.at(lambda), rank_tol);
}

inline CMatrix kernel_basis(const Pencil& p, std::complex<double> lambda, std::optional<double> rank_tol = std::nullopt) {
  return null_space(p.at(lambda), rank_tol);
}

struct PsiReduction {
  Matrix psi;
  Matrix reduced;
};

inline PsiReduction psi_reduction(const Pencil& p, std::optional<double> rank_tol = std::nullopt) {
  if (numerical_rank(p.b, rank_tol) < p.rows()) throw numerical_error("psi reduction needs B of full row rank");
  const Matrix gram = p.b * p.b.transpose();
  Matrix psi = p.b.transpose() * gram.ldlt().solve(Matrix::Identity(p.rows(), p.rows()));
  return {psi, p.a * psi};
}

struct EssentialSearch {
  std::vector<double> values;
  double window_lo = 0.0;
  double window_hi = 0.0;
  Index generic_rank = 0;
  std::vector<Index> rows;
  bool square_reduced = false;
  std::vector<std::string> diagnostics;
};

inline double sigma_at(const Pencil& p, double lambda, Index k) {
  const Vector sv = singular_values(p.at(lambda));
  return k < sv.size() ? sv(k) : 0.0;
}

inline bool drops_rank(const Pencil& p, double lambda, Index rg, const PencilOptions& opts) {
  return numerical_rank(p.at(lambda), opts.rank_tol) < rg;
}

inline void merge_sorted(std::vector<double>& v, double tol) {
  std::sort(v.begin(), v.end());
  std::vector<double> out;
  for (double x : v)
    if (out.empty() || std::abs(x - out.back()) > tol * (1.0 + std::abs(x))) out.push_back(x);
  v = std::move(out);
}

inline EssentialSearch essential_eigenvalues_real(const Pencil& p, const PencilOptions& opts = {}) {
  EssentialSearch res;
  res.generic_rank = generic_rank(p, opts);
  const Index rg = res.generic_rank;
  const double anorm = p.a.norm();
  const double bnorm = p.b.norm();
  const double rho = anorm / std::max(bnorm, std::numeric_limits<double>::epsilon());
  double radius = std::max(opts.window_scale * rho, 1.0);
  res.window_lo = -radius;
  res.window_hi = radius;
  if (rg == 0) {
    res.diagnostics.push_back("generic rank 0: no essential eigenvalues");
    return res;
  }
  res.rows = rg < p.rows() ? generic_rows(p, rg, opts) : [&] {
    std::vector<Index> all(p.rows());
    std::iota(all.begin(), all.end(), Index{0});
    return all;
  }();
  const Pencil red = p.rows_subset(res.rows);
  const Index last = rg - 1;
  auto refine = [&](double centre, double width) {
    auto f = [&](double l) { return sigma_at(red, l, last); };
    const int cells = 40;
    const double h = 2.0 * width / cells;
    int best = 0;
    double fbest = std::numeric_limits<double>::infinity();
    for (int k = 0; k <= cells; ++k) {
      const double v = f(centre - width + k * h);
      if (v < fbest) {
        fbest = v;
        best = k;
      }
    }
    const double at = centre - width + best * h;
    return golden_minimize(f, at - h, at + h);
  };

  std::vector<double> candidates;
  if (rg == p.cols()) {
    res.square_reduced = true;
    for (auto z : finite_qz_eigenvalues(red.a, red.b)) {
      const double scale = 1.0 + std::abs(z);
      if (std::abs(z.imag()) > 1e-6 * scale) continue;
      const double w = std::max(1e-7 * scale, 10.0 * std::abs(z.imag()));
      candidates.push_back(refine(z.real(), w));
    }
    if (!candidates.empty()) {
      const auto [lo, hi] = std::minmax_element(candidates.begin(), candidates.end());
      res.window_lo = std::min(res.window_lo, *lo);
      res.window_hi = std::max(res.window_hi, *hi);
    }
  } else {
    for (int attempt = 0; attempt <= opts.max_widen; ++attempt) {
      candidates.clear();
      const Index count = 2 * rg + 1;
      const auto nodes = chebyshev_nodes(count, -radius, radius);
      std::vector<double> values;
      for (double l : nodes) {
        const Matrix e = red.at(l);
        values.push_back((e * e.transpose()).determinant());
      }
      double vmax = 0.0;
      for (double v : values) vmax = std::max(vmax, std::abs(v));
      if (vmax == 0.0) {
        res.diagnostics.push_back("Gram determinant vanishes at every sample");
        break;
      }
      for (double& v : values) {
        if (v < -1e-10 * vmax) res.diagnostics.push_back("negative Gram determinant sample");
        v /= vmax;
      }
      bool near_edge = false;
      for (auto z : chebyshev_roots(chebyshev_coefficients(values))) {
        const double re = z.real() * radius;
        const double im = z.imag() * radius;
        if (std::abs(z.imag()) > 1e-3) continue;
        if (std::abs(z.real()) > 0.95) near_edge = true;
        const double w = std::max({10.0 * std::abs(im), 1e-2 * radius, 1e-9});
        candidates.push_back(refine(re, w));
      }
      res.window_lo = -radius;
      res.window_hi = radius;
      if (!near_edge || attempt == opts.max_widen) {
        if (near_edge) res.diagnostics.push_back("root near window boundary after widening");
        break;
      }
      radius *= 10.0;
    }
  }
  for (double l : candidates)
    if (drops_rank(p, l, rg, opts)) res.values.push_back(l);
  merge_sorted(res.values, 1e-7);
  return res;
}

// Grid search plus Nelder-Mead; not exhaustive.
inline std::vector<std::complex<double>> essential_eigenvalues_complex(const Pencil& p, const PencilOptions& opts = {},
                                                                       int grid = 41) {
  const Index rg = generic_rank(p, opts);
  std::vector<std::complex<double>> out;
  if (rg == 0) return out;
  std::vector<Index> rows = rg < p.rows() ? generic_rows(p, rg, opts) : std::vector<Index>{};
  if (rows.empty()) {
    rows.resize(p.rows());
    std::iota(rows.begin(), rows.end(), Index{0});
  }
  const Pencil red = p.rows_subset(rows);
  auto verify = [&](std::complex<double> z) { return numerical_rank(p.at(z), opts.rank_tol) < rg; };
  if (rg == p.cols()) {
    for (auto z : finite_qz_eigenvalues(red.a, red.b))
      if (verify(z)) out.push_back(z);
    return out;
  }
  const double rho = p.a.norm() / std::max(p.b.norm(), std::numeric_limits<double>::epsilon());
  const double radius = std::max(opts.window_scale * rho, 1.0);
  auto f = [&](double x, double y) {
    const Vector sv = singular_values(red.at(std::complex<double>(x, y)));
    return sv(0) > 0.0 ? sv(rg - 1) / sv(0) : 0.0;
  };
  const double h = 2.0 * radius / (grid - 1);
  std::vector<std::vector<double>> vals(grid, std::vector<double>(grid));
  for (int i = 0; i < grid; ++i)
    for (int j = 0; j < grid; ++j) vals[i][j] = f(-radius + i * h, -radius + j * h);
  for (int i = 1; i + 1 < grid; ++i)
    for (int j = 1; j + 1 < grid; ++j) {
      const double v = vals[i][j];
      if (v > 0.5 || v > vals[i - 1][j] || v > vals[i + 1][j] || v > vals[i][j - 1] || v > vals[i][j + 1]) continue;
      std::array<std::array<double, 3>, 3> s{};
      const double x0 = -radius + i * h, y0 = -radius + j * h;
      const std::array<std::array<double, 2>, 3> start{{{x0, y0}, {x0 + h / 2, y0}, {x0, y0 + h / 2}}};
      for (int k = 0; k < 3; ++k) s[k] = {start[k][0], start[k][1], f(start[k][0], start[k][1])};
      for (int it = 0; it < 400; ++it) {
        std::sort(s.begin(), s.end(), [](auto& u, auto& w) { return u[2] < w[2]; });
        const double cx = 0.5 * (s[0][0] + s[1][0]), cy = 0.5 * (s[0][1] + s[1][1]);
        const double rx = 2 * cx - s[2][0], ry = 2 * cy - s[2][1];
        const double fr = f(rx, ry);
        if (fr < s[0][2]) {
          const double ex = 3 * cx - 2 * s[2][0], ey = 3 * cy - 2 * s[2][1];
          const double fe = f(ex, ey);
          s[2] = fe < fr ? std::array<double, 3>{ex, ey, fe} : std::array<double, 3>{rx, ry, fr};
        } else if (fr < s[1][2]) {
          s[2] = {rx, ry, fr};
        } else {
          const double kx = 0.5 * (cx + s[2][0]), ky = 0.5 * (cy + s[2][1]);
          const double fk = f(kx, ky);
          if (fk < s[2][2]) {
            s[2] = {kx, ky, fk};
          } else {
            for (int k = 1; k < 3; ++k) {
              s[k][0] = 0.5 * (s[0][0] + s[k][0]);
              s[k][1] = 0.5 * (s[0][1] + s[k][1]);
              s[k][2] = f(s[k][0], s[k][1]);
            }
          }
        }
      }
      const std::complex<double> z(s[0][0], s[0][1]);
      if (!verify(z)) continue;
      bool dup = false;
      for (auto w : out) dup = dup || std::abs(w - z) < 1e-6 * (1.0 + std::abs(z));
      if (!dup) out.push_back(z);
    }
  std::sort(out.begin(), out.end(), [](auto x, auto y) {
    return x.real() != y.real() ? x.real() < y.real() : x.imag() < y.imag();
  });
  return out;
}

}  // namespace hypereig
