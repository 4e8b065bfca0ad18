#pragma once

#include <cmath>
#include <optional>

#include "stp.hpp"

namespace hypereig {

inline constexpr double default_zero_tol = 1e-10;
inline constexpr double default_recon_tol = 1e-8;

// 1-based index of the first entry that is not negligible relative to max|x|
inline Index mu(const Vector& x, double zero_tol = default_zero_tol) {
  const double scale = x.size() ? x.cwiseAbs().maxCoeff() : 0.0;
  if (!(scale > 0.0)) throw zero_vector_error("zero vector has no leading entry");
  for (Index i = 0; i < x.size(); ++i)
    if (std::abs(x(i)) > zero_tol * scale) return i + 1;
  return x.size();
}

struct Monic {
  double c0;
  Vector monic;
};

inline Monic monicize(const Vector& x, double zero_tol = default_zero_tol) {
  const Index e = mu(x, zero_tol);
  const double c0 = x(e - 1);
  Vector m = x / c0;
  for (Index i = 0; i < e - 1; ++i) m(i) = 0.0;
  m(e - 1) = 1.0;
  return {c0, m};
}

// e is 1-based over prod(dims); returns 1-based component indices
inline std::vector<Index> index_split(Index e, const std::vector<Index>& dims) {
  const Index total = checked_product(dims);
  if (e < 1 || e > total) throw dimension_error("index " + std::to_string(e) + " outside 1.." + std::to_string(total));
  std::vector<Index> out(dims.size());
  Index rem = e - 1;
  for (Index k = static_cast<Index>(dims.size()) - 1; k >= 0; --k) {
    out[k] = rem % dims[k] + 1;
    rem /= dims[k];
  }
  return out;
}

inline Index index_join(const std::vector<Index>& comps, const std::vector<Index>& dims) {
  if (comps.size() != dims.size()) throw dimension_error("index_join arity mismatch");
  Index e = 0;
  for (std::size_t k = 0; k < dims.size(); ++k) {
    if (comps[k] < 1 || comps[k] > dims[k]) throw dimension_error("component index out of range");
    e = e * dims[k] + (comps[k] - 1);
  }
  return e + 1;
}

inline Index index_join(const std::vector<Index>& comps, Index n, Index r) {
  if (static_cast<Index>(comps.size()) != r) throw dimension_error("index_join arity mismatch");
  return index_join(comps, std::vector<Index>(static_cast<std::size_t>(r), n));
}

inline Index diagonal_index(Index e0, Index n, Index r) {
  if (n < 1 || r < 1) throw dimension_error("diagonal_index needs n >= 1 and r >= 1");
  if (e0 < 1 || e0 > n) throw dimension_error("diagonal_index base index out of range");
  if (n == 1) return 1;
  return (e0 - 1) * ((checked_pow(n, r) - 1) / (n - 1)) + 1;
}

// selects factor i (1-based) of a product vector whose leading index is e
inline Matrix xi_matrix(Index e, Index i, const std::vector<Index>& dims) {
  const auto comps = index_split(e, dims);
  const Index r = static_cast<Index>(dims.size());
  if (i < 1 || i > r) throw dimension_error("component position out of range");
  std::vector<Matrix> factors;
  for (Index k = 0; k < r; ++k) {
    if (k == i - 1)
      factors.push_back(identity(dims[k]));
    else
      factors.push_back(delta(dims[k], comps[k]).transpose());
  }
  return kron_all(std::span<const Matrix>(factors));
}

inline Vector extract_component(const Vector& x, Index e, Index i, const std::vector<Index>& dims) {
  if (x.size() != checked_product(dims)) throw dimension_error("vector length does not match dims");
  return xi_matrix(e, i, dims) * x;
}

struct MonicDecomposition {
  Index index = 1;
  double c0 = 0.0;
  std::vector<Vector> components;

  Vector compose() const { return c0 * kron_all(std::span<const Vector>(components)); }
};

struct DecomposeOptions {
  double zero_tol = default_zero_tol;
  double recon_tol = default_recon_tol;
};

inline double relative_error(const Vector& x, const Vector& y) {
  const double nx = x.norm();
  return nx > 0.0 ? (x - y).norm() / nx : y.norm();
}

// splits one factor at a time from the left
inline std::optional<MonicDecomposition> monic_decompose(const Vector& x, const std::vector<Index>& dims,
                                                         const DecomposeOptions& opts = {}) {
  if (dims.empty()) throw dimension_error("monic_decompose needs at least one factor");
  if (x.size() != checked_product(dims)) throw dimension_error("vector length does not match dims");
  MonicDecomposition out;
  out.index = mu(x, opts.zero_tol);
  out.c0 = x(out.index - 1);
  Vector rest = x;
  for (std::size_t k = 0; k + 1 < dims.size(); ++k) {
    const Index tail = rest.size() / dims[k];
    const std::vector<Index> split{dims[k], tail};
    const Index e = mu(rest, opts.zero_tol);
    const double pivot = rest(e - 1);
    const Vector head = xi_matrix(e, 1, split) * rest;
    const Vector body = xi_matrix(e, 2, split) * rest;
    if (relative_error(rest, kron(head, body) / pivot) > opts.recon_tol) return std::nullopt;
    out.components.push_back(monicize(head, opts.zero_tol).monic);
    rest = body;
  }
  out.components.push_back(monicize(rest, opts.zero_tol).monic);
  if (relative_error(x, out.compose()) > opts.recon_tol) return std::nullopt;
  return out;
}

inline bool is_diagonal(const MonicDecomposition& d, double tol = 1e-8) {
  for (std::size_t k = 1; k < d.components.size(); ++k) {
    if (d.components[k].size() != d.components[0].size()) return false;
    if ((d.components[k] - d.components[0]).cwiseAbs().maxCoeff() > tol) return false;
  }
  return true;
}

}  // namespace hypereig
