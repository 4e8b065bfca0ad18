#pragma once

#include <numeric>
#include <span>

#include "common.hpp"

namespace hypereig {

inline Matrix identity(Index n) {
  if (n < 0) throw dimension_error("negative identity size");
  return Matrix::Identity(n, n);
}

// i is 1-based
inline Vector delta(Index n, Index i) {
  if (i < 1 || i > n) throw dimension_error("delta index " + std::to_string(i) + " outside 1.." + std::to_string(n));
  Vector v = Vector::Zero(n);
  v(i - 1) = 1.0;
  return v;
}

inline Matrix kron(const Matrix& a, const Matrix& b) {
  const Index rows = checked_mul(a.rows(), b.rows());
  const Index cols = checked_mul(a.cols(), b.cols());
  check_entries(rows, cols);
  Matrix out(rows, cols);
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline Vector kron(const Vector& a, const Vector& b) {
  const Index n = checked_mul(a.size(), b.size());
  Vector out(n);
  for (Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

inline Vector kron_all(std::span<const Vector> factors) {
  Vector out = Vector::Ones(1);
  for (const auto& f : factors) out = kron(out, f);
  return out;
}

inline Matrix kron_all(std::span<const Matrix> factors) {
  Matrix out = Matrix::Ones(1, 1);
  for (const auto& f : factors) out = kron(out, f);
  return out;
}

inline Matrix stp(const Matrix& a, const Matrix& b) {
  const Index n = a.cols();
  const Index p = b.rows();
  if (n == 0 || p == 0) throw dimension_error("stp of a matrix with an empty inner dimension");
  if (n == p) return a * b;
  const Index t = std::lcm(n, p);
  check_entries(a.rows() * (t / n), b.cols() * (t / p));
  return kron(a, identity(t / n)) * kron(b, identity(t / p));
}

inline Matrix stp_chain(std::span<const Matrix> factors) {
  if (factors.empty()) throw dimension_error("empty stp chain");
  Matrix out = factors[0];
  for (std::size_t i = 1; i < factors.size(); ++i) out = stp(out, factors[i]);
  return out;
}

inline Vector stp_power(const Vector& x, Index r) {
  if (r < 1) throw dimension_error("stp power requires r >= 1");
  (void)checked_pow(x.size(), r);
  Vector out = x;
  for (Index i = 1; i < r; ++i) out = kron(out, x);
  return out;
}

inline Matrix pushdown(const Vector& x, const Matrix& a) { return kron(identity(x.size()), a); }

}  // namespace hypereig
