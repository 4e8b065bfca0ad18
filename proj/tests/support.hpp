#pragma once

#include <random>

#include "hypereig/hypereig.hpp"

namespace testing_support {

using hypereig::Index;
using hypereig::Matrix;
using hypereig::Vector;

inline Matrix random_matrix(std::mt19937_64& rng, Index rows, Index cols) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) m(i, j) = u(rng);
  return m;
}

inline Vector random_vector(std::mt19937_64& rng, Index n) { return random_matrix(rng, n, 1).col(0); }

inline Index random_int(std::mt19937_64& rng, Index lo, Index hi) {
  return std::uniform_int_distribution<Index>(lo, hi)(rng);
}

// entrywise Kronecker product straight from the index formula
inline Matrix naive_kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < out.rows(); ++i)
    for (Index j = 0; j < out.cols(); ++j)
      out(i, j) = a(i / b.rows(), j / b.cols()) * b(i % b.rows(), j % b.cols());
  return out;
}

inline Index gcd(Index a, Index b) { return b == 0 ? a : gcd(b, a % b); }

// semi-tensor product from its definition, with the Kronecker products formed entrywise
inline Matrix naive_stp(const Matrix& a, const Matrix& b) {
  const Index n = a.cols(), p = b.rows();
  const Index t = n / gcd(n, p) * p;
  return naive_kron(a, Matrix::Identity(t / n, t / n)) * naive_kron(b, Matrix::Identity(t / p, t / p));
}

inline double max_abs(const Matrix& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

inline std::string problems(const std::string& name) { return std::string(PROBLEMS_DIR) + "/" + name; }

}  // namespace testing_support
