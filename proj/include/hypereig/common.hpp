#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace hypereig {

using Index = std::int64_t;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

class error : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// shapes, partitions and index ranges
class dimension_error : public error {
  using error::error;
};

class size_error : public error {
  using error::error;
};

class zero_vector_error : public error {
  using error::error;
};

class numerical_error : public error {
  using error::error;
};

class degenerate_pencil_error : public numerical_error {
  using numerical_error::numerical_error;
};

inline constexpr Index max_entries = 100'000'000;

inline Index checked_mul(Index a, Index b) {
  if (a < 0 || b < 0) throw dimension_error("negative dimension");
  if (a != 0 && b > max_entries / a)
    throw size_error("size " + std::to_string(a) + " x " + std::to_string(b) + " exceeds the entry limit");
  return a * b;
}

inline Index checked_pow(Index base, Index exp) {
  Index out = 1;
  for (Index i = 0; i < exp; ++i) out = checked_mul(out, base);
  return out;
}

inline Index checked_product(const std::vector<Index>& dims) {
  Index out = 1;
  for (Index d : dims) out = checked_mul(out, d);
  return out;
}

inline void check_entries(Index rows, Index cols) { (void)checked_mul(rows, cols); }

}  // namespace hypereig
