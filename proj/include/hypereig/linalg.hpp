#pragma once

#include <algorithm>
#include <optional>

#include "common.hpp"

namespace hypereig {

inline double default_rank_rel_tol(Index rows, Index cols) {
  return static_cast<double>(std::max<Index>({rows, cols, 1})) * std::numeric_limits<double>::epsilon() * 1e3;
}

template <typename Derived>
Vector singular_values(const Eigen::MatrixBase<Derived>& m) {
  if (m.rows() == 0 || m.cols() == 0) return Vector();
  Eigen::JacobiSVD<Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>> svd(m);
  return svd.singularValues();
}

inline Index rank_from_singular_values(const Vector& sv, double rel_tol) {
  if (sv.size() == 0 || sv(0) == 0.0) return 0;
  const double thr = rel_tol * sv(0);
  Index r = 0;
  for (Index i = 0; i < sv.size(); ++i)
    if (sv(i) > thr) ++r;
  return r;
}

template <typename Derived>
Index numerical_rank(const Eigen::MatrixBase<Derived>& m, std::optional<double> rel_tol = std::nullopt) {
  return rank_from_singular_values(singular_values(m), rel_tol.value_or(default_rank_rel_tol(m.rows(), m.cols())));
}

// orthonormal basis of the numerical null space, columns
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> null_space(
    const Eigen::MatrixBase<Derived>& m, std::optional<double> rel_tol = std::nullopt) {
  using M = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  const Index n = m.cols();
  if (m.rows() == 0) return M::Identity(n, n);
  Eigen::JacobiSVD<M> svd(m, Eigen::ComputeFullV);
  const Index rank = rank_from_singular_values(svd.singularValues(), rel_tol.value_or(default_rank_rel_tol(m.rows(), n)));
  return svd.matrixV().rightCols(n - rank);
}

}  // namespace hypereig
