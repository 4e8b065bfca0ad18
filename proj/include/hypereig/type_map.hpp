#pragma once

#include <algorithm>
#include <functional>

#include "hypervector.hpp"

namespace hypereig {

struct TypeMap {
  Index n = 0;
  Index r = 0;
  std::vector<Matrix> factors;
  Matrix composed;

  Index s() const { return static_cast<Index>(factors.size()); }

  // B(x) evaluated factor by factor
  Vector apply(const Vector& x) const {
    if (x.size() != checked_pow(n, r)) throw dimension_error("type map argument has wrong length");
    std::vector<Vector> ys;
    for (const auto& b : factors) ys.push_back(b * x);
    return kron_all(std::span<const Vector>(ys));
  }
};

inline Matrix compose_type(const std::vector<Matrix>& bs, Index n, Index r) {
  if (bs.empty()) throw dimension_error("type map needs at least one factor");
  const Index cols = checked_pow(n, r);
  for (const auto& b : bs)
    if (b.rows() != n || b.cols() != cols)
      throw dimension_error("type factor is " + std::to_string(b.rows()) + "x" + std::to_string(b.cols()) +
                            ", expected " + std::to_string(n) + "x" + std::to_string(cols));
  (void)checked_pow(n, static_cast<Index>(bs.size()));
  (void)checked_pow(cols, static_cast<Index>(bs.size()));
  return kron_all(std::span<const Matrix>(bs));
}

inline TypeMap make_type_map(std::vector<Matrix> bs) {
  if (bs.empty()) throw dimension_error("type map needs at least one factor");
  const Index n = bs.front().rows();
  Index r = n == 1 ? 1 : 0;
  if (n > 1)
    for (Index c = 1; c < bs.front().cols(); c = checked_mul(c, n)) ++r;
  if (n < 1 || r < 1 || checked_pow(n, r) != bs.front().cols())
    throw dimension_error("type factor columns are not a power of its rows");
  TypeMap t;
  t.n = n;
  t.r = r;
  t.composed = compose_type(bs, n, r);
  t.factors = std::move(bs);
  return t;
}

enum class NamedType { H, Markov, InnerProduct, IdentityPower };

inline NamedType parse_named_type(const std::string& name) {
  if (name == "H" || name == "h") return NamedType::H;
  if (name == "markov") return NamedType::Markov;
  if (name == "inner-product" || name == "inner_product") return NamedType::InnerProduct;
  if (name == "identity-power" || name == "identity_power") return NamedType::IdentityPower;
  throw dimension_error("unknown type name '" + name + "'");
}

inline const char* to_string(NamedType t) {
  switch (t) {
    case NamedType::H: return "H";
    case NamedType::Markov: return "markov";
    case NamedType::InnerProduct: return "inner-product";
    case NamedType::IdentityPower: return "identity-power";
  }
  return "";
}

// 1-based column of the monomial with the given factor indices, placed at its sorted form
inline Index monomial_column(std::vector<Index> idx, Index n) {
  std::sort(idx.begin(), idx.end());
  return index_join(idx, n, static_cast<Index>(idx.size()));
}

inline void for_each_tuple(Index n, Index len, const std::function<void(const std::vector<Index>&)>& f) {
  std::vector<Index> t(static_cast<std::size_t>(len), 1);
  while (true) {
    f(t);
    Index k = len - 1;
    while (k >= 0 && t[k] == n) t[k--] = 1;
    if (k < 0) return;
    ++t[k];
  }
}

inline Matrix named_type_matrix(NamedType type, Index n, Index r) {
  if (n < 1 || r < 1) throw dimension_error("named type needs n >= 1 and r >= 1");
  Matrix b = Matrix::Zero(n, checked_pow(n, r));
  switch (type) {
    case NamedType::H:
      for (Index i = 1; i <= n; ++i) b(i - 1, diagonal_index(i, n, r) - 1) = 1.0;
      break;
    case NamedType::Markov:
      for (Index i = 1; i <= n; ++i)
        for_each_tuple(n, r - 1, [&](const std::vector<Index>& t) {
          auto idx = t;
          idx.push_back(i);
          b(i - 1, monomial_column(idx, n) - 1) += 1.0;
        });
      break;
    case NamedType::InnerProduct:
      if (r % 2 == 0) throw dimension_error("inner-product type needs odd r");
      for (Index i = 1; i <= n; ++i)
        for_each_tuple(n, (r - 1) / 2, [&](const std::vector<Index>& t) {
          std::vector<Index> idx;
          for (Index k : t) idx.insert(idx.end(), {k, k});
          idx.push_back(i);
          b(i - 1, monomial_column(idx, n) - 1) += 1.0;
        });
      break;
    case NamedType::IdentityPower:
      if (r != 1) throw dimension_error("identity-power type needs r = 1");
      b = identity(n);
      break;
  }
  return b;
}

inline TypeMap named_type(NamedType type, Index n, Index r, Index s) {
  if (s < 1) throw dimension_error("type map needs s >= 1");
  return make_type_map(std::vector<Matrix>(static_cast<std::size_t>(s), named_type_matrix(type, n, r)));
}

}  // namespace hypereig
