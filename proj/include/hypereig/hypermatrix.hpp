#pragma once

#include <algorithm>
#include <utility>

#include "stp.hpp"

namespace hypereig {

class Hypermatrix {
 public:
  Hypermatrix() = default;

  Hypermatrix(std::vector<Index> dims, std::vector<double> data) : dims_(std::move(dims)), data_(std::move(data)) {
    if (dims_.empty()) throw dimension_error("hypermatrix order must be at least 1");
    for (Index d : dims_)
      if (d < 1) throw dimension_error("hypermatrix dimensions must be positive");
    const Index total = checked_product(dims_);
    if (static_cast<Index>(data_.size()) != total)
      throw dimension_error("hypermatrix has " + std::to_string(data_.size()) + " entries, dims require " +
                            std::to_string(total));
    strides_.assign(dims_.size(), 1);
    for (Index k = static_cast<Index>(dims_.size()) - 2; k >= 0; --k) strides_[k] = strides_[k + 1] * dims_[k + 1];
  }

  static Hypermatrix zeros(std::vector<Index> dims) {
    const Index total = checked_product(dims);
    return Hypermatrix(std::move(dims), std::vector<double>(static_cast<std::size_t>(total), 0.0));
  }

  Index order() const { return static_cast<Index>(dims_.size()); }
  const std::vector<Index>& dims() const { return dims_; }
  const std::vector<Index>& strides() const { return strides_; }
  const std::vector<double>& data() const { return data_; }
  Index size() const { return static_cast<Index>(data_.size()); }

  bool equilateral() const {
    return std::all_of(dims_.begin(), dims_.end(), [&](Index d) { return d == dims_.front(); });
  }

  // 0-based multi-index
  Index offset(std::span<const Index> idx) const {
    if (static_cast<Index>(idx.size()) != order()) throw dimension_error("multi-index has wrong length");
    Index off = 0;
    for (std::size_t k = 0; k < idx.size(); ++k) {
      if (idx[k] < 0 || idx[k] >= dims_[k]) throw dimension_error("multi-index out of range");
      off += idx[k] * strides_[k];
    }
    return off;
  }

  double at(std::span<const Index> idx) const { return data_[static_cast<std::size_t>(offset(idx))]; }
  double& at(std::span<const Index> idx) { return data_[static_cast<std::size_t>(offset(idx))]; }

  double at(std::initializer_list<Index> idx) const { return at(std::span<const Index>(idx.begin(), idx.size())); }
  double& at(std::initializer_list<Index> idx) { return at(std::span<const Index>(idx.begin(), idx.size())); }

  std::vector<Index> unravel(Index off) const {
    std::vector<Index> idx(dims_.size());
    for (std::size_t k = 0; k < dims_.size(); ++k) {
      idx[k] = off / strides_[k];
      off %= strides_[k];
    }
    return idx;
  }

 private:
  std::vector<Index> dims_;
  std::vector<double> data_;
  std::vector<Index> strides_;
};

// Positions are 0-based; rows and cols must cover 0..order-1 exactly once.
struct IndexPartition {
  std::vector<Index> rows;
  std::vector<Index> cols;

  static IndexPartition from_one_based(std::vector<Index> rows1, std::vector<Index> cols1) {
    for (auto& r : rows1) --r;
    for (auto& c : cols1) --c;
    return {std::move(rows1), std::move(cols1)};
  }

  void validate(Index order) const {
    std::vector<int> seen(static_cast<std::size_t>(std::max<Index>(order, 0)), 0);
    auto mark = [&](Index p) {
      if (p < 0 || p >= order)
        throw dimension_error("partition position " + std::to_string(p + 1) + " outside 1.." + std::to_string(order));
      if (seen[static_cast<std::size_t>(p)]++) throw dimension_error("partition position " + std::to_string(p + 1) + " repeated");
    };
    for (Index p : rows) mark(p);
    for (Index p : cols) mark(p);
    if (static_cast<Index>(rows.size() + cols.size()) != order)
      throw dimension_error("partition does not cover every index position");
  }
};

inline Index group_size(const Hypermatrix& h, const std::vector<Index>& positions) {
  Index out = 1;
  for (Index p : positions) out = checked_mul(out, h.dims()[static_cast<std::size_t>(p)]);
  return out;
}

inline Vector vectorize(const Hypermatrix& h) {
  return Eigen::Map<const Vector>(h.data().data(), h.size());
}

inline Matrix flatten(const Hypermatrix& h, const IndexPartition& p) {
  p.validate(h.order());
  const Index rows = group_size(h, p.rows);
  const Index cols = group_size(h, p.cols);
  Matrix out(rows, cols);
  std::vector<Index> idx(static_cast<std::size_t>(h.order()), 0);
  for (Index off = 0; off < h.size(); ++off) {
    Index row = 0, col = 0;
    for (Index q : p.rows) row = row * h.dims()[q] + idx[q];
    for (Index q : p.cols) col = col * h.dims()[q] + idx[q];
    out(row, col) = h.data()[static_cast<std::size_t>(off)];
    for (Index k = h.order() - 1; k >= 0; --k) {
      if (++idx[k] < h.dims()[k]) break;
      idx[k] = 0;
    }
  }
  return out;
}

inline Hypermatrix unflatten(const Matrix& m, const std::vector<Index>& dims, const IndexPartition& p) {
  Hypermatrix h = Hypermatrix::zeros(dims);
  p.validate(h.order());
  if (group_size(h, p.rows) != m.rows() || group_size(h, p.cols) != m.cols())
    throw dimension_error("matrix shape does not match the partition of dims");
  std::vector<double> data(static_cast<std::size_t>(h.size()));
  std::vector<Index> idx(dims.size(), 0);
  for (Index off = 0; off < h.size(); ++off) {
    Index row = 0, col = 0;
    for (Index q : p.rows) row = row * dims[q] + idx[q];
    for (Index q : p.cols) col = col * dims[q] + idx[q];
    data[static_cast<std::size_t>(off)] = m(row, col);
    for (Index k = h.order() - 1; k >= 0; --k) {
      if (++idx[k] < dims[k]) break;
      idx[k] = 0;
    }
  }
  return Hypermatrix(dims, std::move(data));
}

// pairs are 0-based (position in a, position in b); result holds a's free indices then b's
inline Hypermatrix contract(const Hypermatrix& a, const Hypermatrix& b, const std::vector<std::pair<Index, Index>>& pairs) {
  std::vector<int> used_a(a.order(), 0), used_b(b.order(), 0);
  std::vector<Index> pa, pb;
  for (auto [i, j] : pairs) {
    if (i < 0 || i >= a.order() || j < 0 || j >= b.order()) throw dimension_error("contraction position out of range");
    if (used_a[i]++ || used_b[j]++) throw dimension_error("contraction position used twice");
    if (a.dims()[i] != b.dims()[j])
      throw dimension_error("contracted dimensions differ: " + std::to_string(a.dims()[i]) + " vs " +
                            std::to_string(b.dims()[j]));
    pa.push_back(i);
    pb.push_back(j);
  }
  std::vector<Index> fa, fb, out_dims;
  for (Index k = 0; k < a.order(); ++k)
    if (!used_a[k]) {
      fa.push_back(k);
      out_dims.push_back(a.dims()[k]);
    }
  for (Index k = 0; k < b.order(); ++k)
    if (!used_b[k]) {
      fb.push_back(k);
      out_dims.push_back(b.dims()[k]);
    }
  const Matrix ma = flatten(a, {fa, pa});
  const Matrix mb = flatten(b, {pb, fb});
  const Matrix c = ma * mb;
  if (out_dims.empty()) return Hypermatrix({1}, {c(0, 0)});
  std::vector<double> data(static_cast<std::size_t>(c.size()));
  for (Index i = 0; i < c.rows(); ++i)
    for (Index j = 0; j < c.cols(); ++j) data[static_cast<std::size_t>(i * c.cols() + j)] = c(i, j);
  return Hypermatrix(std::move(out_dims), std::move(data));
}

inline Vector apply(const Hypermatrix& h, const IndexPartition& p, const Vector& x) {
  const Matrix m = flatten(h, p);
  if (m.cols() != x.size())
    throw dimension_error("vector length " + std::to_string(x.size()) + " does not match " + std::to_string(m.cols()) +
                          " columns");
  return m * x;
}

// first xs.size() positions pair with vectors, the remaining ones with covectors
inline double eval_tensor(const Hypermatrix& h, const std::vector<Vector>& xs, const std::vector<Vector>& sigmas) {
  const Index r = static_cast<Index>(xs.size());
  const Index s = static_cast<Index>(sigmas.size());
  if (r + s != h.order()) throw dimension_error("eval_tensor needs order-many arguments");
  for (Index k = 0; k < r; ++k)
    if (xs[k].size() != h.dims()[k]) throw dimension_error("vector argument has wrong length");
  for (Index k = 0; k < s; ++k)
    if (sigmas[k].size() != h.dims()[r + k]) throw dimension_error("covector argument has wrong length");
  IndexPartition p;
  for (Index k = 0; k < s; ++k) p.rows.push_back(r + k);
  for (Index k = 0; k < r; ++k) p.cols.push_back(k);
  const Matrix m = flatten(h, p);
  return kron_all(std::span<const Vector>(sigmas)).dot(m * kron_all(std::span<const Vector>(xs)));
}

}  // namespace hypereig
