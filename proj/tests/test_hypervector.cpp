#include <gtest/gtest.h>

#include "support.hpp"

using namespace hypereig;
using namespace testing_support;

TEST(Mu, FirstNonNegligibleEntry) {
  Vector x(4);
  x << 0, 1e-14, -3, 2;
  EXPECT_EQ(mu(x), 3);
  EXPECT_EQ(mu(x, 1e-16), 2);
  EXPECT_THROW(mu(Vector::Zero(3)), zero_vector_error);
}

TEST(Monicize, ScalesLeadingEntryToOne) {
  Vector x(3);
  x << 0, -2, 4;
  const auto m = monicize(x);
  EXPECT_DOUBLE_EQ(m.c0, -2);
  EXPECT_DOUBLE_EQ(m.monic(1), 1);
  EXPECT_DOUBLE_EQ(m.monic(2), -2);
}

TEST(IndexMaps, SplitJoinRoundTrip) {
  const std::vector<Index> dims{2, 3, 4};
  for (Index e = 1; e <= 24; ++e) EXPECT_EQ(index_join(index_split(e, dims), dims), e);
  EXPECT_EQ(index_split(1, dims), (std::vector<Index>{1, 1, 1}));
  EXPECT_EQ(index_split(24, dims), (std::vector<Index>{2, 3, 4}));
  EXPECT_EQ(index_split(6, {2, 2, 2}), (std::vector<Index>{2, 1, 2}));
  EXPECT_THROW(index_split(0, dims), dimension_error);
  EXPECT_THROW(index_split(25, dims), dimension_error);
  EXPECT_THROW(index_join({3, 1, 1}, dims), dimension_error);
}

TEST(IndexMaps, DiagonalIndex) {
  EXPECT_EQ(diagonal_index(1, 2, 3), 1);
  EXPECT_EQ(diagonal_index(2, 2, 3), 8);
  EXPECT_EQ(diagonal_index(2, 3, 3), 14);
  for (Index n = 2; n <= 4; ++n)
    for (Index r = 1; r <= 4; ++r)
      for (Index e0 = 1; e0 <= n; ++e0)
        EXPECT_EQ(diagonal_index(e0, n, r), index_join(std::vector<Index>(r, e0), n, r));
  EXPECT_THROW(diagonal_index(0, 2, 2), dimension_error);
}

TEST(XiMatrix, SelectorShapes) {
  const Matrix xi1 = xi_matrix(6, 1, {2, 2, 2});
  Matrix want1 = Matrix::Zero(2, 8);
  want1(0, 1) = want1(1, 5) = 1;
  EXPECT_EQ(xi1, want1);
  const Matrix xi3 = xi_matrix(6, 3, {2, 2, 2});
  Matrix want3 = Matrix::Zero(2, 8);
  want3(0, 4) = want3(1, 5) = 1;
  EXPECT_EQ(xi3, want3);
}

TEST(XiMatrix, ExtractsFactors) {
  std::mt19937_64 rng(21);
  const Vector a = random_vector(rng, 2), b = random_vector(rng, 3), c = random_vector(rng, 2);
  const std::vector<Index> dims{2, 3, 2};
  const Vector x = kron(kron(a, b), c);
  const Index e = index_join({1, 2, 1}, dims);
  EXPECT_LE(max_abs(extract_component(x, e, 2, dims) - b * a(0) * c(0)), 1e-15);
  EXPECT_LE(max_abs(extract_component(x, e, 3, dims) - c * a(0) * b(1)), 1e-15);
}

TEST(MonicDecompose, RecoversFactors) {
  Vector a(2), b(3);
  a << 0, 2;
  b << 1, -1, 0.5;
  const Vector x = kron(a, b);
  const auto d = monic_decompose(x, {2, 3});
  ASSERT_TRUE(d.has_value());
  EXPECT_EQ(d->index, 4);
  EXPECT_DOUBLE_EQ(d->c0, 2.0);
  EXPECT_LE(max_abs(d->components[0] - Vector::Unit(2, 1)), 1e-15);
  EXPECT_LE(max_abs(d->components[1] - b), 1e-15);
  EXPECT_FALSE(is_diagonal(*d));
}

TEST(MonicDecompose, RejectsEntangledVector) {
  Vector x(4);
  x << 1, 0, 0, 1;
  EXPECT_FALSE(monic_decompose(x, {2, 2}).has_value());
  Vector y(4);
  y << 1, 2, 3, 4;
  EXPECT_FALSE(monic_decompose(y, {2, 2}).has_value());
  EXPECT_THROW(monic_decompose(Vector::Zero(4), {2, 2}), zero_vector_error);
  EXPECT_THROW(monic_decompose(y, {2, 3}), dimension_error);
}

TEST(MonicDecompose, RandomProductsRoundTrip) {
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 200; ++trial) {
    const Index r = random_int(rng, 1, 4);
    std::vector<Index> dims;
    std::vector<Vector> fs;
    for (Index k = 0; k < r; ++k) {
      dims.push_back(random_int(rng, 1, 3));
      Vector f = random_vector(rng, dims.back());
      if (dims.back() > 1 && random_int(rng, 0, 2) == 0) f(0) = 0.0;
      fs.push_back(f);
    }
    const Vector x = kron_all(std::span<const Vector>(fs));
    const auto d = monic_decompose(x, dims);
    ASSERT_TRUE(d.has_value());
    EXPECT_LE(relative_error(x, d->compose()), 1e-12);
    for (Index k = 0; k < r; ++k) {
      const Vector want = monicize(fs[k]).monic;
      EXPECT_LE(max_abs(d->components[k] - want), 1e-10);
    }
  }
}

TEST(MonicDecompose, DiagonalPower) {
  Vector z(3);
  z << 0, 1, -0.5;
  const auto d = monic_decompose(stp_power(z, 3), {3, 3, 3});
  ASSERT_TRUE(d.has_value());
  EXPECT_TRUE(is_diagonal(*d));
  EXPECT_EQ(d->index, diagonal_index(2, 3, 3));
}
