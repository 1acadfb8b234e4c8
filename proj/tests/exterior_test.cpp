#include "conelab/exterior.hpp"

#include <gtest/gtest.h>

#include "oracles.hpp"

namespace conelab {
namespace {

Matrix Diag(std::initializer_list<double> v) {
  Vector d(static_cast<Eigen::Index>(v.size()));
  int i = 0;
  for (double x : v) d(i++) = x;
  return d.asDiagonal();
}

TEST(MultiIndexTest, Validation) {
  EXPECT_NO_THROW(MultiIndex({1, 3}, 4));
  EXPECT_THROW(MultiIndex({3, 1}, 4), ArgumentError);
  EXPECT_THROW(MultiIndex({1, 1}, 4), ArgumentError);
  EXPECT_THROW(MultiIndex({0, 2}, 4), ArgumentError);
  EXPECT_THROW(MultiIndex({2, 5}, 4), ArgumentError);
  EXPECT_EQ(MultiIndex({1, 3}, 4).to_string(), "{1,3}");
}

TEST(MultiIndexTableTest, D4K2IsLexicographic) {
  const auto t = multi_index_table(4, 2);
  ASSERT_EQ(t->size(), 6);
  const std::vector<std::vector<int>> expected{{1, 2}, {1, 3}, {1, 4}, {2, 3}, {2, 4}, {3, 4}};
  for (int i = 0; i < 6; ++i) {
    EXPECT_EQ((*t)[i].entries(), expected[i]);
    EXPECT_EQ(t->position((*t)[i]), i);
  }
}

TEST(MultiIndexTableTest, Extremes) {
  EXPECT_EQ(multi_index_table(4, 1)->size(), 4);
  EXPECT_EQ((*multi_index_table(4, 1))[2].entries(), std::vector<int>{3});
  const auto full = multi_index_table(4, 4);
  ASSERT_EQ(full->size(), 1);
  EXPECT_EQ(full->list()[0].entries(), (std::vector<int>{1, 2, 3, 4}));
}

TEST(MultiIndexTableTest, Errors) {
  EXPECT_THROW(multi_index_table(4, 0), ArgumentError);
  EXPECT_THROW(multi_index_table(4, 5), ArgumentError);
  EXPECT_THROW(multi_index_table(1, 1), ArgumentError);
  EXPECT_THROW(multi_index_table(4, 2)->position(MultiIndex({1, 2, 3}, 4)), ArgumentError);
}

TEST(MultiIndexTableTest, SizesAreBinomial) {
  for (int d = 2; d <= 8; ++d)
    for (int k = 1; k <= d; ++k) EXPECT_EQ(multi_index_table(d, k)->size(), binomial(d, k));
  EXPECT_EQ(binomial(8, 4), 70);
}

TEST(PluckerTest, CoordinateWedge) {
  Matrix P = Matrix::Zero(4, 2);
  P(0, 0) = 1;
  P(1, 1) = 1;
  const auto v = plucker(P);
  Vector expected = Vector::Zero(6);
  expected(0) = 1;
  EXPECT_EQ(v.coords, expected);

  Matrix Q(4, 2);
  Q.col(0) = P.col(1);
  Q.col(1) = P.col(0);
  EXPECT_EQ(plucker(Q).coords, -expected);
}

TEST(PluckerTest, EigenvectorPairMatchesMinors) {
  Matrix P(4, 2);
  P.col(0) << 1, 2, 2, 1;
  P.col(1) << -2, -1, 1, 2;
  Vector expected(6);
  expected << 3, 5, 4, 4, 5, 3;
  EXPECT_LT((plucker(P).coords - expected).norm(), 1e-12);
  EXPECT_LT((plucker(P).coords - oracle::plucker(P)).norm(), 1e-12);
}

TEST(PluckerTest, RankDeficientThrows) {
  Matrix P(3, 2);
  P << 1, 2, 2, 4, 3, 6;
  EXPECT_THROW(plucker(P), DegenerateInputError);
}

TEST(PluckerTest, MatchesOracleOnRandomBases) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const int d = 2 + trial % 4;
    const int k = 1 + trial % (d - 1);
    const Matrix P = oracle::random_matrix(rng, d, k);
    EXPECT_LT((plucker(P).coords - oracle::plucker(P)).norm(), 1e-10);
  }
}

TEST(CompoundTest, Examples) {
  EXPECT_EQ(compound_matrix(Matrix::Identity(4, 4), 2).entries, Matrix::Identity(6, 6));
  const Matrix g = Diag({2, 3, 5, 7});
  EXPECT_EQ(compound_matrix(g, 1).entries, g);
  EXPECT_EQ(compound_matrix(g, 2).entries, Diag({6, 10, 14, 15, 21, 35}));
  EXPECT_DOUBLE_EQ(compound_matrix(g, 4).entries(0, 0), 210);
}

TEST(CompoundTest, NonSquareThrows) {
  EXPECT_THROW(compound_matrix(Matrix::Zero(3, 2), 1), ArgumentError);
  EXPECT_THROW(additive_compound(Matrix::Zero(3, 2), 1), ArgumentError);
}

TEST(CompoundTest, MatchesLeibnizOracle) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 60; ++trial) {
    const int d = 2 + trial % 4;
    const int k = 1 + trial % std::min(d, 3);
    const Matrix g = oracle::random_matrix(rng, d, d);
    EXPECT_LT(oracle::rel_err(compound_matrix(g, k).entries, oracle::compound(g, k)), 1e-12);
  }
}

TEST(AdditiveCompoundTest, DiagonalExample) {
  const Matrix X = Diag({4, 1, -2, -3});
  EXPECT_EQ(additive_compound(X, 2).entries, Diag({5, 2, 1, -1, -2, -5}));
}

TEST(AdditiveCompoundTest, ZeroAndTop) {
  EXPECT_EQ(additive_compound(Matrix::Zero(4, 4), 2).entries, Matrix::Zero(6, 6));
  std::mt19937_64 rng(3);
  const Matrix X = oracle::random_matrix(rng, 4, 4);
  EXPECT_NEAR(additive_compound(X, 4).entries(0, 0), X.trace(), 1e-14);
  EXPECT_EQ(additive_compound(X, 1).entries, X);
}

TEST(AdditiveCompoundTest, MatchesCentralDifference) {
  std::mt19937_64 rng(5);
  const double h = 1e-5;
  for (int trial = 0; trial < 20; ++trial) {
    const int d = 3 + trial % 3;
    const int k = 1 + trial % 3;
    const Matrix X = oracle::random_matrix(rng, d, d);
    const Matrix fd = (oracle::compound(oracle::expm(h * X), k) -
                       oracle::compound(oracle::expm(-h * X), k)) /
                      (2 * h);
    EXPECT_LT(oracle::rel_err(additive_compound(X, k).entries, fd), 1e-8);
  }
}

class CompoundPropertyTest : public ::testing::TestWithParam<int> {};

TEST_P(CompoundPropertyTest, Multiplicativity) {
  std::mt19937_64 rng(100 + GetParam());
  for (int trial = 0; trial < 30; ++trial) {
    const int d = 2 + trial % 4;
    const int k = 1 + trial % std::min(d, 3);
    const Matrix g = oracle::random_matrix(rng, d, d);
    const Matrix h = oracle::random_matrix(rng, d, d);
    const Matrix lhs = compound_matrix(g * h, k).entries;
    const Matrix rhs = compound_matrix(g, k).entries * compound_matrix(h, k).entries;
    EXPECT_LT(oracle::rel_err(lhs, rhs), 1e-9);
  }
}

TEST_P(CompoundPropertyTest, PluckerEquivariance) {
  std::mt19937_64 rng(200 + GetParam());
  for (int trial = 0; trial < 30; ++trial) {
    const int d = 2 + trial % 4;
    const int k = 1 + trial % (d - 1);
    const Matrix g = oracle::random_matrix(rng, d, d);
    const Matrix P = oracle::random_matrix(rng, d, k);
    const Vector lhs = plucker(g * P).coords;
    const Vector rhs = compound_matrix(g, k).entries * plucker(P).coords;
    EXPECT_LT((lhs - rhs).norm() / std::max(1.0, rhs.norm()), 1e-9);
  }
}

TEST_P(CompoundPropertyTest, SylvesterFranke) {
  std::mt19937_64 rng(300 + GetParam());
  for (int trial = 0; trial < 30; ++trial) {
    const int d = 2 + trial % 4;
    const int k = 1 + trial % std::min(d, 3);
    const Matrix g = oracle::random_matrix(rng, d, d);
    const double lhs = compound_matrix(g, k).entries.determinant();
    const double rhs = std::pow(oracle::leibniz_det(g), binomial(d - 1, k - 1));
    EXPECT_LT(std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs)), 1e-8);
  }
}

TEST_P(CompoundPropertyTest, ExpCommutesWithAdditiveCompound) {
  std::mt19937_64 rng(400 + GetParam());
  for (int trial = 0; trial < 30; ++trial) {
    const int d = 2 + trial % 4;
    const int k = 1 + trial % std::min(d, 3);
    const Matrix X = oracle::random_matrix(rng, d, d, 0.7);
    const Matrix lhs = compound_matrix(oracle::expm(X), k).entries;
    const Matrix rhs = oracle::expm(additive_compound(X, k).entries);
    EXPECT_LT(oracle::rel_err(lhs, rhs), 1e-8);
  }
}

TEST_P(CompoundPropertyTest, ColumnActionIsPluckerOfImage) {
  std::mt19937_64 rng(500 + GetParam());
  const int d = 4, k = 2;
  const auto table = multi_index_table(d, k);
  const Matrix g = oracle::random_matrix(rng, d, d);
  const Matrix C = compound_matrix(g, k).entries;
  for (int j = 0; j < table->size(); ++j) {
    Matrix P = Matrix::Zero(d, k);
    for (int c = 0; c < k; ++c) P(((*table)[j])[c] - 1, c) = 1;
    EXPECT_LT((C.col(j) - plucker(g * P).coords).norm(), 1e-12);
  }
}

INSTANTIATE_TEST_SUITE_P(Seeds, CompoundPropertyTest, ::testing::Range(0, 4));

}  // namespace
}  // namespace conelab
