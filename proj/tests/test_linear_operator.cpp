#include <gtest/gtest.h>

#include <Eigen/SVD>

#include "ripd/linear_block_operator.hpp"
#include "ripd/rng.hpp"

using namespace ripd;

namespace {

Eigen::MatrixXd random_matrix(Rng& rng, Index rows, Index cols) {
  Eigen::MatrixXd M(rows, cols);
  for (Index r = 0; r < rows; ++r)
    for (Index c = 0; c < cols; ++c) M(r, c) = rng.uniform(-1.0, 1.0);
  return M;
}

}  // namespace

TEST(LinearBlockOperator, IdentitySingleBlock) {
  auto L = LinearBlockOperator::identity(BlockLayout::single(1));
  BlockVector x(BlockLayout::single(1), Eigen::VectorXd::Constant(1, 5.0));
  EXPECT_DOUBLE_EQ(L.apply(x).data()[0], 5.0);
}

TEST(LinearBlockOperator, RowSumSkipsAbsentBlocks) {
  // 1x2 grid [I, absent] over layout (2,2): x=(1,2|3,4) -> (1,2)
  std::vector<BlockEntry> entries;
  entries.push_back({0, 0, Eigen::MatrixXd::Identity(2, 2)});
  // column 1 must still be covered somewhere; a second row covers it
  entries.push_back({1, 1, Eigen::MatrixXd::Identity(2, 2)});
  LinearBlockOperator L(BlockLayout({std::vector<Index>{2, 2}}),
                        BlockLayout({std::vector<Index>{2, 2}}), std::move(entries));
  Eigen::VectorXd xv(4);
  xv << 1, 2, 3, 4;
  BlockVector x(BlockLayout({std::vector<Index>{2, 2}}), xv);
  BlockVector y = L.apply(x);
  EXPECT_DOUBLE_EQ(y.block(0)[0], 1.0);
  EXPECT_DOUBLE_EQ(y.block(0)[1], 2.0);
  EXPECT_DOUBLE_EQ(y.block(1)[0], 3.0);
  EXPECT_DOUBLE_EQ(y.block(1)[1], 4.0);
}

TEST(LinearBlockOperator, EmptyRowRejected) {
  std::vector<BlockEntry> entries;
  entries.push_back({0, 0, Eigen::MatrixXd::Identity(2, 2)});
  EXPECT_THROW(LinearBlockOperator(BlockLayout({std::vector<Index>{2, 2}}),
                                   BlockLayout::single(2), std::move(entries)),
               InvalidInputError);
}

TEST(LinearBlockOperator, EmptyColumnRejected) {
  std::vector<BlockEntry> entries;
  entries.push_back({0, 0, Eigen::MatrixXd::Identity(2, 2)});
  EXPECT_THROW(LinearBlockOperator(BlockLayout::single(2),
                                   BlockLayout({std::vector<Index>{2, 2}}), std::move(entries)),
               InvalidInputError);
}

TEST(LinearBlockOperator, WrongShapeRejected) {
  std::vector<BlockEntry> entries;
  entries.push_back({0, 0, Eigen::MatrixXd::Identity(3, 2)});
  EXPECT_THROW(
      LinearBlockOperator(BlockLayout::single(2), BlockLayout::single(2), std::move(entries)),
      InvalidInputError);
}

TEST(LinearBlockOperator, ZeroBlockRejected) {
  std::vector<BlockEntry> entries;
  entries.push_back({0, 0, Eigen::MatrixXd::Zero(2, 2)});
  EXPECT_THROW(
      LinearBlockOperator(BlockLayout::single(2), BlockLayout::single(2), std::move(entries)),
      InvalidInputError);
}

TEST(LinearBlockOperator, AdjointIdentityRandomized) {
  Rng rng(23);
  BlockLayout rows({std::vector<Index>{2, 3, 1}});
  BlockLayout cols({std::vector<Index>{2, 2}});
  for (int rep = 0; rep < 100; ++rep) {
    std::vector<BlockEntry> entries;
    entries.push_back({0, 0, random_matrix(rng, 2, 2)});
    entries.push_back({1, 1, random_matrix(rng, 3, 2)});
    entries.push_back({2, 0, random_matrix(rng, 1, 2)});
    entries.push_back({1, 0, random_matrix(rng, 3, 2)});
    LinearBlockOperator L(rows, cols, std::move(entries));

    Eigen::VectorXd xv(cols.total()), yv(rows.total());
    for (Index i = 0; i < xv.size(); ++i) xv[i] = rng.uniform(-1.0, 1.0);
    for (Index i = 0; i < yv.size(); ++i) yv[i] = rng.uniform(-1.0, 1.0);
    BlockVector x(cols, xv), y(rows, yv);

    const double lhs = inner(L.apply(x), y);
    const double rhs = inner(x, L.apply_adjoint(y));
    EXPECT_NEAR(lhs, rhs, 1e-12 * (1.0 + std::abs(lhs)));

    // dense assembly agrees with block application
    const Eigen::MatrixXd D = L.dense();
    EXPECT_NEAR((L.apply(x).data() - D * xv).norm(), 0.0, 1e-13);
    EXPECT_NEAR((L.apply_adjoint(y).data() - D.transpose() * yv).norm(), 0.0, 1e-13);
  }
}

TEST(OperatorNormEstimate, IdentityIsOne) {
  auto L = LinearBlockOperator::identity(BlockLayout::single(4));
  auto I = DiagonalOperator::constant(BlockLayout::single(4), 1.0);
  EXPECT_NEAR(operator_norm_estimate(L, I, I), 1.0, 1e-9);
}

TEST(OperatorNormEstimate, ScalarClosedForm) {
  // L = (3), F = (1/4), R = (1): sqrt(R) * L * sqrt(F) = 1 * 3 * 0.5 = 1.5
  std::vector<BlockEntry> entries;
  entries.push_back({0, 0, Eigen::MatrixXd::Constant(1, 1, 3.0)});
  LinearBlockOperator L(BlockLayout::single(1), BlockLayout::single(1), std::move(entries));
  auto F = DiagonalOperator::constant(BlockLayout::single(1), 0.25);
  auto R = DiagonalOperator::constant(BlockLayout::single(1), 1.0);
  EXPECT_NEAR(operator_norm_estimate(L, F, R), 1.5, 1e-12);
}

TEST(OperatorNormEstimate, MatchesDenseSvd) {
  Rng rng(41);
  for (int rep = 0; rep < 10; ++rep) {
    std::vector<BlockEntry> entries;
    entries.push_back({0, 0, random_matrix(rng, 5, 4)});
    LinearBlockOperator L(BlockLayout::single(5), BlockLayout::single(4), std::move(entries));
    auto F = DiagonalOperator::constant(BlockLayout::single(4), 1.0);
    auto R = DiagonalOperator::constant(BlockLayout::single(5), 1.0);
    const double est = operator_norm_estimate(L, F, R);
    const double svd = Eigen::JacobiSVD<Eigen::MatrixXd>(L.dense()).singularValues()[0];
    EXPECT_NEAR(est, svd, 1e-6 * (1.0 + svd));
  }
}

TEST(OperatorNormEstimate, NondecreasingInIters) {
  Rng rng(7);
  std::vector<BlockEntry> entries;
  entries.push_back({0, 0, random_matrix(rng, 6, 6)});
  LinearBlockOperator L(BlockLayout::single(6), BlockLayout::single(6), std::move(entries));
  auto I = DiagonalOperator::constant(BlockLayout::single(6), 1.0);
  double prev = 0.0;
  for (long iters : {1L, 2L, 4L, 8L, 16L, 64L}) {
    const double est = operator_norm_estimate(L, I, I, iters, 0.0);
    EXPECT_GE(est, prev - 1e-13);
    prev = est;
  }
}

TEST(DiagonalOperator, RejectsNonpositiveEntries) {
  Eigen::VectorXd d(2);
  d << 1.0, 0.0;
  EXPECT_THROW(DiagonalOperator(BlockLayout::single(2), d), InvalidInputError);
}
