#ifndef RIPD_LINEAR_BLOCK_OPERATOR_HPP
#define RIPD_LINEAR_BLOCK_OPERATOR_HPP

#include <Eigen/Core>
#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ripd/block_vector.hpp"
#include "ripd/errors.hpp"
#include "ripd/rng.hpp"

namespace ripd {

struct BlockEntry {
  Index row = 0;  // dual block index k
  Index col = 0;  // primal block index j
  Eigen::MatrixXd matrix;
};

/// Block-sparse linear coupling L between a primal direct sum (columns) and a
/// dual direct sum (rows). Only stored blocks contribute; every row and every
/// column must be covered by at least one nonzero block.
class LinearBlockOperator {
 public:
  LinearBlockOperator(BlockLayout row_layout, BlockLayout col_layout,
                      std::vector<BlockEntry> entries)
      : row_layout_(std::move(row_layout)),
        col_layout_(std::move(col_layout)),
        grid_(static_cast<std::size_t>(row_layout_.blocks() * col_layout_.blocks())),
        row_support_(static_cast<std::size_t>(row_layout_.blocks())),
        col_support_(static_cast<std::size_t>(col_layout_.blocks())) {
    for (auto& e : entries) {
      if (e.row < 0 || e.row >= row_layout_.blocks() || e.col < 0 || e.col >= col_layout_.blocks())
        throw InvalidInputError("LinearBlockOperator: block index out of range");
      if (e.matrix.rows() != row_layout_.dim(e.row) || e.matrix.cols() != col_layout_.dim(e.col))
        throw InvalidInputError("LinearBlockOperator: block (" + std::to_string(e.row) + "," +
                                std::to_string(e.col) + ") has wrong shape");
      if (e.matrix.norm() == 0.0)
        throw InvalidInputError("LinearBlockOperator: stored blocks must be nonzero");
      auto& slot = grid_[index(e.row, e.col)];
      if (slot.has_value())
        throw InvalidInputError("LinearBlockOperator: duplicate block entry");
      slot = std::move(e.matrix);
      row_support_[static_cast<std::size_t>(e.row)].push_back(e.col);
      col_support_[static_cast<std::size_t>(e.col)].push_back(e.row);
    }
    for (Index k = 0; k < row_layout_.blocks(); ++k) {
      auto& s = row_support_[static_cast<std::size_t>(k)];
      if (s.empty())
        throw InvalidInputError("LinearBlockOperator: dual row " + std::to_string(k) +
                                " has no nonzero blocks; every dual block must couple to some "
                                "primal block");
      std::sort(s.begin(), s.end());
    }
    for (Index j = 0; j < col_layout_.blocks(); ++j) {
      auto& s = col_support_[static_cast<std::size_t>(j)];
      if (s.empty())
        throw InvalidInputError("LinearBlockOperator: primal column " + std::to_string(j) +
                                " has no nonzero blocks; every primal block must couple to some "
                                "dual block");
      std::sort(s.begin(), s.end());
    }
  }

  /// Block-diagonal identity; row and column layouts coincide.
  static LinearBlockOperator identity(const BlockLayout& layout) {
    std::vector<BlockEntry> entries;
    for (Index i = 0; i < layout.blocks(); ++i)
      entries.push_back({i, i, Eigen::MatrixXd::Identity(layout.dim(i), layout.dim(i))});
    return LinearBlockOperator(layout, layout, std::move(entries));
  }

  const BlockLayout& row_layout() const { return row_layout_; }
  const BlockLayout& col_layout() const { return col_layout_; }

  bool has_block(Index k, Index j) const { return grid_[index(k, j)].has_value(); }
  const Eigen::MatrixXd& block(Index k, Index j) const { return *grid_[index(k, j)]; }

  /// Columns j with a block in row k.
  const std::vector<Index>& row_support(Index k) const {
    return row_support_[static_cast<std::size_t>(k)];
  }
  /// Rows k with a block in column j.
  const std::vector<Index>& col_support(Index j) const {
    return col_support_[static_cast<std::size_t>(j)];
  }

  BlockVector apply(const BlockVector& x) const {
    if (x.layout() != col_layout_)
      throw InvalidInputError("LinearBlockOperator::apply: input layout mismatch");
    BlockVector out = BlockVector::zero(row_layout_);
    for (Index k = 0; k < row_layout_.blocks(); ++k)
      for (Index j : row_support(k)) out.block(k) += block(k, j) * x.block(j);
    return out;
  }

  BlockVector apply_adjoint(const BlockVector& y) const {
    if (y.layout() != row_layout_)
      throw InvalidInputError("LinearBlockOperator::apply_adjoint: input layout mismatch");
    BlockVector out = BlockVector::zero(col_layout_);
    for (Index j = 0; j < col_layout_.blocks(); ++j)
      for (Index k : col_support(j)) out.block(j) += block(k, j).transpose() * y.block(k);
    return out;
  }

  /// Assembled dense matrix; test and oracle use only.
  Eigen::MatrixXd dense() const {
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(row_layout_.total(), col_layout_.total());
    for (Index k = 0; k < row_layout_.blocks(); ++k)
      for (Index j : row_support(k))
        M.block(row_layout_.offset(k), col_layout_.offset(j), row_layout_.dim(k),
                col_layout_.dim(j)) = block(k, j);
    return M;
  }

 private:
  std::size_t index(Index k, Index j) const {
    return static_cast<std::size_t>(k * col_layout_.blocks() + j);
  }

  BlockLayout row_layout_, col_layout_;
  std::vector<std::optional<Eigen::MatrixXd>> grid_;
  std::vector<std::vector<Index>> row_support_;
  std::vector<std::vector<Index>> col_support_;
};

/// Positive diagonal operator over one block layout (a block-wise step map).
class DiagonalOperator {
 public:
  DiagonalOperator() = default;

  DiagonalOperator(BlockLayout layout, Eigen::VectorXd diag)
      : layout_(std::move(layout)), diag_(std::move(diag)) {
    if (diag_.size() != layout_.total())
      throw InvalidInputError("DiagonalOperator: diagonal length does not match layout");
    if (!(diag_.array() > 0.0).all())
      throw InvalidInputError("DiagonalOperator: all diagonal entries must be > 0");
  }

  static DiagonalOperator constant(const BlockLayout& layout, double value) {
    return DiagonalOperator(layout, Eigen::VectorXd::Constant(layout.total(), value));
  }

  const BlockLayout& layout() const { return layout_; }
  const Eigen::VectorXd& diag() const { return diag_; }

  auto diag_block(Index i) const { return diag_.segment(layout_.offset(i), layout_.dim(i)); }
  double max_block_entry(Index i) const { return diag_block(i).maxCoeff(); }

  Eigen::VectorXd apply_block(Index i, const Eigen::VectorXd& v) const {
    return diag_block(i).cwiseProduct(v);
  }

  BlockVector apply(const BlockVector& x) const {
    if (x.layout() != layout_) throw InvalidInputError("DiagonalOperator::apply: layout mismatch");
    return BlockVector(layout_, diag_.cwiseProduct(x.data()));
  }

  BlockVector apply_sqrt(const BlockVector& x) const {
    if (x.layout() != layout_)
      throw InvalidInputError("DiagonalOperator::apply_sqrt: layout mismatch");
    return BlockVector(layout_, diag_.cwiseSqrt().cwiseProduct(x.data()));
  }

 private:
  BlockLayout layout_;
  Eigen::VectorXd diag_;
};

/// Primal/dual step-size pair (F over the primal blocks, R over the dual ones).
struct Preconditioner {
  DiagonalOperator F;
  DiagonalOperator R;
};

/// Largest singular value of R^{1/2} L F^{1/2}, by power iteration on the
/// normal operator. Deterministic start; the estimate is nondecreasing in the
/// iteration count and converges to the true norm for generic starts.
inline double operator_norm_estimate(const LinearBlockOperator& L, const DiagonalOperator& F,
                                     const DiagonalOperator& R, long iters = 5000,
                                     double tol = 1e-10) {
  if (F.layout() != L.col_layout() || R.layout() != L.row_layout())
    throw InvalidInputError("operator_norm_estimate: preconditioner layouts do not match L");
  if (iters < 1) throw InvalidInputError("operator_norm_estimate: iters must be >= 1");

  const Eigen::VectorXd fs = F.diag().cwiseSqrt();
  const Eigen::VectorXd rs = R.diag().cwiseSqrt();

  Rng rng(0x9e3779b97f4a7c15ull);
  BlockVector v = BlockVector::zero(L.col_layout());
  for (Index i = 0; i < v.data().size(); ++i) v.data()[i] = rng.uniform(-1.0, 1.0);
  double vn = norm(v);
  if (vn == 0.0) return 0.0;
  v.data() /= vn;

  double est = 0.0;
  for (long it = 0; it < iters; ++it) {
    BlockVector u = L.apply(BlockVector(L.col_layout(), fs.cwiseProduct(v.data())));
    u.data() = rs.cwiseProduct(u.data());
    const double sigma = norm(u);  // ||A v|| with ||v|| = 1
    u.data() = rs.cwiseProduct(u.data());
    BlockVector back = L.apply_adjoint(u);
    back.data() = fs.cwiseProduct(back.data());
    const double bn = norm(back);
    if (bn == 0.0) return sigma;
    v = BlockVector(L.col_layout(), back.data() / bn);
    if (it > 0 && std::abs(sigma - est) <= tol * std::max(sigma, 1e-300)) return sigma;
    est = sigma;
  }
  return est;
}

}  // namespace ripd

#endif  // RIPD_LINEAR_BLOCK_OPERATOR_HPP
