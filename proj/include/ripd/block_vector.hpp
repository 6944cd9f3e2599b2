#ifndef RIPD_BLOCK_VECTOR_HPP
#define RIPD_BLOCK_VECTOR_HPP

#include <Eigen/Core>
#include <cmath>
#include <numeric>
#include <sstream>
#include <utility>
#include <vector>

#include "ripd/errors.hpp"

namespace ripd {

using Index = Eigen::Index;

/// Partition of a flat coordinate vector into m contiguous blocks.
class BlockLayout {
 public:
  BlockLayout() = default;

  explicit BlockLayout(std::vector<Index> dims) : dims_(std::move(dims)) {
    if (dims_.empty()) throw InvalidInputError("BlockLayout: need at least one block");
    offsets_.reserve(dims_.size());
    total_ = 0;
    for (Index d : dims_) {
      if (d < 1) throw InvalidInputError("BlockLayout: every block dimension must be >= 1");
      offsets_.push_back(total_);
      total_ += d;
    }
  }

  static BlockLayout single(Index dim) { return BlockLayout(std::vector<Index>{dim}); }

  Index blocks() const { return static_cast<Index>(dims_.size()); }
  Index dim(Index i) const { return dims_[static_cast<std::size_t>(i)]; }
  Index offset(Index i) const { return offsets_[static_cast<std::size_t>(i)]; }
  Index total() const { return total_; }
  const std::vector<Index>& dims() const { return dims_; }

  bool operator==(const BlockLayout& other) const { return dims_ == other.dims_; }
  bool operator!=(const BlockLayout& other) const { return !(*this == other); }

 private:
  std::vector<Index> dims_;
  std::vector<Index> offsets_;
  Index total_ = 0;
};

/// Element of the direct sum H_1 (+) ... (+) H_m, stored flat.
class BlockVector {
 public:
  BlockVector() = default;

  BlockVector(BlockLayout layout, Eigen::VectorXd data)
      : layout_(std::move(layout)), data_(std::move(data)) {
    if (data_.size() != layout_.total())
      throw InvalidInputError("BlockVector: data length does not match layout");
  }

  static BlockVector zero(const BlockLayout& layout) {
    return BlockVector(layout, Eigen::VectorXd::Zero(layout.total()));
  }

  const BlockLayout& layout() const { return layout_; }
  Index blocks() const { return layout_.blocks(); }

  Eigen::VectorXd& data() { return data_; }
  const Eigen::VectorXd& data() const { return data_; }

  auto block(Index i) { return data_.segment(layout_.offset(i), layout_.dim(i)); }
  auto block(Index i) const { return data_.segment(layout_.offset(i), layout_.dim(i)); }

  bool all_finite() const { return data_.allFinite(); }

 private:
  BlockLayout layout_;
  Eigen::VectorXd data_;
};

inline void require_same_layout(const BlockVector& x, const BlockVector& y, const char* where) {
  if (x.layout() != y.layout())
    throw InvalidInputError(std::string(where) + ": block layouts differ");
}

inline BlockVector operator+(const BlockVector& x, const BlockVector& y) {
  require_same_layout(x, y, "operator+");
  return BlockVector(x.layout(), x.data() + y.data());
}

inline BlockVector operator-(const BlockVector& x, const BlockVector& y) {
  require_same_layout(x, y, "operator-");
  return BlockVector(x.layout(), x.data() - y.data());
}

inline BlockVector operator*(double a, const BlockVector& x) {
  return BlockVector(x.layout(), a * x.data());
}

/// a*x + y with a layout check.
inline BlockVector axpy(double a, const BlockVector& x, const BlockVector& y) {
  require_same_layout(x, y, "axpy");
  return BlockVector(x.layout(), a * x.data() + y.data());
}

inline double inner(const BlockVector& x, const BlockVector& y) {
  require_same_layout(x, y, "inner");
  return x.data().dot(y.data());
}

inline double norm(const BlockVector& x) { return x.data().norm(); }
inline double norm_sq(const BlockVector& x) { return x.data().squaredNorm(); }

/// Activation-weighted squared norm: sum_i ||x_i||^2 / p_i.
/// Reduces to the squared Euclidean norm when every p_i = 1.
inline double weighted_norm_sq(const BlockVector& x, const std::vector<double>& p) {
  if (static_cast<Index>(p.size()) != x.blocks())
    throw InvalidInputError("weighted_norm_sq: probability list length does not match block count");
  double acc = 0.0;
  for (Index i = 0; i < x.blocks(); ++i) {
    const double pi = p[static_cast<std::size_t>(i)];
    if (!(pi > 0.0))
      throw InvalidInputError("weighted_norm_sq: block probabilities must be positive");
    acc += x.block(i).squaredNorm() / pi;
  }
  return acc;
}

}  // namespace ripd

#endif  // RIPD_BLOCK_VECTOR_HPP
