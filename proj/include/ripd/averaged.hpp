#ifndef RIPD_AVERAGED_HPP
#define RIPD_AVERAGED_HPP

#include <functional>
#include <utility>

#include "ripd/block_vector.hpp"
#include "ripd/errors.hpp"

namespace ripd {

/// Averagedness constant of a composition of two averaged operators.
inline double compose_averaged(double beta1, double beta2) {
  if (!(beta1 > 0.0 && beta1 < 1.0) || !(beta2 > 0.0 && beta2 < 1.0))
    throw InvalidInputError("compose_averaged: constants must lie in (0, 1)");
  return (beta1 + beta2 - 2.0 * beta1 * beta2) / (1.0 - beta1 * beta2);
}

/// T = (1 - beta) I + beta R with R nonexpansive.
class AveragedOperator {
 public:
  using Map = std::function<BlockVector(const BlockVector&)>;

  AveragedOperator(Map op, double beta) : op_(std::move(op)), beta_(beta) {
    if (!(beta_ > 0.0 && beta_ < 1.0))
      throw InvalidInputError("AveragedOperator: constant must lie in (0, 1)");
  }

  BlockVector operator()(const BlockVector& x) const { return op_(x); }
  double beta() const { return beta_; }

 private:
  Map op_;
  double beta_;
};

/// Nonexpansive core of a beta-averaged T: V = (1 - 1/beta) I + (1/beta) T,
/// so that T = (1 - beta) I + beta V and Fix(V) = Fix(T).
inline AveragedOperator::Map averaged_relaxation_map(const AveragedOperator& T) {
  const double inv = 1.0 / T.beta();
  return [T, inv](const BlockVector& x) {
    BlockVector t = T(x);
    return BlockVector(x.layout(), (1.0 - inv) * x.data() + inv * t.data());
  };
}

}  // namespace ripd

#endif  // RIPD_AVERAGED_HPP
