#ifndef RIPD_PROBLEMS_HPP
#define RIPD_PROBLEMS_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "ripd/block_vector.hpp"
#include "ripd/errors.hpp"
#include "ripd/gradient.hpp"
#include "ripd/linear_block_operator.hpp"
#include "ripd/prox.hpp"
#include "ripd/resolvent.hpp"

namespace ripd {

/// Primal slot of the monotone inclusion: maximally monotone A_j (via its
/// resolvent) plus a cocoercive forward term C_j.
struct PrimalSlot {
  MonotoneResolvent A = MonotoneResolvent::zero();
  SmoothGradient C = SmoothGradient::zero();
};

/// Dual slot: the resolvent of B_k^{-1} and the single-valued Lipschitz map
/// standing in for D_k^{-1}. Dinv's cocoercivity field carries the constant
/// tau_k (a 1/tau_k-Lipschitz map); the zero map means tau_k = +inf.
struct DualSlot {
  MonotoneResolvent Binv = MonotoneResolvent::zero();
  SmoothGradient Dinv = SmoothGradient::zero();
};

/// Coupled monotone inclusion over p primal and q dual blocks.
class MonotoneBlockProblem {
 public:
  MonotoneBlockProblem(std::vector<PrimalSlot> primal, std::vector<DualSlot> dual,
                       LinearBlockOperator L)
      : primal_(std::move(primal)), dual_(std::move(dual)), L_(std::move(L)) {
    if (static_cast<Index>(primal_.size()) != L_.col_layout().blocks())
      throw InvalidInputError("MonotoneBlockProblem: primal slot count does not match L columns");
    if (static_cast<Index>(dual_.size()) != L_.row_layout().blocks())
      throw InvalidInputError("MonotoneBlockProblem: dual slot count does not match L rows");
  }

  Index p() const { return static_cast<Index>(primal_.size()); }
  Index q() const { return static_cast<Index>(dual_.size()); }

  const PrimalSlot& primal(Index j) const { return primal_[static_cast<std::size_t>(j)]; }
  const DualSlot& dual(Index k) const { return dual_[static_cast<std::size_t>(k)]; }
  const LinearBlockOperator& L() const { return L_; }

  const BlockLayout& primal_layout() const { return L_.col_layout(); }
  const BlockLayout& dual_layout() const { return L_.row_layout(); }

 private:
  std::vector<PrimalSlot> primal_;
  std::vector<DualSlot> dual_;
  LinearBlockOperator L_;
};

/// Primal slot of the composite minimization: nonsmooth f_j (via prox) plus
/// smooth h_j.
struct CompositePrimalSlot {
  ProxOperator f = make_prox_zero();
  SmoothGradient h = SmoothGradient::zero();
};

/// Dual slot: g_k (via prox; its conjugate prox is derived) and the gradient
/// of l_k^*; the zero map encodes l_k as the indicator of the origin, in
/// which case g □ l = g.
struct CompositeDualSlot {
  ProxOperator g = make_prox_zero();
  SmoothGradient lstar = SmoothGradient::zero();
};

/// Structured convex program over p primal and q dual blocks. Also exposes a
/// monotone view (subdifferentials and conjugates) so both solver entry
/// points share one iteration core.
class CompositeProblem {
 public:
  CompositeProblem(std::vector<CompositePrimalSlot> primal, std::vector<CompositeDualSlot> dual,
                   LinearBlockOperator L)
      : primal_(std::move(primal)), dual_(std::move(dual)), L_(std::move(L)) {
    if (static_cast<Index>(primal_.size()) != L_.col_layout().blocks())
      throw InvalidInputError("CompositeProblem: primal slot count does not match L columns");
    if (static_cast<Index>(dual_.size()) != L_.row_layout().blocks())
      throw InvalidInputError("CompositeProblem: dual slot count does not match L rows");

    std::vector<PrimalSlot> mp;
    mp.reserve(primal_.size());
    for (const auto& s : primal_) mp.push_back({MonotoneResolvent::from_prox(s.f), s.h});
    std::vector<DualSlot> md;
    md.reserve(dual_.size());
    for (const auto& s : dual_) md.push_back({MonotoneResolvent::conjugate_of(s.g), s.lstar});
    monotone_ = std::make_shared<MonotoneBlockProblem>(std::move(mp), std::move(md), L_);
  }

  Index p() const { return static_cast<Index>(primal_.size()); }
  Index q() const { return static_cast<Index>(dual_.size()); }

  const CompositePrimalSlot& primal(Index j) const { return primal_[static_cast<std::size_t>(j)]; }
  const CompositeDualSlot& dual(Index k) const { return dual_[static_cast<std::size_t>(k)]; }
  const LinearBlockOperator& L() const { return L_; }

  const BlockLayout& primal_layout() const { return L_.col_layout(); }
  const BlockLayout& dual_layout() const { return L_.row_layout(); }

  const MonotoneBlockProblem& monotone_view() const { return *monotone_; }

  bool all_f_zero() const {
    for (const auto& s : primal_)
      if (s.f.name() != "zero") return false;
    return true;
  }

  /// Objective value is available when every l_k is the indicator of the
  /// origin, so the infimal convolutions reduce to g_k.
  bool objective_available() const {
    for (const auto& s : dual_)
      if (!s.lstar.is_zero()) return false;
    return true;
  }

  double objective(const BlockVector& x) const {
    if (!objective_available())
      throw UnsupportedError("CompositeProblem::objective: only l = indicator{0} is supported");
    if (x.layout() != primal_layout())
      throw InvalidInputError("CompositeProblem::objective: layout mismatch");
    double v = 0.0;
    for (Index j = 0; j < p(); ++j) {
      v += primal_[static_cast<std::size_t>(j)].f.value(x.block(j));
      v += primal_[static_cast<std::size_t>(j)].h.value(x.block(j));
    }
    BlockVector lx = L_.apply(x);
    for (Index k = 0; k < q(); ++k) v += dual_[static_cast<std::size_t>(k)].g.value(lx.block(k));
    return v;
  }

 private:
  std::vector<CompositePrimalSlot> primal_;
  std::vector<CompositeDualSlot> dual_;
  LinearBlockOperator L_;
  std::shared_ptr<MonotoneBlockProblem> monotone_;
};

/// Joint primal/dual iterate pair plus run instrumentation.
struct PDState {
  BlockVector x_prev, x_curr;  // primal
  BlockVector y_prev, y_curr;  // dual
  long iteration = 1;

  long evals_prox = 0;
  long evals_grad = 0;
  long evals_linop = 0;  // per-block multiplications by L or L*
  std::uint64_t last_mask = 0;
  int last_active_primal = 0;
  int last_active_dual = 0;
  std::vector<double> step_norm_history;  // joint ||(x,y)_{n+1} - (x,y)_n||

  static PDState start(BlockVector x0, BlockVector y0) {
    PDState s;
    s.x_prev = x0;
    s.x_curr = std::move(x0);
    s.y_prev = y0;
    s.y_curr = std::move(y0);
    return s;
  }
};

}  // namespace ripd

#endif  // RIPD_PROBLEMS_HPP
