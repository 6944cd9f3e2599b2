#ifndef RIPD_BLOCK_ITERATION_HPP
#define RIPD_BLOCK_ITERATION_HPP

#include <cmath>
#include <functional>
#include <utility>

#include "ripd/averaged.hpp"
#include "ripd/block_vector.hpp"
#include "ripd/errors.hpp"
#include "ripd/km.hpp"
#include "ripd/run_state.hpp"
#include "ripd/sampling.hpp"
#include "ripd/schedule.hpp"

namespace ripd {

/// Family of per-block coordinate maps T_i evaluated at a full point. Blocks
/// are evaluated lazily; only requested coordinates pay their cost.
struct BlockOperatorFamily {
  std::function<Eigen::VectorXd(Index, const BlockVector&)> block;

  BlockVector full(const BlockVector& w) const {
    BlockVector out = BlockVector::zero(w.layout());
    for (Index i = 0; i < w.blocks(); ++i) out.block(i) = block(i, w);
    return out;
  }
};

namespace detail {

// Shared core of the block steps: extrapolate every block, relax the active
// blocks toward t_i = family(i, point), freeze the rest at w_i. `point` is
// the argument handed to the blocks (w itself, or a preprocessed z).
template <typename PointFn>
inline void block_step_core(RunState& state, const InertialSchedule& s,
                            const ActivationMask& mask, const BlockOperatorFamily& family,
                            double lambda_n, const PointFn& make_point) {
  const long n = state.iteration;
  const double a = s.alpha_at(n);

  BlockVector w(state.x_curr.layout(),
                state.x_curr.data() + a * (state.x_curr.data() - state.x_prev.data()));
  if (static_cast<long>(mask.bits.size()) != w.blocks())
    throw InvalidInputError("block step: activation mask length does not match layout");

  const BlockVector point = make_point(w);

  BlockVector x_next = w;
  double partial_res_sq = 0.0;
  for (Index i = 0; i < w.blocks(); ++i) {
    if (!mask.bits[static_cast<std::size_t>(i)]) continue;
    Eigen::VectorXd t = family.block(i, point);
    ++state.block_evals;
    if (t.size() != w.layout().dim(i))
      throw InvalidInputError("block step: operator block has wrong dimension");
    if (!t.allFinite())
      throw DivergenceError(n, "block step: operator produced non-finite values");
    partial_res_sq += (t - w.block(i)).squaredNorm();
    x_next.block(i) = w.block(i) + lambda_n * (t - w.block(i));
  }
  if (!x_next.all_finite()) throw DivergenceError(n, "block step: iterate became non-finite");

  state.residual_history.push_back(std::sqrt(partial_res_sq));
  state.step_norm_history.push_back((x_next.data() - state.x_curr.data()).norm());
  state.last_w = std::move(w);
  state.last_mask = mask.as_bits();
  state.last_active = mask.active_count();
  state.x_prev = std::move(state.x_curr);
  state.x_curr = std::move(x_next);
  state.iteration = n + 1;
}

}  // namespace detail

/// One randomized block-coordinate step for a quasinonexpansive family:
///   w = x_n + alpha_n (x_n - x_{n-1})   on every block,
///   x_{i,n+1} = w_i + eps_i lambda_n (T_i(w) - w_i).
/// Inactive blocks keep w_i exactly; only active blocks evaluate T_i.
inline void block_fixed_point_step(RunState& state, const InertialSchedule& s,
                                   const ActivationMask& mask,
                                   const BlockOperatorFamily& family) {
  detail::block_step_core(state, s, mask, family, s.lambda_at(state.iteration),
                          [](const BlockVector& w) { return w; });
}

inline void block_fixed_point_step(RunState& state, const InertialSchedule& s,
                                   MaskSampler& sampler, const BlockOperatorFamily& family) {
  block_fixed_point_step(state, s, sampler.sample(), family);
}

/// Block step for a beta_n-averaged family. The update rule is the same; the
/// admissible relaxation window widens to the averaged window with margin b.
inline void averaged_block_step(RunState& state, const InertialSchedule& s,
                                const ActivationMask& mask, const BlockOperatorFamily& family,
                                double beta_n, double b) {
  const long n = state.iteration;
  const LambdaWindow w = averaged_lambda_window(s, beta_n, b);
  if (!w.feasible())
    throw ConfigRejectedError("averaged_block_step: infeasible relaxation window at n=" +
                              std::to_string(n));
  const double lambda_n = s.lambda_at(n);
  if (lambda_n < w.lo || lambda_n > w.hi)
    throw ConfigRejectedError("averaged_block_step: lambda_n outside the averaged window at n=" +
                              std::to_string(n));
  detail::block_step_core(state, s, mask, family, lambda_n,
                          [](const BlockVector& w_) { return w_; });
}

inline void averaged_block_step(RunState& state, const InertialSchedule& s, MaskSampler& sampler,
                                const BlockOperatorFamily& family, double beta_n, double b) {
  averaged_block_step(state, s, sampler.sample(), family, beta_n, b);
}

/// Composition step: z_n = V(w_n) once per iteration, then active blocks take
/// T_i(z_n). V is gamma_n-averaged and T beta_n-averaged; the window uses the
/// composed constant. gamma_n = 0 bypasses the composition (V treated as the
/// identity limit).
inline void composed_block_step(RunState& state, const InertialSchedule& s,
                                const ActivationMask& mask,
                                const std::function<BlockVector(const BlockVector&)>& V,
                                double gamma_n, const BlockOperatorFamily& family, double beta_n,
                                double b) {
  const long n = state.iteration;
  const double eta = gamma_n == 0.0 ? beta_n : compose_averaged(beta_n, gamma_n);
  const LambdaWindow w = averaged_lambda_window(s, eta, b);
  if (!w.feasible())
    throw ConfigRejectedError("composed_block_step: infeasible relaxation window at n=" +
                              std::to_string(n));
  const double lambda_n = s.lambda_at(n);
  if (lambda_n < w.lo || lambda_n > w.hi)
    throw ConfigRejectedError("composed_block_step: lambda_n outside the averaged window at n=" +
                              std::to_string(n));
  detail::block_step_core(state, s, mask, family, lambda_n, [&](const BlockVector& w_) {
    if (gamma_n == 0.0) return w_;
    BlockVector z = V(w_);
    require_same_layout(z, w_, "composed_block_step: preprocessor output");
    return z;
  });
}

inline void composed_block_step(RunState& state, const InertialSchedule& s, MaskSampler& sampler,
                                const std::function<BlockVector(const BlockVector&)>& V,
                                double gamma_n, const BlockOperatorFamily& family, double beta_n,
                                double b) {
  composed_block_step(state, s, sampler.sample(), V, gamma_n, family, beta_n, b);
}

namespace detail {

template <typename StepFn>
inline RunResult run_block_loop(BlockVector x0, BlockVector x1, const InertialSchedule& s,
                                const SamplingPlan& plan, const BlockOperatorFamily& family,
                                const StopRule& stop, const StepFn& step) {
  if (!(stop.tol > 0.0) || stop.max_iters < 1 || stop.check_every < 1)
    throw InvalidInputError("block run: need tol > 0, max_iters >= 1, check_every >= 1");
  for (double p : marginals(plan))
    if (!(p > 0.0))
      throw ConfigRejectedError("block run: every block needs a positive activation marginal");

  MaskSampler sampler(plan);
  RunResult result;
  result.state = RunState::start(std::move(x0), std::move(x1));
  result.state.rng_seed = plan.rng_seed;
  RunState& st = result.state;

  for (long n = 1; n <= stop.max_iters; ++n) {
    step(st, sampler, n);
    const bool check = (n % stop.check_every == 0) || n == stop.max_iters;
    if (!check) continue;

    // Full residuals at the extrapolated and the committed point; off the
    // per-iteration fast path.
    BlockVector tw = family.full(st.last_w);
    BlockVector tx = family.full(st.x_curr);
    st.diagnostic_evals += 2 * st.last_w.blocks();
    const double residual_w = (tw.data() - st.last_w.data()).norm();
    const double residual_x = (tx.data() - st.x_curr.data()).norm();

    TraceRow row;
    row.iteration = n;
    row.residual = residual_w;
    row.residual_x = residual_x;
    row.step_norm = st.step_norm_history.back();
    row.alpha_n = s.alpha_at(n);
    row.lambda_n = s.lambda_at(n);
    row.active_blocks = st.last_active;
    row.mask_bits = st.last_mask;
    result.trace.push_back(row);

    if (residual_w <= stop.tol) {
      result.converged = true;
      break;
    }
  }
  return result;
}

}  // namespace detail

/// Loop wrapper for block_fixed_point_step. The stopping rule uses the full
/// residual ||T(w_n) - w_n||, evaluated every check_every iterations.
inline RunResult run_block_fixed_point(BlockVector x0, BlockVector x1, const InertialSchedule& s,
                                       const SamplingPlan& plan, const BlockOperatorFamily& family,
                                       const StopRule& stop) {
  ValidationReport report = validate_schedule(s, stop.max_iters);
  if (!report.ok) throw ConfigRejectedError("run_block_fixed_point: " + report.message);
  return detail::run_block_loop(std::move(x0), std::move(x1), s, plan, family, stop,
                                [&](RunState& st, MaskSampler& sampler, long) {
                                  block_fixed_point_step(st, s, sampler, family);
                                });
}

/// Loop wrapper for averaged_block_step with an iteration-dependent constant.
inline RunResult run_averaged_block(BlockVector x0, BlockVector x1, const InertialSchedule& s,
                                    const SamplingPlan& plan, const BlockOperatorFamily& family,
                                    const std::function<double(long)>& beta_rule, double b,
                                    const StopRule& stop) {
  ValidationReport report = validate_averaged_schedule(s, beta_rule, b, stop.max_iters);
  if (!report.ok) throw ConfigRejectedError("run_averaged_block: " + report.message);
  return detail::run_block_loop(std::move(x0), std::move(x1), s, plan, family, stop,
                                [&](RunState& st, MaskSampler& sampler, long n) {
                                  averaged_block_step(st, s, sampler, family, beta_rule(n), b);
                                });
}

/// Loop wrapper for composed_block_step. The full stop residual is taken on
/// the composed map S = T o V.
inline RunResult run_composed_block(BlockVector x0, BlockVector x1, const InertialSchedule& s,
                                    const SamplingPlan& plan,
                                    const std::function<BlockVector(const BlockVector&)>& V,
                                    double gamma, const BlockOperatorFamily& family, double beta,
                                    double b, const StopRule& stop) {
  const double eta = gamma == 0.0 ? beta : compose_averaged(beta, gamma);
  ValidationReport report =
      validate_averaged_schedule(s, [eta](long) { return eta; }, b, stop.max_iters);
  if (!report.ok) throw ConfigRejectedError("run_composed_block: " + report.message);

  BlockOperatorFamily composed;
  composed.block = [&V, &family, gamma](Index i, const BlockVector& w) {
    if (gamma == 0.0) return family.block(i, w);
    return family.block(i, V(w));
  };
  // The composed family is what the stop residual must see; the step itself
  // shares V(w) across active blocks.
  return detail::run_block_loop(
      std::move(x0), std::move(x1), s, plan, composed, stop,
      [&](RunState& st, MaskSampler& sampler, long) {
        composed_block_step(st, s, sampler, V, gamma, family, beta, b);
      });
}

}  // namespace ripd

#endif  // RIPD_BLOCK_ITERATION_HPP
