#ifndef RIPD_PD_HPP
#define RIPD_PD_HPP

#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <sstream>
#include <utility>
#include <vector>

#include "ripd/block_iteration.hpp"
#include "ripd/block_vector.hpp"
#include "ripd/errors.hpp"
#include "ripd/problems.hpp"
#include "ripd/run_state.hpp"
#include "ripd/sampling.hpp"
#include "ripd/schedule.hpp"

namespace ripd {

// ---------------------------------------------------------------------------
// Preconditioned forward-backward on one block space
// ---------------------------------------------------------------------------

/// zer(A + B) data for the randomized inertial forward-backward iteration:
/// per-block resolvent family of the (preconditioned) backward term and the
/// full-space cocoercive forward term.
struct ForwardBackwardProblem {
  // block i of J_{theta A}
  std::function<Eigen::VectorXd(Index, const BlockVector&, double)> resolvent_block;
  // the cocoercive map B
  std::function<BlockVector(const BlockVector&)> forward;
  double mu = 1.0;  // cocoercivity constant of forward
};

/// One randomized inertial forward-backward step:
///   w = x_n + alpha_n (x_n - x_{n-1}),  z = B(w),
///   x_{i,n+1} = w_i + eps_i lambda_n (T_i(w - theta_n z) - w_i).
inline void fb_step(RunState& state, const InertialSchedule& s, const ActivationMask& mask,
                    const ForwardBackwardProblem& fb, double theta_n) {
  if (!(theta_n > 0.0) || !(theta_n < 2.0 * fb.mu))
    throw ConfigRejectedError("fb_step: theta must lie in (0, 2*mu)");
  const long n = state.iteration;
  const double a = s.alpha_at(n);
  const double l = s.lambda_at(n);

  BlockVector w(state.x_curr.layout(),
                state.x_curr.data() + a * (state.x_curr.data() - state.x_prev.data()));
  BlockVector z = fb.forward(w);
  require_same_layout(z, w, "fb_step: forward output");
  BlockVector u(w.layout(), w.data() - theta_n * z.data());

  if (static_cast<long>(mask.bits.size()) != w.blocks())
    throw InvalidInputError("fb_step: activation mask length does not match layout");

  BlockVector x_next = w;
  double partial_res_sq = 0.0;
  for (Index i = 0; i < w.blocks(); ++i) {
    if (!mask.bits[static_cast<std::size_t>(i)]) continue;
    Eigen::VectorXd t = fb.resolvent_block(i, u, theta_n);
    ++state.block_evals;
    if (!t.allFinite()) throw DivergenceError(n, "fb_step: resolvent produced non-finite values");
    partial_res_sq += (t - w.block(i)).squaredNorm();
    x_next.block(i) = w.block(i) + l * (t - w.block(i));
  }
  if (!x_next.all_finite()) throw DivergenceError(n, "fb_step: iterate became non-finite");

  state.residual_history.push_back(std::sqrt(partial_res_sq));
  state.step_norm_history.push_back((x_next.data() - state.x_curr.data()).norm());
  state.last_w = std::move(w);
  state.last_mask = mask.as_bits();
  state.last_active = mask.active_count();
  state.x_prev = std::move(state.x_curr);
  state.x_curr = std::move(x_next);
  state.iteration = n + 1;
}

inline void fb_step(RunState& state, const InertialSchedule& s, MaskSampler& sampler,
                    const ForwardBackwardProblem& fb, double theta_n) {
  fb_step(state, s, sampler.sample(), fb, theta_n);
}

/// Full forward-backward map S(x) = J_{theta A}(x - theta B(x)); diagnostics.
inline BlockVector fb_full_map(const ForwardBackwardProblem& fb, const BlockVector& x,
                               double theta) {
  BlockVector z = fb.forward(x);
  BlockVector u(x.layout(), x.data() - theta * z.data());
  BlockVector out = BlockVector::zero(x.layout());
  for (Index i = 0; i < x.blocks(); ++i) out.block(i) = fb.resolvent_block(i, u, theta);
  return out;
}

inline RunResult run_fb(BlockVector x0, BlockVector x1, const InertialSchedule& s,
                        const SamplingPlan& plan, const ForwardBackwardProblem& fb,
                        const std::function<double(long)>& theta_rule, const StopRule& stop) {
  if (!(stop.tol > 0.0) || stop.max_iters < 1 || stop.check_every < 1)
    throw InvalidInputError("run_fb: need tol > 0, max_iters >= 1, check_every >= 1");
  ValidationReport report = validate_schedule(s, stop.max_iters);
  if (!report.ok) throw ConfigRejectedError("run_fb: " + report.message);
  for (double p : marginals(plan))
    if (!(p > 0.0))
      throw ConfigRejectedError("run_fb: every block needs a positive activation marginal");

  MaskSampler sampler(plan);
  RunResult result;
  result.state = RunState::start(std::move(x0), std::move(x1));
  result.state.rng_seed = plan.rng_seed;
  RunState& st = result.state;

  for (long n = 1; n <= stop.max_iters; ++n) {
    const double theta = theta_rule(n);
    fb_step(st, s, sampler, fb, theta);
    const bool check = (n % stop.check_every == 0) || n == stop.max_iters;
    if (!check) continue;

    BlockVector sw = fb_full_map(fb, st.last_w, theta);
    BlockVector sx = fb_full_map(fb, st.x_curr, theta);
    st.diagnostic_evals += 2 * st.last_w.blocks();
    const double residual_w = (sw.data() - st.last_w.data()).norm();
    const double residual_x = (sx.data() - st.x_curr.data()).norm();

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

inline RunResult run_fb(BlockVector x0, BlockVector x1, const InertialSchedule& s,
                        const SamplingPlan& plan, const ForwardBackwardProblem& fb, double theta,
                        const StopRule& stop) {
  return run_fb(std::move(x0), std::move(x1), s, plan, fb, [theta](long) { return theta; }, stop);
}

// ---------------------------------------------------------------------------
// Coupling and the convergence-condition gate
// ---------------------------------------------------------------------------

/// Derives the activation coupling a primal-dual run needs from the coupling
/// sparsity of L. For PrimalFollowsDual a primal block activates whenever any
/// dual block reading it is active (its own draw is OR-ed in; minimal mode
/// drops the own draw). DualFollowsPrimal is the reverse.
inline SamplingPlan enforce_coupling(const SamplingPlan& plan, const LinearBlockOperator& L,
                                     CouplingDirection direction, bool minimal = false) {
  const long p = L.col_layout().blocks();
  const long q = L.row_layout().blocks();
  if (plan.m != p + q)
    throw InvalidInputError("enforce_coupling: plan must cover p + q blocks");
  std::vector<std::vector<long>> support;
  if (direction == CouplingDirection::PrimalFollowsDual) {
    support.resize(static_cast<std::size_t>(p));
    for (long j = 0; j < p; ++j)
      for (Index k : L.col_support(j))
        support[static_cast<std::size_t>(j)].push_back(p + static_cast<long>(k));
  } else if (direction == CouplingDirection::DualFollowsPrimal) {
    support.resize(static_cast<std::size_t>(q));
    for (long k = 0; k < q; ++k)
      for (Index j : L.row_support(k))
        support[static_cast<std::size_t>(k)].push_back(static_cast<long>(j));
  } else {
    throw InvalidInputError("enforce_coupling: a coupling direction is required");
  }
  return make_coupled_plan(plan, p, direction, std::move(support), minimal);
}

struct ConditionReport {
  double nu = kInf;         // min over primal blocks of the preconditioned cocoercivity
  double tau_tilde = kInf;  // min over dual blocks
  double norm_estimate = 0.0;  // ||R^1/2 L F^1/2||
  double min_value = 0.0;      // min(nu, tau_tilde (1 - norm^2))
  bool norm_ok = false;        // norm < 1
  bool pass = false;           // min_value > 1/2

  std::string summary() const {
    std::ostringstream os;
    os << "nu=" << nu << " tau=" << tau_tilde << " |R^1/2 L F^1/2|=" << norm_estimate
       << " min=" << min_value << " -> " << (pass ? "pass" : "fail");
    return os.str();
  }
};

/// Convergence-condition gate: min(nu, tau (1 - |R^1/2 L F^1/2|^2)) > 1/2,
/// with the norm estimated by power iteration. The preconditioned constants
/// are the declared raw constants divided by the largest step of their block,
/// which bounds the cocoercivity of the scaled maps from below.
inline ConditionReport check_condition(const MonotoneBlockProblem& prob,
                                       const Preconditioner& prec) {
  if (prec.F.layout() != prob.primal_layout() || prec.R.layout() != prob.dual_layout())
    throw InvalidInputError("check_condition: preconditioner layouts do not match the problem");

  ConditionReport rep;
  for (Index j = 0; j < prob.p(); ++j) {
    const double raw = prob.primal(j).C.cocoercivity();
    const double scaled = raw == kInf ? kInf : raw / prec.F.max_block_entry(j);
    rep.nu = std::min(rep.nu, scaled);
  }
  for (Index k = 0; k < prob.q(); ++k) {
    const double raw = prob.dual(k).Dinv.cocoercivity();
    const double scaled = raw == kInf ? kInf : raw / prec.R.max_block_entry(k);
    rep.tau_tilde = std::min(rep.tau_tilde, scaled);
  }
  rep.norm_estimate = operator_norm_estimate(prob.L(), prec.F, prec.R);
  rep.norm_ok = rep.norm_estimate < 1.0;

  const double gap = 1.0 - rep.norm_estimate * rep.norm_estimate;
  double term;
  if (rep.tau_tilde == kInf)
    term = gap > 0.0 ? kInf : -kInf;
  else
    term = rep.tau_tilde * gap;
  rep.min_value = std::min(rep.nu, term);
  rep.pass = rep.min_value > 0.5;
  return rep;
}

inline ConditionReport check_condition(const CompositeProblem& prob, const Preconditioner& prec) {
  return check_condition(prob.monotone_view(), prec);
}

// ---------------------------------------------------------------------------
// Primal-dual steps
// ---------------------------------------------------------------------------

namespace detail {

inline void extrapolate(const BlockVector& curr, const BlockVector& prev, double a,
                        BlockVector& out) {
  out = BlockVector(curr.layout(), curr.data() + a * (curr.data() - prev.data()));
}

}  // namespace detail

/// One step of the randomized inertial primal-dual iteration for the coupled
/// monotone inclusion. Active primal blocks take a resolvent of F_j A_j after
/// a forward step along L* y + C w; active dual blocks take a resolvent of
/// R_k B_k^{-1} fed with L(2z - w) - Dinv h. Every z the dual side reads must
/// have been produced this iteration, which the activation coupling
/// guarantees.
inline void pd_inclusion_step(PDState& state, const InertialSchedule& s,
                              const ActivationMask& mask, const MonotoneBlockProblem& prob,
                              const Preconditioner& prec) {
  const long n = state.iteration;
  const double a = s.alpha_at(n);
  const double l = s.lambda_at(n);
  const Index p = prob.p();
  const Index q = prob.q();

  if (static_cast<long>(mask.bits.size()) != p + q)
    throw InvalidInputError("pd_inclusion_step: plan must cover p + q blocks");
  auto primal_active = [&](Index j) { return mask.bits[static_cast<std::size_t>(j)] != 0; };
  auto dual_active = [&](Index k) { return mask.bits[static_cast<std::size_t>(p + k)] != 0; };

  BlockVector w;
  detail::extrapolate(state.x_curr, state.x_prev, a, w);
  BlockVector x_next = w;
  std::vector<std::optional<Eigen::VectorXd>> z(static_cast<std::size_t>(p));

  for (Index j = 0; j < p; ++j) {
    if (!primal_active(j)) continue;
    Eigen::VectorXd u = Eigen::VectorXd::Zero(w.layout().dim(j));
    for (Index k : prob.L().col_support(j)) {
      u += prob.L().block(k, j).transpose() * state.y_curr.block(k);
      ++state.evals_linop;
    }
    u += prob.primal(j).C.grad(w.block(j));
    ++state.evals_grad;
    const Eigen::VectorXd arg = w.block(j) - prec.F.apply_block(j, u);
    Eigen::VectorXd zj = prob.primal(j).A.eval_scaled(arg, prec.F.diag_block(j));
    ++state.evals_prox;
    if (!zj.allFinite())
      throw DivergenceError(n, "pd_inclusion_step: primal resolvent produced non-finite values");
    x_next.block(j) = w.block(j) + l * (zj - w.block(j));
    z[static_cast<std::size_t>(j)] = std::move(zj);
  }

  BlockVector h;
  detail::extrapolate(state.y_curr, state.y_prev, a, h);
  BlockVector y_next = h;

  for (Index k = 0; k < q; ++k) {
    if (!dual_active(k)) continue;
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(h.layout().dim(k));
    for (Index j : prob.L().row_support(k)) {
      const auto& zj = z[static_cast<std::size_t>(j)];
      if (!zj)
        throw CouplingViolationError(
            "pd_inclusion_step: dual block " + std::to_string(k) +
            " is active but primal block " + std::to_string(j) +
            " was not updated this iteration; the activation coupling is not enforced");
      acc += prob.L().block(k, j) * (2.0 * (*zj) - w.block(j));
      ++state.evals_linop;
    }
    acc -= prob.dual(k).Dinv.grad(h.block(k));
    ++state.evals_grad;
    const Eigen::VectorXd arg = h.block(k) + prec.R.apply_block(k, acc);
    Eigen::VectorXd sk = prob.dual(k).Binv.eval_scaled(arg, prec.R.diag_block(k));
    ++state.evals_prox;
    if (!sk.allFinite())
      throw DivergenceError(n, "pd_inclusion_step: dual resolvent produced non-finite values");
    y_next.block(k) = h.block(k) + l * (sk - h.block(k));
  }

  if (!x_next.all_finite() || !y_next.all_finite())
    throw DivergenceError(n, "pd_inclusion_step: iterate became non-finite");

  const double step_sq = (x_next.data() - state.x_curr.data()).squaredNorm() +
                         (y_next.data() - state.y_curr.data()).squaredNorm();
  state.step_norm_history.push_back(std::sqrt(step_sq));
  state.last_mask = mask.as_bits();
  state.last_active_primal = 0;
  state.last_active_dual = 0;
  for (Index j = 0; j < p; ++j) state.last_active_primal += primal_active(j) ? 1 : 0;
  for (Index k = 0; k < q; ++k) state.last_active_dual += dual_active(k) ? 1 : 0;
  state.x_prev = std::move(state.x_curr);
  state.x_curr = std::move(x_next);
  state.y_prev = std::move(state.y_curr);
  state.y_curr = std::move(y_next);
  state.iteration = n + 1;
}

inline void pd_inclusion_step(PDState& state, const InertialSchedule& s, MaskSampler& sampler,
                              const MonotoneBlockProblem& prob, const Preconditioner& prec) {
  pd_inclusion_step(state, s, sampler.sample(), prob, prec);
}

/// Composite-minimization step: the same control flow with A_j the
/// subdifferential of f_j, C_j the gradient of h_j, B_k the subdifferential
/// of g_k (dual resolvent through the conjugate prox in the R_k metric), and
/// Dinv_k the gradient of l_k^*.
inline void pd_optimization_step(PDState& state, const InertialSchedule& s,
                                 const ActivationMask& mask, const CompositeProblem& prob,
                                 const Preconditioner& prec) {
  pd_inclusion_step(state, s, mask, prob.monotone_view(), prec);
}

inline void pd_optimization_step(PDState& state, const InertialSchedule& s, MaskSampler& sampler,
                                 const CompositeProblem& prob, const Preconditioner& prec) {
  pd_inclusion_step(state, s, sampler.sample(), prob.monotone_view(), prec);
}

/// Smooth-primal variant (every f_j = 0) with the reordered update: explicit
/// primal forward steps z_j for blocks adjacent to an active dual, dual
/// prox updates, then primal relaxation through the freshly updated duals.
inline void pd_smooth_step(PDState& state, const InertialSchedule& s, const ActivationMask& mask,
                           const CompositeProblem& prob, const Preconditioner& prec) {
  if (!prob.all_f_zero())
    throw ConfigRejectedError("pd_smooth_step: every primal f must be the zero function");
  const long n = state.iteration;
  const double a = s.alpha_at(n);
  const double l = s.lambda_at(n);
  const Index p = prob.p();
  const Index q = prob.q();

  if (static_cast<long>(mask.bits.size()) != p + q)
    throw InvalidInputError("pd_smooth_step: plan must cover p + q blocks");
  auto primal_active = [&](Index j) { return mask.bits[static_cast<std::size_t>(j)] != 0; };
  auto dual_active = [&](Index k) { return mask.bits[static_cast<std::size_t>(p + k)] != 0; };

  // xi_j = max over the dual blocks reading block j
  std::vector<std::uint8_t> xi(static_cast<std::size_t>(p), 0);
  for (Index j = 0; j < p; ++j)
    for (Index k : prob.L().col_support(j))
      if (dual_active(k)) {
        xi[static_cast<std::size_t>(j)] = 1;
        break;
      }

  BlockVector w;
  detail::extrapolate(state.x_curr, state.x_prev, a, w);
  std::vector<std::optional<Eigen::VectorXd>> z(static_cast<std::size_t>(p));
  std::vector<std::optional<Eigen::VectorXd>> lty(static_cast<std::size_t>(p));

  for (Index j = 0; j < p; ++j) {
    if (!xi[static_cast<std::size_t>(j)]) continue;
    Eigen::VectorXd gh = prob.primal(j).h.grad(w.block(j));
    ++state.evals_grad;
    z[static_cast<std::size_t>(j)] = w.block(j) - prec.F.apply_block(j, gh);
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(w.layout().dim(j));
    for (Index k : prob.L().col_support(j)) {
      acc += prob.L().block(k, j).transpose() * state.y_curr.block(k);
      ++state.evals_linop;
    }
    lty[static_cast<std::size_t>(j)] = prec.F.apply_block(j, acc);
  }

  BlockVector h;
  detail::extrapolate(state.y_curr, state.y_prev, a, h);
  BlockVector y_next = h;
  std::vector<std::optional<Eigen::VectorXd>> sval(static_cast<std::size_t>(q));

  for (Index k = 0; k < q; ++k) {
    if (!dual_active(k)) continue;
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(h.layout().dim(k));
    for (Index j : prob.L().row_support(k)) {
      // xi_j = 1 by construction whenever k is active and reads j
      acc += prob.L().block(k, j) *
             (*z[static_cast<std::size_t>(j)] - *lty[static_cast<std::size_t>(j)]);
      ++state.evals_linop;
    }
    acc -= prob.dual(k).lstar.grad(h.block(k));
    ++state.evals_grad;
    const Eigen::VectorXd arg = h.block(k) + prec.R.apply_block(k, acc);
    Eigen::VectorXd sk = prox_conjugate_scaled(prob.dual(k).g, arg, prec.R.diag_block(k));
    ++state.evals_prox;
    if (!sk.allFinite())
      throw DivergenceError(n, "pd_smooth_step: dual prox produced non-finite values");
    y_next.block(k) = h.block(k) + l * (sk - h.block(k));
    sval[static_cast<std::size_t>(k)] = std::move(sk);
  }

  BlockVector x_next = w;
  for (Index j = 0; j < p; ++j) {
    if (!primal_active(j)) continue;
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(w.layout().dim(j));
    for (Index k : prob.L().col_support(j)) {
      const auto& sk = sval[static_cast<std::size_t>(k)];
      if (!sk)
        throw CouplingViolationError(
            "pd_smooth_step: primal block " + std::to_string(j) +
            " is active but dual block " + std::to_string(k) +
            " was not updated this iteration; the reversed activation coupling is not enforced");
      acc += prob.L().block(k, j).transpose() * (*sk);
      ++state.evals_linop;
    }
    x_next.block(j) =
        w.block(j) +
        l * (*z[static_cast<std::size_t>(j)] - prec.F.apply_block(j, acc) - w.block(j));
  }

  if (!x_next.all_finite() || !y_next.all_finite())
    throw DivergenceError(n, "pd_smooth_step: iterate became non-finite");

  const double step_sq = (x_next.data() - state.x_curr.data()).squaredNorm() +
                         (y_next.data() - state.y_curr.data()).squaredNorm();
  state.step_norm_history.push_back(std::sqrt(step_sq));
  state.last_mask = mask.as_bits();
  state.last_active_primal = 0;
  state.last_active_dual = 0;
  for (Index j = 0; j < p; ++j) state.last_active_primal += primal_active(j) ? 1 : 0;
  for (Index k = 0; k < q; ++k) state.last_active_dual += dual_active(k) ? 1 : 0;
  state.x_prev = std::move(state.x_curr);
  state.x_curr = std::move(x_next);
  state.y_prev = std::move(state.y_curr);
  state.y_curr = std::move(y_next);
  state.iteration = n + 1;
}

inline void pd_smooth_step(PDState& state, const InertialSchedule& s, MaskSampler& sampler,
                           const CompositeProblem& prob, const Preconditioner& prec) {
  pd_smooth_step(state, s, sampler.sample(), prob, prec);
}

// ---------------------------------------------------------------------------
// Diagnostics
// ---------------------------------------------------------------------------

struct PdResiduals {
  double primal = 0.0;  // ||x - J_{FA}(x - F(L*y + Cx))||
  double dual = 0.0;    // ||y - J_{RB^{-1}}(y + R(Lx - Dinv y))||
  double objective = std::numeric_limits<double>::quiet_NaN();
  double gap_surrogate = std::numeric_limits<double>::quiet_NaN();
};

/// Fixed-point residuals of the current pair; zero exactly at solutions.
inline PdResiduals residuals(const PDState& state, const MonotoneBlockProblem& prob,
                             const Preconditioner& prec) {
  const BlockVector& x = state.x_curr;
  const BlockVector& y = state.y_curr;
  if (x.layout() != prob.primal_layout() || y.layout() != prob.dual_layout())
    throw InvalidInputError("residuals: state layouts do not match the problem");

  PdResiduals r;
  double acc = 0.0;
  for (Index j = 0; j < prob.p(); ++j) {
    Eigen::VectorXd u = Eigen::VectorXd::Zero(x.layout().dim(j));
    for (Index k : prob.L().col_support(j))
      u += prob.L().block(k, j).transpose() * y.block(k);
    u += prob.primal(j).C.grad(x.block(j));
    const Eigen::VectorXd zj =
        prob.primal(j).A.eval_scaled(x.block(j) - prec.F.apply_block(j, u), prec.F.diag_block(j));
    acc += (x.block(j) - zj).squaredNorm();
  }
  r.primal = std::sqrt(acc);

  acc = 0.0;
  for (Index k = 0; k < prob.q(); ++k) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(y.layout().dim(k));
    for (Index j : prob.L().row_support(k)) v += prob.L().block(k, j) * x.block(j);
    v -= prob.dual(k).Dinv.grad(y.block(k));
    const Eigen::VectorXd sk =
        prob.dual(k).Binv.eval_scaled(y.block(k) + prec.R.apply_block(k, v),
                                      prec.R.diag_block(k));
    acc += (y.block(k) - sk).squaredNorm();
  }
  r.dual = std::sqrt(acc);
  return r;
}

/// Composite version: adds the objective value and, when every l_k is the
/// indicator of the origin, a duality-gap surrogate (the Fenchel-Young
/// residual of the g side plus the primal fixed-point residual; zero exactly
/// at saddle points).
inline PdResiduals residuals(const PDState& state, const CompositeProblem& prob,
                             const Preconditioner& prec) {
  PdResiduals r = residuals(state, prob.monotone_view(), prec);
  if (!prob.objective_available()) return r;
  r.objective = prob.objective(state.x_curr);
  BlockVector lx = prob.L().apply(state.x_curr);
  double fy = 0.0;
  for (Index k = 0; k < prob.q(); ++k) {
    const auto& g = prob.dual(k).g;
    fy += g.value(lx.block(k)) + g.conj_value(state.y_curr.block(k)) -
          lx.block(k).dot(state.y_curr.block(k));
  }
  r.gap_surrogate = fy + r.primal;
  return r;
}

// ---------------------------------------------------------------------------
// Runners
// ---------------------------------------------------------------------------

struct PdTraceRow {
  long iteration = 0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  double objective = std::numeric_limits<double>::quiet_NaN();
  double step_norm = 0.0;
  int active_primal = 0;
  int active_dual = 0;
  long evals_prox = 0;
  long evals_grad = 0;
  long evals_linop = 0;
};

struct PdRunResult {
  PDState state;
  bool converged = false;
  std::vector<PdTraceRow> trace;
  ConditionReport condition;
};

namespace detail {

template <typename Problem, typename StepFn, typename ResidualFn>
inline PdRunResult run_pd_loop(const Problem& prob, const Preconditioner& prec, BlockVector x0,
                               BlockVector y0, const InertialSchedule& s, const SamplingPlan& plan,
                               const StopRule& stop, bool override_condition_check,
                               CouplingDirection expected, const StepFn& step,
                               const ResidualFn& resid) {
  if (!(stop.tol > 0.0) || stop.max_iters < 1 || stop.check_every < 1)
    throw InvalidInputError("pd run: need tol > 0, max_iters >= 1, check_every >= 1");
  ValidationReport report = validate_schedule(s, stop.max_iters);
  if (!report.ok) throw ConfigRejectedError("pd run: " + report.message);
  if (plan.coupled() && plan.coupling != expected)
    throw ConfigRejectedError("pd run: the plan's coupling direction does not fit the algorithm");
  for (double pr : marginals(plan))
    if (!(pr > 0.0))
      throw ConfigRejectedError("pd run: every block needs a positive activation marginal");

  PdRunResult result;
  result.condition = check_condition(prob, prec);
  if (!result.condition.pass && !override_condition_check)
    throw ConfigRejectedError("pd run: convergence condition fails (" +
                              result.condition.summary() +
                              "); pass override_condition_check to run anyway");

  MaskSampler sampler(plan);
  result.state = PDState::start(std::move(x0), std::move(y0));
  PDState& st = result.state;

  for (long n = 1; n <= stop.max_iters; ++n) {
    step(st, sampler);
    const bool check = (n % stop.check_every == 0) || n == stop.max_iters;
    if (!check) continue;

    const PdResiduals r = resid(st);
    PdTraceRow row;
    row.iteration = n;
    row.primal_residual = r.primal;
    row.dual_residual = r.dual;
    row.objective = r.objective;
    row.step_norm = st.step_norm_history.back();
    row.active_primal = st.last_active_primal;
    row.active_dual = st.last_active_dual;
    row.evals_prox = st.evals_prox;
    row.evals_grad = st.evals_grad;
    row.evals_linop = st.evals_linop;
    result.trace.push_back(row);

    if (std::max(r.primal, r.dual) <= stop.tol) {
      result.converged = true;
      break;
    }
  }
  return result;
}

}  // namespace detail

inline PdRunResult run_pd_inclusion(const MonotoneBlockProblem& prob, const Preconditioner& prec,
                                    BlockVector x0, BlockVector y0, const InertialSchedule& s,
                                    const SamplingPlan& plan, const StopRule& stop,
                                    bool override_condition_check = false) {
  return detail::run_pd_loop(
      prob, prec, std::move(x0), std::move(y0), s, plan, stop, override_condition_check,
      CouplingDirection::PrimalFollowsDual,
      [&](PDState& st, MaskSampler& sampler) { pd_inclusion_step(st, s, sampler, prob, prec); },
      [&](const PDState& st) { return residuals(st, prob, prec); });
}

inline PdRunResult run_pd_optimization(const CompositeProblem& prob, const Preconditioner& prec,
                                       BlockVector x0, BlockVector y0, const InertialSchedule& s,
                                       const SamplingPlan& plan, const StopRule& stop,
                                       bool override_condition_check = false) {
  return detail::run_pd_loop(
      prob, prec, std::move(x0), std::move(y0), s, plan, stop, override_condition_check,
      CouplingDirection::PrimalFollowsDual,
      [&](PDState& st, MaskSampler& sampler) { pd_optimization_step(st, s, sampler, prob, prec); },
      [&](const PDState& st) { return residuals(st, prob, prec); });
}

inline PdRunResult run_pd_smooth(const CompositeProblem& prob, const Preconditioner& prec,
                                 BlockVector x0, BlockVector y0, const InertialSchedule& s,
                                 const SamplingPlan& plan, const StopRule& stop,
                                 bool override_condition_check = false) {
  if (!prob.all_f_zero())
    throw ConfigRejectedError("run_pd_smooth: every primal f must be the zero function");
  return detail::run_pd_loop(
      prob, prec, std::move(x0), std::move(y0), s, plan, stop, override_condition_check,
      CouplingDirection::DualFollowsPrimal,
      [&](PDState& st, MaskSampler& sampler) { pd_smooth_step(st, s, sampler, prob, prec); },
      [&](const PDState& st) { return residuals(st, prob, prec); });
}

}  // namespace ripd

#endif  // RIPD_PD_HPP
