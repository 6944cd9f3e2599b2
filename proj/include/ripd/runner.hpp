#ifndef RIPD_RUNNER_HPP
#define RIPD_RUNNER_HPP

#include <chrono>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "ripd/block_iteration.hpp"
#include "ripd/errors.hpp"
#include "ripd/km.hpp"
#include "ripd/pd.hpp"
#include "ripd/problem_io.hpp"
#include "ripd/trace_io.hpp"

namespace ripd {

// CLI exit-code contract.
constexpr int kExitConverged = 0;
constexpr int kExitNotConverged = 1;
constexpr int kExitConfigRejected = 2;
constexpr int kExitIoError = 3;

struct RunConfig {
  std::string algorithm = "km";  // km | block-km | fb | pd-inclusion | pd-opt | pd-smooth
  double alpha = 0.0;
  double tau = 0.1;
  double delta = 0.0;   // 0 = choose a feasible default
  double lambda = 0.0;  // 0 = choose a feasible default
  double theta = 0.0;   // fb only; 0 = use mu
  std::string plan = "full";  // full | single | bernoulli:<q>[,<q>...]
  bool minimal_coupling = false;
  std::uint64_t seed = 1;
  long max_iters = 10000;
  double tol = 1e-8;
  long check_every = 10;
  std::string trace_path;
  bool override_condition_check = false;

  void validate() const {
    if (!(tol > 0.0)) throw ConfigRejectedError("config: tol must be > 0");
    if (max_iters < 1) throw ConfigRejectedError("config: max_iters must be >= 1");
    if (check_every < 1) throw ConfigRejectedError("config: check_every must be >= 1");
  }
};

struct RunOutcome {
  int exit_code = kExitNotConverged;
  bool converged = false;
  long iterations = 0;
  double final_residual = 0.0;
  double final_dual_residual = 0.0;
  double wall_seconds = 0.0;
  long evals_prox = 0, evals_grad = 0, evals_linop = 0;
  std::string summary;
};

namespace run_detail {

inline InertialSchedule schedule_from(const RunConfig& cfg) {
  const double alpha = cfg.alpha;
  const double tau = cfg.tau;
  double delta = cfg.delta;
  if (delta == 0.0) delta = std::max(1.0, 1.05 * inertial_delta_lower_bound(alpha, tau));
  double lambda = cfg.lambda;
  if (lambda == 0.0) lambda = 0.9 * inertial_lambda_ceiling(alpha, tau, delta);
  return InertialSchedule::constant_lambda(alpha, tau, delta, lambda);
}

inline SamplingPlan plan_from(const RunConfig& cfg, long m) {
  const std::string& p = cfg.plan;
  if (p.empty() || p == "full") return SamplingPlan::full(m);
  if (p == "single") return SamplingPlan::uniform_single(m, cfg.seed);
  const auto colon = p.find(':');
  const std::string mode = p.substr(0, colon);
  if (mode == "bernoulli") {
    if (colon == std::string::npos)
      throw ConfigRejectedError("config: bernoulli plan needs probabilities, e.g. bernoulli:0.5");
    std::vector<double> q;
    std::stringstream ss(p.substr(colon + 1));
    std::string tok;
    while (std::getline(ss, tok, ',')) q.push_back(std::stod(tok));
    if (q.size() == 1) q.assign(static_cast<std::size_t>(m), q[0]);
    if (static_cast<long>(q.size()) != m)
      throw ConfigRejectedError("config: plan lists " + std::to_string(q.size()) +
                                " probabilities for " + std::to_string(m) + " blocks");
    return SamplingPlan::bernoulli(std::move(q), cfg.seed);
  }
  throw ConfigRejectedError("config: unknown plan mode '" + mode + "'");
}

inline std::string format_summary(const std::string& algo, const RunOutcome& o) {
  std::ostringstream os;
  os << algo << ": " << (o.converged ? "converged" : "not converged") << " after " << o.iterations
     << " iterations, residual " << o.final_residual;
  if (o.final_dual_residual > 0.0) os << " (dual " << o.final_dual_residual << ")";
  os << ", " << o.wall_seconds << " s"
     << ", evals prox/grad/linop " << o.evals_prox << "/" << o.evals_grad << "/" << o.evals_linop;
  return os.str();
}

}  // namespace run_detail

/// Executes the configured algorithm on a loaded problem, writes the trace if
/// requested, and reports the outcome. Configuration failures surface as
/// ConfigRejectedError before any iteration runs.
inline RunOutcome run(const RunConfig& cfg, const LoadedProblem& problem) {
  cfg.validate();
  const auto t0 = std::chrono::steady_clock::now();
  InertialSchedule sched = run_detail::schedule_from(cfg);
  StopRule stop{cfg.tol, cfg.max_iters, cfg.check_every};
  RunOutcome out;

  auto finish = [&](bool converged, long iterations, double res, double dual_res) {
    out.converged = converged;
    out.iterations = iterations;
    out.final_residual = res;
    out.final_dual_residual = dual_res;
    out.exit_code = converged ? kExitConverged : kExitNotConverged;
    out.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    out.summary = run_detail::format_summary(cfg.algorithm, out);
  };

  if (cfg.algorithm == "km" || cfg.algorithm == "block-km" || cfg.algorithm == "fb") {
    if (!problem.fixed_point)
      throw ConfigRejectedError("run: algorithm '" + cfg.algorithm +
                                "' needs a fixed-point problem");
    const FixedPointProblem& fp = *problem.fixed_point;
    ForwardBackwardProblem fb = fp.to_forward_backward();
    double theta = cfg.theta > 0.0 ? cfg.theta : (fp.theta > 0.0 ? fp.theta : fb.mu);
    if (fb.mu != kInf && !(theta < 2.0 * fb.mu))
      throw ConfigRejectedError("run: theta must lie in (0, 2*mu)");
    BlockVector x0 = BlockVector::zero(fp.layout);

    if (cfg.algorithm == "km") {
      FixedPointOperator T = [&fb, theta](const BlockVector& x) {
        return fb_full_map(fb, x, theta);
      };
      RunResult r = run_km(x0, x0, sched, T, stop);
      if (!cfg.trace_path.empty())
        write_trace_file(cfg.trace_path, [&](std::ostream& os) { write_trace_km(os, r.trace); });
      finish(r.converged, r.state.iteration - 1,
             r.trace.empty() ? 0.0 : r.trace.back().residual, 0.0);
      return out;
    }

    SamplingPlan plan = run_detail::plan_from(cfg, fp.layout.blocks());
    if (cfg.algorithm == "block-km") {
      BlockOperatorFamily family;
      family.block = [&fb, theta](Index i, const BlockVector& w) {
        BlockVector z = fb.forward(w);
        BlockVector u(w.layout(), w.data() - theta * z.data());
        return fb.resolvent_block(i, u, theta);
      };
      RunResult r = run_block_fixed_point(x0, x0, sched, plan, family, stop);
      if (!cfg.trace_path.empty())
        write_trace_file(cfg.trace_path,
                         [&](std::ostream& os) { write_trace_block(os, r.trace); });
      out.evals_prox = r.state.block_evals;
      finish(r.converged, r.state.iteration - 1,
             r.trace.empty() ? 0.0 : r.trace.back().residual, 0.0);
      return out;
    }

    RunResult r = run_fb(x0, x0, sched, plan, fb, theta, stop);
    if (!cfg.trace_path.empty())
      write_trace_file(cfg.trace_path, [&](std::ostream& os) { write_trace_block(os, r.trace); });
    out.evals_prox = r.state.block_evals;
    finish(r.converged, r.state.iteration - 1, r.trace.empty() ? 0.0 : r.trace.back().residual,
           0.0);
    return out;
  }

  // primal-dual algorithms
  const bool is_inclusion = cfg.algorithm == "pd-inclusion";
  const bool is_opt = cfg.algorithm == "pd-opt";
  const bool is_smooth = cfg.algorithm == "pd-smooth";
  if (!is_inclusion && !is_opt && !is_smooth)
    throw ConfigRejectedError("run: unknown algorithm '" + cfg.algorithm + "'");

  if (is_inclusion && !problem.monotone)
    throw ConfigRejectedError("run: pd-inclusion needs a monotone problem");
  if ((is_opt || is_smooth) && !problem.composite)
    throw ConfigRejectedError("run: " + cfg.algorithm + " needs a composite problem");

  const LinearBlockOperator& L =
      is_inclusion ? problem.monotone->L() : problem.composite->L();
  const Preconditioner& prec = *problem.prec;
  const long p = L.col_layout().blocks();
  const long q = L.row_layout().blocks();

  SamplingPlan base = run_detail::plan_from(cfg, p + q);
  const CouplingDirection dir =
      is_smooth ? CouplingDirection::DualFollowsPrimal : CouplingDirection::PrimalFollowsDual;
  SamplingPlan plan = enforce_coupling(base, L, dir, cfg.minimal_coupling);

  BlockVector x0 = BlockVector::zero(L.col_layout());
  BlockVector y0 = BlockVector::zero(L.row_layout());

  PdRunResult r = is_inclusion
                      ? run_pd_inclusion(*problem.monotone, prec, x0, y0, sched, plan, stop,
                                         cfg.override_condition_check)
                      : (is_opt ? run_pd_optimization(*problem.composite, prec, x0, y0, sched,
                                                      plan, stop, cfg.override_condition_check)
                                : run_pd_smooth(*problem.composite, prec, x0, y0, sched, plan,
                                                stop, cfg.override_condition_check));
  if (!cfg.trace_path.empty())
    write_trace_file(cfg.trace_path, [&](std::ostream& os) { write_trace_pd(os, r.trace); });
  const double pr = r.trace.empty() ? 0.0 : r.trace.back().primal_residual;
  const double dr = r.trace.empty() ? 0.0 : r.trace.back().dual_residual;
  out.evals_prox = r.state.evals_prox;
  out.evals_grad = r.state.evals_grad;
  out.evals_linop = r.state.evals_linop;
  finish(r.converged, r.state.iteration - 1, pr, dr);
  return out;
}

}  // namespace ripd

#endif  // RIPD_RUNNER_HPP
