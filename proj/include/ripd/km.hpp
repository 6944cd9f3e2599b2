#ifndef RIPD_KM_HPP
#define RIPD_KM_HPP

#include <cmath>
#include <functional>
#include <utility>

#include "ripd/block_vector.hpp"
#include "ripd/errors.hpp"
#include "ripd/run_state.hpp"
#include "ripd/schedule.hpp"

namespace ripd {

using FixedPointOperator = std::function<BlockVector(const BlockVector&)>;

/// One inertial relaxed step:
///   w = x_n + alpha_n (x_n - x_{n-1}),  x_{n+1} = w + lambda_n (T(w) - w).
/// Appends ||T(w) - w|| and ||x_{n+1} - x_n|| to the state histories.
inline void km_step(RunState& state, const InertialSchedule& s, const FixedPointOperator& T) {
  const long n = state.iteration;
  const double a = s.alpha_at(n);
  const double l = s.lambda_at(n);

  BlockVector w(state.x_curr.layout(),
                state.x_curr.data() + a * (state.x_curr.data() - state.x_prev.data()));
  BlockVector t = T(w);
  require_same_layout(t, w, "km_step: operator output");
  if (!t.all_finite()) throw DivergenceError(n, "km_step: operator produced non-finite values");

  const double residual = (t.data() - w.data()).norm();
  BlockVector x_next(w.layout(), w.data() + l * (t.data() - w.data()));
  if (!x_next.all_finite()) throw DivergenceError(n, "km_step: iterate became non-finite");
  const double step_norm = (x_next.data() - state.x_curr.data()).norm();

  state.residual_history.push_back(residual);
  state.step_norm_history.push_back(step_norm);
  state.last_w = std::move(w);
  state.x_prev = std::move(state.x_curr);
  state.x_curr = std::move(x_next);
  state.iteration = n + 1;
}

/// Runs the inertial fixed-point loop until ||T(w_n) - w_n|| <= tol or the
/// iteration budget runs out. Exhaustion reports converged = false; it is not
/// an error.
inline RunResult run_km(BlockVector x0, BlockVector x1, const InertialSchedule& s,
                        const FixedPointOperator& T, const StopRule& stop) {
  if (!(stop.tol > 0.0) || stop.max_iters < 1 || stop.check_every < 1)
    throw InvalidInputError("run_km: need tol > 0, max_iters >= 1, check_every >= 1");
  ValidationReport report = validate_schedule(s, stop.max_iters);
  if (!report.ok) throw ConfigRejectedError("run_km: " + report.message);

  RunResult result;
  result.state = RunState::start(std::move(x0), std::move(x1));
  RunState& st = result.state;

  for (long n = 1; n <= stop.max_iters; ++n) {
    km_step(st, s, T);
    const double residual = st.residual_history.back();
    const bool record = (n % stop.check_every == 0) || residual <= stop.tol || n == stop.max_iters;
    if (record) {
      TraceRow row;
      row.iteration = n;
      row.residual = residual;
      row.residual_x = residual;
      row.step_norm = st.step_norm_history.back();
      row.alpha_n = s.alpha_at(n);
      row.lambda_n = s.lambda_at(n);
      row.active_blocks = static_cast<int>(st.x_curr.blocks());
      row.mask_bits = st.x_curr.blocks() <= 64
                          ? (st.x_curr.blocks() == 64 ? ~0ull
                                                      : ((1ull << st.x_curr.blocks()) - 1ull))
                          : 0ull;
      result.trace.push_back(row);
    }
    if (residual <= stop.tol) {
      result.converged = true;
      break;
    }
  }
  return result;
}

}  // namespace ripd

#endif  // RIPD_KM_HPP
