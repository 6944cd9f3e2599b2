#ifndef RIPD_RUN_STATE_HPP
#define RIPD_RUN_STATE_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "ripd/block_vector.hpp"

namespace ripd {

struct StopRule {
  double tol = 1e-8;
  long max_iters = 10000;
  long check_every = 1;  // cadence of full-residual checks and trace rows
};

/// One recorded row of a fixed-point run.
struct TraceRow {
  long iteration = 0;
  double residual = 0.0;    // full ||T(w) - w|| at the recorded iteration
  double residual_x = 0.0;  // full ||T(x) - x|| (block engines; equals residual for km)
  double step_norm = 0.0;
  double alpha_n = 0.0;
  double lambda_n = 0.0;
  int active_blocks = 0;
  std::uint64_t mask_bits = 0;
};

/// Iterate pair and run diagnostics for the inertial engines.
struct RunState {
  BlockVector x_prev;
  BlockVector x_curr;
  long iteration = 1;
  std::uint64_t rng_seed = 0;
  std::vector<double> residual_history;   // per-step ||t - w|| over evaluated blocks
  std::vector<double> step_norm_history;  // per-step ||x_{n+1} - x_n||

  BlockVector last_w;  // extrapolated point of the most recent step
  std::uint64_t last_mask = 0;
  int last_active = 0;
  long block_evals = 0;       // in-step per-block operator evaluations
  long diagnostic_evals = 0;  // full-residual evaluations off the fast path

  static RunState start(BlockVector x0, BlockVector x1) {
    require_same_layout(x0, x1, "RunState::start");
    RunState s;
    s.x_prev = std::move(x0);
    s.x_curr = std::move(x1);
    s.last_w = s.x_curr;
    return s;
  }

  /// x1 defaults to x0, so the first inertial correction vanishes.
  static RunState start(BlockVector x0) {
    BlockVector copy = x0;
    return start(std::move(x0), std::move(copy));
  }
};

struct RunResult {
  RunState state;
  bool converged = false;
  std::vector<TraceRow> trace;
};

}  // namespace ripd

#endif  // RIPD_RUN_STATE_HPP
