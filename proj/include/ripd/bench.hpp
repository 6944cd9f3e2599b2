#ifndef RIPD_BENCH_HPP
#define RIPD_BENCH_HPP

#include <Eigen/Dense>
#include <algorithm>
#include <cstdint>
#include <iomanip>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "ripd/oracle.hpp"
#include "ripd/problem_io.hpp"
#include "ripd/rng.hpp"
#include "ripd/runner.hpp"

namespace ripd {

namespace bench_detail {

inline Eigen::MatrixXd random_matrix(Rng& rng, Index rows, Index cols, double scale) {
  Eigen::MatrixXd M(rows, cols);
  for (Index r = 0; r < rows; ++r)
    for (Index c = 0; c < cols; ++c) M(r, c) = scale * rng.normal();
  return M;
}

inline Eigen::VectorXd random_vector(Rng& rng, Index n, double scale) {
  Eigen::VectorXd v(n);
  for (Index i = 0; i < n; ++i) v[i] = scale * rng.normal();
  return v;
}

// Splits the columns of K into two primal blocks and wires one dual block.
inline LinearBlockOperator split_columns(const Eigen::MatrixXd& K, Index split) {
  std::vector<BlockEntry> entries;
  entries.push_back({0, 0, K.leftCols(split)});
  entries.push_back({0, 1, K.rightCols(K.cols() - split)});
  return LinearBlockOperator(BlockLayout::single(K.rows()),
                             BlockLayout({std::vector<Index>{split, K.cols() - split}}),
                             std::move(entries));
}

inline Preconditioner scaled_prec(const LinearBlockOperator& L, double target_norm) {
  const DiagonalOperator ones_f = DiagonalOperator::constant(L.col_layout(), 1.0);
  const DiagonalOperator ones_r = DiagonalOperator::constant(L.row_layout(), 1.0);
  const double nrm = operator_norm_estimate(L, ones_f, ones_r);
  const double s = target_norm / std::max(nrm, 1e-12);
  Preconditioner prec;
  prec.F = DiagonalOperator::constant(L.col_layout(), s);
  prec.R = DiagonalOperator::constant(L.row_layout(), s);
  return prec;
}

}  // namespace bench_detail

/// Seeded desk-scale problem instance for a named suite. All randomness in an
/// instance derives from the given seed.
inline LoadedProblem make_suite_problem(const std::string& suite, std::uint64_t seed) {
  Rng rng(seed ^ 0xb5297a4d3f8c2a11ull);
  LoadedProblem out;

  if (suite == "ridge") {
    const Index rows = 20, cols = 10;
    const double mu = 0.1;
    Eigen::MatrixXd K = bench_detail::random_matrix(rng, rows, cols, 1.0 / std::sqrt(20.0));
    Eigen::VectorXd b = bench_detail::random_vector(rng, rows, 1.0);
    LinearBlockOperator L = bench_detail::split_columns(K, cols / 2);

    std::vector<CompositePrimalSlot> ps(2);
    for (auto& s : ps) {
      s.f = make_prox_zero();
      s.h = grad_quadratic(mu * Eigen::MatrixXd::Identity(cols / 2, cols / 2),
                           Eigen::VectorXd::Zero(cols / 2));
    }
    std::vector<CompositeDualSlot> ds(1);
    ds[0].g = make_prox_sql2_shift(1.0, b);
    ds[0].lstar = SmoothGradient::zero();

    out.kind = "composite";
    out.prec = bench_detail::scaled_prec(L, 0.9);
    out.composite.emplace(std::move(ps), std::move(ds), std::move(L));
    return out;
  }

  if (suite == "lasso") {
    const Index rows = 20, cols = 10;
    Eigen::MatrixXd K = bench_detail::random_matrix(rng, rows, cols, 1.0 / std::sqrt(20.0));
    Eigen::VectorXd b = bench_detail::random_vector(rng, rows, 1.0);
    const double mu = 0.1 * (K.transpose() * b).lpNorm<Eigen::Infinity>();
    LinearBlockOperator L = bench_detail::split_columns(K, cols / 2);

    std::vector<CompositePrimalSlot> ps(2);
    for (auto& s : ps) {
      s.f = make_prox_l1(mu);
      s.h = SmoothGradient::zero();
    }
    std::vector<CompositeDualSlot> ds(1);
    ds[0].g = make_prox_sql2_shift(1.0, b);
    ds[0].lstar = SmoothGradient::zero();

    out.kind = "composite";
    out.prec = bench_detail::scaled_prec(L, 0.9);
    out.composite.emplace(std::move(ps), std::move(ds), std::move(L));
    return out;
  }

  if (suite == "tv1d") {
    const Index n = 50;
    Eigen::VectorXd signal(n);
    const double v1 = rng.uniform(-2.0, 2.0), v2 = rng.uniform(-2.0, 2.0),
                 v3 = rng.uniform(-2.0, 2.0);
    for (Index i = 0; i < n; ++i) signal[i] = i < n / 3 ? v1 : (i < 2 * n / 3 ? v2 : v3);
    for (Index i = 0; i < n; ++i) signal[i] += 0.1 * rng.normal();

    Eigen::MatrixXd D = Eigen::MatrixXd::Zero(n - 1, n);
    for (Index i = 0; i < n - 1; ++i) {
      D(i, i) = -1.0;
      D(i, i + 1) = 1.0;
    }
    std::vector<BlockEntry> entries;
    entries.push_back({0, 0, D});
    LinearBlockOperator L(BlockLayout::single(n - 1), BlockLayout::single(n),
                          std::move(entries));

    std::vector<CompositePrimalSlot> ps(1);
    ps[0].f = make_prox_sql2_shift(1.0, signal);
    ps[0].h = SmoothGradient::zero();
    std::vector<CompositeDualSlot> ds(1);
    ds[0].g = make_prox_l1(0.2);
    ds[0].lstar = SmoothGradient::zero();

    out.kind = "composite";
    out.prec = bench_detail::scaled_prec(L, 0.9);
    out.composite.emplace(std::move(ps), std::move(ds), std::move(L));
    return out;
  }

  if (suite == "projection-feasibility") {
    const Index n = 20, rows = 3;
    Eigen::MatrixXd A = bench_detail::random_matrix(rng, rows, n, 1.0);
    Eigen::VectorXd interior = bench_detail::random_vector(rng, n, 0.25);
    for (Index i = 0; i < n; ++i) interior[i] = std::clamp(interior[i], -0.9, 0.9);
    Eigen::VectorXd b = A * interior;  // the box and the affine set intersect

    // gradient of 0.5 dist^2 to {Ax = b}: x -> G x - g0 with G the orthogonal
    // projector onto range(A')
    Eigen::MatrixXd G =
        A.transpose() * (A * A.transpose()).ldlt().solve(A).eval();
    G = 0.5 * (G + G.transpose());
    Eigen::VectorXd g0 = A.transpose() * (A * A.transpose()).ldlt().solve(b);

    FixedPointProblem fp;
    fp.layout = BlockLayout({std::vector<Index>{n / 2, n / 2}});
    for (int i = 0; i < 2; ++i) {
      fp.A.push_back(MonotoneResolvent::from_prox(make_prox_box(-1.0, 1.0)));
      fp.B.push_back(SmoothGradient::zero());
    }
    fp.B_full = grad_quadratic(G, -g0);
    fp.theta = 1.0;

    out.kind = "fixed-point";
    out.fixed_point = std::move(fp);
    return out;
  }

  throw InvalidInputError("unknown benchmark suite '" + suite + "'");
}

struct BenchCell {
  std::string suite;
  bool inertial = false;
  bool block = false;
  int converged = 0;
  int total = 0;
  long median_iterations = 0;
  long median_prox_evals = 0;
  bool det_reduction_ok = false;
};

namespace bench_detail {

inline long median(std::vector<long> v) {
  if (v.empty()) return 0;
  std::sort(v.begin(), v.end());
  return v[v.size() / 2];
}

inline std::string suite_algorithm(const std::string& suite) {
  if (suite == "ridge") return "pd-smooth";
  if (suite == "lasso" || suite == "tv1d") return "pd-opt";
  if (suite == "projection-feasibility") return "fb";
  throw InvalidInputError("unknown benchmark suite '" + suite + "'");
}

// Deterministic-reduction regression: 200 engine iterations with inertia off
// and full activation must match the independent reference loop.
inline bool det_reduction_check(const std::string& suite, std::uint64_t seed) {
  const LoadedProblem prob = make_suite_problem(suite, seed);
  const double lambda = 0.8;
  const long iters = 200;
  InertialSchedule sched = InertialSchedule::constant_lambda(0.0, 0.1, 1.0, lambda);
  StopRule stop{1e-300, iters, iters + 1};

  if (prob.fixed_point) {
    const ForwardBackwardProblem fb = prob.fixed_point->to_forward_backward();
    const double theta = prob.fixed_point->theta;
    BlockVector x0 = BlockVector::zero(prob.fixed_point->layout);
    RunResult r =
        run_fb(x0, x0, sched, SamplingPlan::full(prob.fixed_point->layout.blocks()), fb, theta,
               stop);
    BlockVector ref = reference_fb(fb, x0, theta, lambda, iters);
    return (r.state.x_curr.data() - ref.data()).lpNorm<Eigen::Infinity>() <= 1e-12;
  }

  const CompositeProblem& comp = *prob.composite;
  const Preconditioner& prec = *prob.prec;
  BlockVector x0 = BlockVector::zero(comp.primal_layout());
  BlockVector y0 = BlockVector::zero(comp.dual_layout());
  const std::string algo = suite_algorithm(suite);
  SamplingPlan plan = enforce_coupling(
      SamplingPlan::full(comp.p() + comp.q()), comp.L(),
      algo == "pd-smooth" ? CouplingDirection::DualFollowsPrimal
                          : CouplingDirection::PrimalFollowsDual);
  PdRunResult r = algo == "pd-smooth"
                      ? run_pd_smooth(comp, prec, x0, y0, sched, plan, stop)
                      : run_pd_optimization(comp, prec, x0, y0, sched, plan, stop);
  auto [rx, ry] = algo == "pd-smooth"
                      ? reference_pd_smooth(comp, prec, x0, y0, lambda, iters)
                      : reference_pd_composite(comp, prec, x0, y0, lambda, iters);
  const double dx = (r.state.x_curr.data() - rx.data()).lpNorm<Eigen::Infinity>();
  const double dy = (r.state.y_curr.data() - ry.data()).lpNorm<Eigen::Infinity>();
  return std::max(dx, dy) <= 1e-12;
}

}  // namespace bench_detail

/// Runs one suite over the seed list and the four {inertia} x {block
/// sampling} cells; reports per-cell medians and the deterministic-reduction
/// regression outcome.
inline std::vector<BenchCell> run_benchmark(const std::string& suite,
                                            const std::vector<std::uint64_t>& seeds,
                                            double tol = 1e-6, long max_iters = 200000) {
  std::vector<BenchCell> cells;
  const bool reduction_ok = bench_detail::det_reduction_check(suite, seeds.empty() ? 1 : seeds[0]);

  for (int inertial = 0; inertial < 2; ++inertial) {
    for (int block = 0; block < 2; ++block) {
      BenchCell cell;
      cell.suite = suite;
      cell.inertial = inertial != 0;
      cell.block = block != 0;
      cell.det_reduction_ok = reduction_ok;
      std::vector<long> iters, proxes;
      for (std::uint64_t seed : seeds) {
        LoadedProblem prob = make_suite_problem(suite, seed);
        RunConfig cfg;
        cfg.algorithm = bench_detail::suite_algorithm(suite);
        cfg.alpha = cell.inertial ? 0.3 : 0.0;
        cfg.delta = 1.0;
        cfg.plan = cell.block ? "bernoulli:0.5" : "full";
        cfg.seed = seed;
        cfg.tol = tol;
        cfg.max_iters = max_iters;
        cfg.check_every = 10;
        RunOutcome out = run(cfg, prob);
        ++cell.total;
        if (out.converged) {
          ++cell.converged;
          iters.push_back(out.iterations);
          proxes.push_back(out.evals_prox);
        }
      }
      cell.median_iterations = bench_detail::median(iters);
      cell.median_prox_evals = bench_detail::median(proxes);
      cells.push_back(std::move(cell));
    }
  }
  return cells;
}

inline std::string format_benchmark_table(const std::vector<BenchCell>& cells) {
  std::ostringstream os;
  os << std::left << std::setw(24) << "suite" << std::setw(10) << "inertia" << std::setw(8)
     << "block" << std::setw(12) << "converged" << std::setw(14) << "med-iters" << std::setw(14)
     << "med-prox" << "det-reduction\n";
  for (const auto& c : cells) {
    os << std::left << std::setw(24) << c.suite << std::setw(10) << (c.inertial ? "on" : "off")
       << std::setw(8) << (c.block ? "on" : "off") << std::setw(12)
       << (std::to_string(c.converged) + "/" + std::to_string(c.total)) << std::setw(14)
       << c.median_iterations << std::setw(14) << c.median_prox_evals
       << (c.det_reduction_ok ? "pass" : "FAIL") << '\n';
  }
  return os.str();
}

}  // namespace ripd

#endif  // RIPD_BENCH_HPP
