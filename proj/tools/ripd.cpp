// Command-line front end: problem validation, single runs with trace output,
// the benchmark suites, and the reference oracle solvers.

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ripd/bench.hpp"
#include "ripd/oracle.hpp"
#include "ripd/problem_io.hpp"
#include "ripd/runner.hpp"
#include "ripd/schedule.hpp"

namespace {

struct CommonArgs {
  std::string problem_path;
  ripd::RunConfig cfg;
};

void add_run_flags(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--problem", args.problem_path, "problem spec file")->required();
  cmd->add_option("--algo", args.cfg.algorithm,
                  "km | block-km | fb | pd-inclusion | pd-opt | pd-smooth");
  cmd->add_option("--seed", args.cfg.seed, "run seed");
  cmd->add_option("--max-iters", args.cfg.max_iters, "iteration budget");
  cmd->add_option("--tol", args.cfg.tol, "stopping tolerance on the residual");
  cmd->add_option("--alpha", args.cfg.alpha, "inertia cap");
  cmd->add_option("--tau", args.cfg.tau, "feasibility slack");
  cmd->add_option("--delta", args.cfg.delta, "feasibility parameter (0 = auto)");
  cmd->add_option("--lambda", args.cfg.lambda, "constant relaxation (0 = auto)");
  cmd->add_option("--theta", args.cfg.theta, "forward-backward step (0 = auto)");
  cmd->add_option("--plan", args.cfg.plan, "full | single | bernoulli:<q>[,<q>...]");
  cmd->add_flag("--minimal-coupling", args.cfg.minimal_coupling,
                "derive dependent activation bits exactly from the driver side");
  cmd->add_option("--trace-out", args.cfg.trace_path, "trace file destination");
  cmd->add_option("--check-every", args.cfg.check_every, "residual check cadence");
  cmd->add_flag("--override-condition-check", args.cfg.override_condition_check,
                "run even when the convergence condition gate fails");
}

int report_error(const std::exception& e, int code) {
  std::cerr << "error: " << e.what() << '\n';
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"randomized inertial block-coordinate primal-dual solvers"};
  app.require_subcommand(1);

  CommonArgs solve_args;
  CLI::App* solve = app.add_subcommand("solve", "run one algorithm on a problem file");
  add_run_flags(solve, solve_args);

  CommonArgs validate_args;
  CLI::App* validate = app.add_subcommand("validate", "check a problem file and schedule");
  add_run_flags(validate, validate_args);

  std::string oracle_path;
  CLI::App* oracle = app.add_subcommand("oracle", "reference solution for a problem file");
  oracle->add_option("--problem", oracle_path, "problem spec file")->required();

  std::string suite = "ridge";
  std::string seeds_csv = "1,2,3,4,5";
  double bench_tol = 1e-6;
  CLI::App* bench = app.add_subcommand("bench", "run a benchmark suite");
  bench->add_option("--suite", suite, "lasso | tv1d | ridge | projection-feasibility");
  bench->add_option("--seeds", seeds_csv, "comma-separated seed list");
  bench->add_option("--tol", bench_tol, "per-run stopping tolerance");

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve->parsed()) {
      ripd::LoadedProblem problem = ripd::load_problem(solve_args.problem_path);
      ripd::RunOutcome out = ripd::run(solve_args.cfg, problem);
      std::cout << out.summary << '\n';
      return out.exit_code;
    }

    if (validate->parsed()) {
      ripd::LoadedProblem problem = ripd::load_problem(validate_args.problem_path);
      std::cout << "problem: ok (kind " << problem.kind << ")\n";
      ripd::InertialSchedule sched = ripd::run_detail::schedule_from(validate_args.cfg);
      ripd::ValidationReport rep = ripd::validate_schedule(sched, validate_args.cfg.max_iters);
      if (!rep.ok) {
        std::cout << "schedule: " << rep.message << '\n';
        return ripd::kExitConfigRejected;
      }
      std::cout << "schedule: ok (lambda ceiling "
                << ripd::inertial_lambda_ceiling(sched.alpha_cap, sched.tau, sched.delta)
                << ")\n";
      if (problem.composite || problem.monotone) {
        const ripd::ConditionReport cond =
            problem.composite ? ripd::check_condition(*problem.composite, *problem.prec)
                              : ripd::check_condition(*problem.monotone, *problem.prec);
        std::cout << "condition: " << cond.summary() << '\n';
        if (!cond.pass && !validate_args.cfg.override_condition_check)
          return ripd::kExitConfigRejected;
      }
      return ripd::kExitConverged;
    }

    if (oracle->parsed()) {
      ripd::LoadedProblem problem = ripd::load_problem(oracle_path);
      ripd::OracleSolution sol = ripd::oracle_solve(problem);
      std::cout << "method: " << sol.method << "\ncertified residual: " << sol.certified_residual
                << "\nx:";
      for (ripd::Index i = 0; i < sol.x.data().size(); ++i) std::cout << ' ' << sol.x.data()[i];
      std::cout << '\n';
      return ripd::kExitConverged;
    }

    if (bench->parsed()) {
      std::vector<std::uint64_t> seeds;
      std::stringstream ss(seeds_csv);
      std::string tok;
      while (std::getline(ss, tok, ',')) seeds.push_back(std::stoull(tok));
      auto cells = ripd::run_benchmark(suite, seeds, bench_tol);
      std::cout << ripd::format_benchmark_table(cells);
      for (const auto& c : cells)
        if (c.converged != c.total || !c.det_reduction_ok) return ripd::kExitNotConverged;
      return ripd::kExitConverged;
    }
  } catch (const ripd::ConfigRejectedError& e) {
    return report_error(e, ripd::kExitConfigRejected);
  } catch (const ripd::InvalidInputError& e) {
    return report_error(e, ripd::kExitConfigRejected);
  } catch (const ripd::IoError& e) {
    return report_error(e, ripd::kExitIoError);
  } catch (const ripd::DivergenceError& e) {
    return report_error(e, ripd::kExitNotConverged);
  } catch (const ripd::UnsupportedError& e) {
    return report_error(e, ripd::kExitConfigRejected);
  } catch (const std::exception& e) {
    return report_error(e, ripd::kExitIoError);
  }
  return ripd::kExitIoError;
}
