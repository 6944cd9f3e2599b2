#ifndef RIPD_SCHEDULE_HPP
#define RIPD_SCHEDULE_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>
#include <string>
#include <utility>

#include "ripd/errors.hpp"

namespace ripd {

/// Minimum admissible delta for an inertial cap alpha and slack tau:
/// delta > (alpha^2 (1 + alpha) + alpha tau) / (1 - alpha^2).
inline double inertial_delta_lower_bound(double alpha, double tau) {
  return (alpha * alpha * (1.0 + alpha) + alpha * tau) / (1.0 - alpha * alpha);
}

/// Relaxation ceiling for (alpha, tau, delta):
/// (delta - alpha [alpha(1+alpha) + alpha delta + tau]) /
/// (delta [1 + alpha(1+alpha) + alpha delta + tau]).
inline double inertial_lambda_ceiling(double alpha, double tau, double delta) {
  const double bracket = alpha * (1.0 + alpha) + alpha * delta + tau;
  return (delta - alpha * bracket) / (delta * (1.0 + bracket));
}

/// Inertia and relaxation rules for the inertial fixed-point engines.
///
/// alpha_rule(n) must start at 0, be nondecreasing, and stay below alpha_cap;
/// lambda_rule(n) must lie in [lambda_floor, ceiling(alpha_cap, tau, delta)].
/// The default alpha ramp reaches the cap after 50 iterations.
struct InertialSchedule {
  double alpha_cap = 0.0;
  double tau = 0.1;
  double delta = 1.0;
  double lambda_floor = 1e-4;
  std::function<double(long)> alpha_rule;   // n >= 1
  std::function<double(long)> lambda_rule;  // n >= 1

  double alpha_at(long n) const {
    if (alpha_rule) return alpha_rule(n);
    return std::min(alpha_cap, (static_cast<double>(n) - 1.0) * alpha_cap / 50.0);
  }

  double lambda_at(long n) const {
    if (lambda_rule) return lambda_rule(n);
    return lambda_floor;
  }

  /// Constant-relaxation schedule; the floor equals the constant.
  static InertialSchedule constant_lambda(double alpha, double tau, double delta, double lambda) {
    InertialSchedule s;
    s.alpha_cap = alpha;
    s.tau = tau;
    s.delta = delta;
    s.lambda_floor = lambda;
    s.lambda_rule = [lambda](long) { return lambda; };
    return s;
  }
};

struct ValidationReport {
  bool ok = true;
  std::string constraint;  // first violated constraint family
  long at_iteration = 0;
  double value = 0.0;
  double bound = 0.0;
  std::string message;

  static ValidationReport pass() { return {}; }

  static ValidationReport fail(std::string constraint, long n, double value, double bound,
                               std::string detail) {
    ValidationReport r;
    r.ok = false;
    r.constraint = std::move(constraint);
    r.at_iteration = n;
    r.value = value;
    r.bound = bound;
    std::ostringstream os;
    os << r.constraint << " violated";
    if (n > 0) os << " at n=" << n;
    os << ": " << detail;
    r.message = os.str();
    return r;
  }
};

namespace detail {

// Inertia-side checks shared by the plain and averaged validators.
inline ValidationReport validate_inertia(const InertialSchedule& s, long horizon) {
  if (horizon < 1) throw InvalidInputError("validate_schedule: horizon must be >= 1");

  if (!(s.alpha_cap >= 0.0 && s.alpha_cap < 1.0))
    return ValidationReport::fail("alpha-cap", 0, s.alpha_cap, 1.0,
                                  "alpha cap must lie in [0, 1)");
  if (!(s.tau > 0.0)) return ValidationReport::fail("tau", 0, s.tau, 0.0, "tau must be > 0");

  const double dmin = inertial_delta_lower_bound(s.alpha_cap, s.tau);
  if (!(s.delta > dmin)) {
    std::ostringstream os;
    os << "delta=" << s.delta << " must exceed (alpha^2(1+alpha)+alpha*tau)/(1-alpha^2)=" << dmin;
    return ValidationReport::fail("delta", 0, s.delta, dmin, os.str());
  }
  if (!(s.lambda_floor > 0.0))
    return ValidationReport::fail("lambda-floor", 0, s.lambda_floor, 0.0,
                                  "lambda floor must be > 0");

  double prev_alpha = 0.0;
  for (long n = 1; n <= horizon; ++n) {
    const double a = s.alpha_at(n);
    if (n == 1 && a != 0.0)
      return ValidationReport::fail("alpha-start", 1, a, 0.0, "alpha_1 must equal 0");
    if (a < prev_alpha)
      return ValidationReport::fail("alpha-monotone", n, a, prev_alpha,
                                    "alpha_n must be nondecreasing");
    if (a > s.alpha_cap)
      return ValidationReport::fail("alpha-cap", n, a, s.alpha_cap,
                                    "alpha_n must stay below the cap");
    prev_alpha = a;
  }
  return ValidationReport::pass();
}

}  // namespace detail

/// Checks the full inertial parameter constraints at every n <= horizon and
/// returns the first violation found, if any.
inline ValidationReport validate_schedule(const InertialSchedule& s, long horizon) {
  ValidationReport base = detail::validate_inertia(s, horizon);
  if (!base.ok) return base;

  const double ceiling = inertial_lambda_ceiling(s.alpha_cap, s.tau, s.delta);
  if (s.lambda_floor > ceiling) {
    std::ostringstream os;
    os << "infeasible schedule: lambda floor " << s.lambda_floor
       << " exceeds the relaxation ceiling " << ceiling;
    return ValidationReport::fail("feasibility", 0, s.lambda_floor, ceiling, os.str());
  }

  for (long n = 1; n <= horizon; ++n) {
    const double l = s.lambda_at(n);
    if (!(l > 0.0) || l > 1.0)
      return ValidationReport::fail("lambda-range", n, l, 1.0, "lambda_n must lie in (0, 1]");
    if (l < s.lambda_floor)
      return ValidationReport::fail("lambda-floor", n, l, s.lambda_floor,
                                    "lambda_n fell below the floor");
    if (l > ceiling) {
      std::ostringstream os;
      os << "lambda_n=" << l << " exceeds the ceiling "
         << "(delta - alpha[alpha(1+alpha)+alpha*delta+tau]) / "
            "(delta[1+alpha(1+alpha)+alpha*delta+tau]) = "
         << ceiling;
      return ValidationReport::fail("lambda-ceiling", n, l, ceiling, os.str());
    }
  }
  return ValidationReport::pass();
}

struct LambdaWindow {
  double lo = 0.0;
  double hi = 0.0;
  bool feasible() const { return lo <= hi && lo > 0.0; }
};

/// Admissible relaxation window for a beta-averaged operator family with
/// margin b: max(floor, b/beta) <= lambda_n, and the rescaled relaxation
/// beta*lambda_n capped by both 1-b and the inertial ceiling.
inline LambdaWindow averaged_lambda_window(const InertialSchedule& s, double beta, double b) {
  if (!(beta > 0.0 && beta <= 1.0))
    throw InvalidInputError("averaged_lambda_window: beta must lie in (0, 1]");
  if (!(b > 0.0 && b < 1.0))
    throw InvalidInputError("averaged_lambda_window: b must lie in (0, 1)");
  const double ceiling = inertial_lambda_ceiling(s.alpha_cap, s.tau, s.delta);
  LambdaWindow w;
  w.lo = std::max(s.lambda_floor, b / beta);
  w.hi = std::min(ceiling / beta, (1.0 - b) / beta);
  return w;
}

/// Schedule validation for averaged families: inertia checks plus the
/// per-iteration window above in place of the plain lambda ceiling.
inline ValidationReport validate_averaged_schedule(const InertialSchedule& s,
                                                   const std::function<double(long)>& beta_rule,
                                                   double b, long horizon) {
  ValidationReport base = detail::validate_inertia(s, horizon);
  if (!base.ok) return base;
  for (long n = 1; n <= horizon; ++n) {
    const double beta = beta_rule(n);
    const LambdaWindow w = averaged_lambda_window(s, beta, b);
    if (!w.feasible()) {
      std::ostringstream os;
      os << "infeasible averaged window at n=" << n << ": [" << w.lo << ", " << w.hi << "]";
      return ValidationReport::fail("averaged-window", n, w.lo, w.hi, os.str());
    }
    const double l = s.lambda_at(n);
    if (l < w.lo || l > w.hi) {
      std::ostringstream os;
      os << "lambda_n=" << l << " outside the averaged window [" << w.lo << ", " << w.hi << "]";
      return ValidationReport::fail("averaged-window", n, l, w.hi, os.str());
    }
  }
  return ValidationReport::pass();
}

}  // namespace ripd

#endif  // RIPD_SCHEDULE_HPP
