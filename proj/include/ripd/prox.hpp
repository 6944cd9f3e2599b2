#ifndef RIPD_PROX_HPP
#define RIPD_PROX_HPP

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <string>
#include <utility>

#include "ripd/errors.hpp"
#include "ripd/operator_descriptor.hpp"

namespace ripd {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// Componentwise soft threshold: argmin_y gamma*|y|_1 + 0.5*|x - y|^2.
inline Eigen::VectorXd prox_l1(const Eigen::VectorXd& x, double gamma) {
  if (!(gamma > 0.0)) throw InvalidInputError("prox_l1: step must be > 0");
  return x.unaryExpr([gamma](double v) {
    const double m = std::abs(v) - gamma;
    return m > 0.0 ? (v > 0.0 ? m : -m) : 0.0;
  });
}

/// Proximity operator of a convex function, evaluable at any positive step
/// and, for coordinatewise-separable functions, at per-coordinate steps
/// (the diagonal-metric prox). Firmly nonexpansive at every step.
class ProxOperator {
 public:
  // (coordinate, x_i, step_i) -> scalar prox of the i-th summand
  using ScalarKernel = std::function<double(Eigen::Index, double, double)>;
  using VectorEval = std::function<Eigen::VectorXd(const Eigen::VectorXd&, double)>;
  using ValueFn = std::function<double(const Eigen::VectorXd&)>;

  static ProxOperator separable(OpDescriptor desc, ScalarKernel kernel, ValueFn value,
                                ValueFn conj_value) {
    ProxOperator p;
    p.desc_ = std::move(desc);
    p.kernel_ = std::move(kernel);
    p.value_ = std::move(value);
    p.conj_value_ = std::move(conj_value);
    p.separable_ = true;
    return p;
  }

  static ProxOperator general(OpDescriptor desc, VectorEval eval, ValueFn value,
                              ValueFn conj_value) {
    ProxOperator p;
    p.desc_ = std::move(desc);
    p.vector_eval_ = std::move(eval);
    p.value_ = std::move(value);
    p.conj_value_ = std::move(conj_value);
    p.separable_ = false;
    return p;
  }

  Eigen::VectorXd eval(const Eigen::VectorXd& x, double step) const {
    if (!(step > 0.0)) throw InvalidInputError("ProxOperator::eval: step must be > 0");
    if (!separable_) return vector_eval_(x, step);
    Eigen::VectorXd out(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) out[i] = kernel_(i, x[i], step);
    return out;
  }

  /// Prox in the metric of a positive diagonal: coordinate i uses step steps[i].
  Eigen::VectorXd eval_scaled(const Eigen::VectorXd& x, const Eigen::VectorXd& steps) const {
    if (steps.size() != x.size())
      throw InvalidInputError("ProxOperator::eval_scaled: step vector length mismatch");
    if (!(steps.array() > 0.0).all())
      throw InvalidInputError("ProxOperator::eval_scaled: steps must be > 0");
    if (separable_) {
      Eigen::VectorXd out(x.size());
      for (Eigen::Index i = 0; i < x.size(); ++i) out[i] = kernel_(i, x[i], steps[i]);
      return out;
    }
    const double first = steps[0];
    if ((steps.array() == first).all()) return eval(x, first);
    throw UnsupportedError("ProxOperator::eval_scaled: " + desc_.op +
                           " is not separable; a nonconstant diagonal metric is unsupported");
  }

  double value(const Eigen::VectorXd& x) const { return value_(x); }
  /// Conjugate value g*(y); +inf outside the domain.
  double conj_value(const Eigen::VectorXd& y) const { return conj_value_(y); }

  bool separable() const { return separable_; }
  const OpDescriptor& descriptor() const { return desc_; }
  const std::string& name() const { return desc_.op; }

 private:
  ProxOperator() = default;

  OpDescriptor desc_;
  ScalarKernel kernel_;
  VectorEval vector_eval_;
  ValueFn value_;
  ValueFn conj_value_;
  bool separable_ = true;
};

/// f = 0; prox is the identity, f* the indicator of the origin.
inline ProxOperator make_prox_zero() {
  OpDescriptor d;
  d.op = "zero";
  return ProxOperator::separable(
      d, [](Eigen::Index, double x, double) { return x; },
      [](const Eigen::VectorXd&) { return 0.0; },
      [](const Eigen::VectorXd& y) { return (y.array() == 0.0).all() ? 0.0 : kInf; });
}

/// f = weight * |x|_1.
inline ProxOperator make_prox_l1(double weight) {
  if (!(weight > 0.0)) throw InvalidInputError("make_prox_l1: weight must be > 0");
  OpDescriptor d;
  d.op = "l1";
  d.weight = weight;
  return ProxOperator::separable(
      d,
      [weight](Eigen::Index, double x, double step) {
        const double m = std::abs(x) - step * weight;
        return m > 0.0 ? (x > 0.0 ? m : -m) : 0.0;
      },
      [weight](const Eigen::VectorXd& x) { return weight * x.lpNorm<1>(); },
      [weight](const Eigen::VectorXd& y) {
        return y.lpNorm<Eigen::Infinity>() <= weight ? 0.0 : kInf;
      });
}

/// f = (weight/2) * |x|^2.
inline ProxOperator make_prox_sql2(double weight) {
  if (!(weight > 0.0)) throw InvalidInputError("make_prox_sql2: weight must be > 0");
  OpDescriptor d;
  d.op = "sql2";
  d.weight = weight;
  return ProxOperator::separable(
      d, [weight](Eigen::Index, double x, double step) { return x / (1.0 + step * weight); },
      [weight](const Eigen::VectorXd& x) { return 0.5 * weight * x.squaredNorm(); },
      [weight](const Eigen::VectorXd& y) { return 0.5 / weight * y.squaredNorm(); });
}

/// f = (weight/2) * |x - center|^2.
inline ProxOperator make_prox_sql2_shift(double weight, Eigen::VectorXd center) {
  if (!(weight > 0.0)) throw InvalidInputError("make_prox_sql2_shift: weight must be > 0");
  OpDescriptor d;
  d.op = "sql2_shift";
  d.weight = weight;
  d.vec = center;
  auto c = std::make_shared<Eigen::VectorXd>(std::move(center));
  return ProxOperator::separable(
      d,
      [weight, c](Eigen::Index i, double x, double step) {
        if (i >= c->size()) throw InvalidInputError("sql2_shift prox: dimension exceeds center");
        return (x + step * weight * (*c)[i]) / (1.0 + step * weight);
      },
      [weight, c](const Eigen::VectorXd& x) { return 0.5 * weight * (x - *c).squaredNorm(); },
      [weight, c](const Eigen::VectorXd& y) { return y.dot(*c) + 0.5 / weight * y.squaredNorm(); });
}

/// Indicator of the box [lo, hi]^n; prox is the clamp, conjugate the support
/// function.
inline ProxOperator make_prox_box(double lo, double hi) {
  if (!(lo <= hi)) throw InvalidInputError("make_prox_box: need lo <= hi");
  OpDescriptor d;
  d.op = "box";
  d.lo = lo;
  d.hi = hi;
  return ProxOperator::separable(
      d, [lo, hi](Eigen::Index, double x, double) { return std::clamp(x, lo, hi); },
      [lo, hi](const Eigen::VectorXd& x) {
        return (x.array() >= lo && x.array() <= hi).all() ? 0.0 : kInf;
      },
      [lo, hi](const Eigen::VectorXd& y) {
        double s = 0.0;
        for (Eigen::Index i = 0; i < y.size(); ++i) s += y[i] > 0.0 ? hi * y[i] : lo * y[i];
        return s;
      });
}

/// Diagonal-metric prox: coordinate i of the result is the scalar prox of f's
/// i-th summand at x_i with step F_diag[i]. With a constant diagonal gamma this
/// is prox_{gamma f}(x).
inline Eigen::VectorXd prox_scaled(const ProxOperator& f, const Eigen::VectorXd& F_diag,
                                   const Eigen::VectorXd& x) {
  return f.eval_scaled(x, F_diag);
}

/// Prox of the Fenchel conjugate, via the exact decomposition
/// x = prox_{gamma g*}(x) + gamma * prox_{g/gamma}(x/gamma).
inline Eigen::VectorXd prox_conjugate(const ProxOperator& g, const Eigen::VectorXd& x,
                                      double gamma) {
  if (!(gamma > 0.0)) throw InvalidInputError("prox_conjugate: step must be > 0");
  return x - gamma * g.eval(x / gamma, 1.0 / gamma);
}

/// Conjugate prox in a positive diagonal metric; per-coordinate Moreau steps.
inline Eigen::VectorXd prox_conjugate_scaled(const ProxOperator& g, const Eigen::VectorXd& x,
                                             const Eigen::VectorXd& step_diag) {
  if (step_diag.size() != x.size())
    throw InvalidInputError("prox_conjugate_scaled: step vector length mismatch");
  if (!(step_diag.array() > 0.0).all())
    throw InvalidInputError("prox_conjugate_scaled: steps must be > 0");
  if (!g.separable()) {
    const double first = step_diag[0];
    if ((step_diag.array() == first).all()) return prox_conjugate(g, x, first);
    throw UnsupportedError(
        "prox_conjugate_scaled: nonseparable function with nonconstant diagonal metric");
  }
  const Eigen::VectorXd inv = step_diag.cwiseInverse();
  return x - step_diag.cwiseProduct(g.eval_scaled(inv.cwiseProduct(x), inv));
}

}  // namespace ripd

#endif  // RIPD_PROX_HPP
