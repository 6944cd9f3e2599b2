#ifndef RIPD_RESOLVENT_HPP
#define RIPD_RESOLVENT_HPP

#include <Eigen/Core>
#include <Eigen/LU>
#include <functional>
#include <memory>
#include <string>
#include <utility>

#include "ripd/errors.hpp"
#include "ripd/operator_descriptor.hpp"
#include "ripd/prox.hpp"

namespace ripd {

/// Resolvent (I + gamma A)^{-1} of a maximally monotone operator A, evaluable
/// at scalar or positive-diagonal steps. Firmly nonexpansive for every step.
class MonotoneResolvent {
 public:
  using Eval = std::function<Eigen::VectorXd(const Eigen::VectorXd&, double)>;
  using ScaledEval = std::function<Eigen::VectorXd(const Eigen::VectorXd&, const Eigen::VectorXd&)>;

  /// A = subdifferential of f; the resolvent is f's prox.
  static MonotoneResolvent from_prox(ProxOperator f) {
    auto fp = std::make_shared<ProxOperator>(std::move(f));
    OpDescriptor d;
    d.op = "prox_of";
    d.inner = std::make_shared<OpDescriptor>(fp->descriptor());
    MonotoneResolvent r;
    r.desc_ = std::move(d);
    r.eval_ = [fp](const Eigen::VectorXd& x, double g) { return fp->eval(x, g); };
    r.scaled_ = [fp](const Eigen::VectorXd& x, const Eigen::VectorXd& s) {
      return fp->eval_scaled(x, s);
    };
    r.prox_ = fp;
    return r;
  }

  /// A = (subdifferential of g)^{-1}; the resolvent is the conjugate prox.
  static MonotoneResolvent conjugate_of(ProxOperator g) {
    auto gp = std::make_shared<ProxOperator>(std::move(g));
    OpDescriptor d;
    d.op = "conjugate_of";
    d.inner = std::make_shared<OpDescriptor>(gp->descriptor());
    MonotoneResolvent r;
    r.desc_ = std::move(d);
    r.eval_ = [gp](const Eigen::VectorXd& x, double g2) { return prox_conjugate(*gp, x, g2); };
    r.scaled_ = [gp](const Eigen::VectorXd& x, const Eigen::VectorXd& s) {
      return prox_conjugate_scaled(*gp, x, s);
    };
    r.prox_ = gp;
    return r;
  }

  /// A = M for an explicit PSD matrix; dense solve of (I + gamma M) z = x.
  static MonotoneResolvent linear(Eigen::MatrixXd M) {
    if (M.rows() != M.cols()) throw InvalidInputError("MonotoneResolvent::linear: M must be square");
    OpDescriptor d;
    d.op = "linear";
    d.matrix = M;
    auto Mp = std::make_shared<Eigen::MatrixXd>(std::move(M));
    MonotoneResolvent r;
    r.desc_ = std::move(d);
    r.eval_ = [Mp](const Eigen::VectorXd& x, double g) -> Eigen::VectorXd {
      if (x.size() != Mp->rows())
        throw InvalidInputError("MonotoneResolvent::linear: dimension mismatch");
      const Eigen::MatrixXd A = Eigen::MatrixXd::Identity(Mp->rows(), Mp->cols()) + g * (*Mp);
      return Eigen::PartialPivLU<Eigen::MatrixXd>(A).solve(x);
    };
    r.scaled_ = [Mp](const Eigen::VectorXd& x, const Eigen::VectorXd& s) -> Eigen::VectorXd {
      if (x.size() != Mp->rows())
        throw InvalidInputError("MonotoneResolvent::linear: dimension mismatch");
      const Eigen::MatrixXd A =
          Eigen::MatrixXd::Identity(Mp->rows(), Mp->cols()) + s.asDiagonal() * (*Mp);
      return Eigen::PartialPivLU<Eigen::MatrixXd>(A).solve(x);
    };
    return r;
  }

  /// A = 0; the resolvent is the identity.
  static MonotoneResolvent zero() { return from_prox(make_prox_zero()); }

  Eigen::VectorXd eval(const Eigen::VectorXd& x, double step) const {
    if (!(step > 0.0)) throw InvalidInputError("MonotoneResolvent::eval: step must be > 0");
    return eval_(x, step);
  }

  /// J_{diag(s) A}(x): resolvent with a per-coordinate positive step.
  Eigen::VectorXd eval_scaled(const Eigen::VectorXd& x, const Eigen::VectorXd& steps) const {
    if (!(steps.array() > 0.0).all())
      throw InvalidInputError("MonotoneResolvent::eval_scaled: steps must be > 0");
    return scaled_(x, steps);
  }

  const OpDescriptor& descriptor() const { return desc_; }
  const std::string& name() const { return desc_.op; }

  /// Underlying prox when A came from one; null for linear resolvents.
  const std::shared_ptr<ProxOperator>& prox() const { return prox_; }

 private:
  MonotoneResolvent() = default;

  OpDescriptor desc_;
  Eval eval_;
  ScaledEval scaled_;
  std::shared_ptr<ProxOperator> prox_;
};

}  // namespace ripd

#endif  // RIPD_RESOLVENT_HPP
