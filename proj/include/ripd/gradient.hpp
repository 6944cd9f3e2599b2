#ifndef RIPD_GRADIENT_HPP
#define RIPD_GRADIENT_HPP

#include <Eigen/Core>
#include <functional>
#include <string>
#include <utility>

#include "ripd/errors.hpp"
#include "ripd/operator_descriptor.hpp"
#include "ripd/prox.hpp"
#include "ripd/rng.hpp"

namespace ripd {

/// Largest eigenvalue of a symmetric PSD matrix, by power iteration with a
/// deterministic seeded start.
inline double symmetric_lambda_max(const Eigen::MatrixXd& Q, long iters = 5000,
                                   double tol = 1e-12) {
  if (Q.rows() == 0) return 0.0;
  Rng rng(0x51b9a1ed5ull);
  Eigen::VectorXd v(Q.rows());
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = rng.uniform(-1.0, 1.0);
  double vn = v.norm();
  if (vn == 0.0) return 0.0;
  v /= vn;
  double est = 0.0;
  for (long it = 0; it < iters; ++it) {
    Eigen::VectorXd u = Q * v;
    const double lam = u.norm();
    if (lam == 0.0) return 0.0;
    v = u / lam;
    if (it > 0 && std::abs(lam - est) <= tol * std::max(lam, 1e-300)) return lam;
    est = lam;
  }
  return est;
}

/// Single-valued Lipschitz map with a declared cocoercivity constant nu
/// (equivalently a 1/nu-Lipschitz gradient) and an objective evaluator for
/// diagnostics. nu = +inf marks the identically-zero map; step rules treat it
/// as unconstrained.
class SmoothGradient {
 public:
  using GradFn = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;
  using ValueFn = std::function<double(const Eigen::VectorXd&)>;

  SmoothGradient() : SmoothGradient(zero()) {}

  SmoothGradient(OpDescriptor desc, GradFn grad, ValueFn value, double nu)
      : desc_(std::move(desc)), grad_(std::move(grad)), value_(std::move(value)), nu_(nu) {
    if (!(nu_ > 0.0)) throw InvalidInputError("SmoothGradient: cocoercivity must be > 0");
  }

  Eigen::VectorXd grad(const Eigen::VectorXd& x) const { return grad_(x); }
  double value(const Eigen::VectorXd& x) const { return value_(x); }

  double cocoercivity() const { return nu_; }
  double lipschitz() const { return nu_ == kInf ? 0.0 : 1.0 / nu_; }
  bool is_zero() const { return nu_ == kInf; }

  const OpDescriptor& descriptor() const { return desc_; }
  const std::string& name() const { return desc_.op; }

  static SmoothGradient zero() {
    OpDescriptor d;
    d.op = "zero";
    return SmoothGradient(
        d, [](const Eigen::VectorXd& x) { return Eigen::VectorXd::Zero(x.size()).eval(); },
        [](const Eigen::VectorXd&) { return 0.0; }, kInf);
  }

 private:
  OpDescriptor desc_;
  GradFn grad_;
  ValueFn value_;
  double nu_;
};

/// Gradient of h(x) = 0.5 x'Qx + c'x for symmetric PSD Q.
inline SmoothGradient grad_quadratic(Eigen::MatrixXd Q, Eigen::VectorXd c) {
  if (Q.rows() != Q.cols()) throw InvalidInputError("grad_quadratic: Q must be square");
  if (c.size() != Q.rows()) throw InvalidInputError("grad_quadratic: c length mismatch");
  const double scale = Q.size() > 0 ? Q.cwiseAbs().maxCoeff() : 0.0;
  if ((Q - Q.transpose()).cwiseAbs().maxCoeff() > 1e-12 * (1.0 + scale))
    throw InvalidInputError("grad_quadratic: Q must be symmetric");

  const double lam = symmetric_lambda_max(Q);
  const double nu = lam > 0.0 ? 1.0 / lam : kInf;

  OpDescriptor d;
  d.op = "quadratic";
  d.matrix = Q;
  d.vec = c;
  auto Qp = std::make_shared<Eigen::MatrixXd>(std::move(Q));
  auto cp = std::make_shared<Eigen::VectorXd>(std::move(c));
  return SmoothGradient(
      d,
      [Qp, cp](const Eigen::VectorXd& x) -> Eigen::VectorXd { return (*Qp) * x + (*cp); },
      [Qp, cp](const Eigen::VectorXd& x) { return 0.5 * x.dot((*Qp) * x) + cp->dot(x); }, nu);
}

/// Gradient of h(x) = 0.5 |Kx - b|^2.
inline SmoothGradient grad_least_squares(Eigen::MatrixXd K, Eigen::VectorXd b) {
  if (b.size() != K.rows()) throw InvalidInputError("grad_least_squares: b length mismatch");
  const double lam = symmetric_lambda_max(K.transpose() * K);
  const double nu = lam > 0.0 ? 1.0 / lam : kInf;

  OpDescriptor d;
  d.op = "least_squares";
  d.matrix = K;
  d.vec = b;
  auto Kp = std::make_shared<Eigen::MatrixXd>(std::move(K));
  auto bp = std::make_shared<Eigen::VectorXd>(std::move(b));
  return SmoothGradient(
      d,
      [Kp, bp](const Eigen::VectorXd& x) -> Eigen::VectorXd {
        return Kp->transpose() * ((*Kp) * x - (*bp));
      },
      [Kp, bp](const Eigen::VectorXd& x) { return 0.5 * ((*Kp) * x - (*bp)).squaredNorm(); }, nu);
}

}  // namespace ripd

#endif  // RIPD_GRADIENT_HPP
