#ifndef RIPD_ORACLE_HPP
#define RIPD_ORACLE_HPP

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <string>
#include <utility>
#include <vector>

#include "ripd/errors.hpp"
#include "ripd/problem_io.hpp"
#include "ripd/problems.hpp"

namespace ripd {

struct OracleSolution {
  BlockVector x;
  double certified_residual = 0.0;
  std::string method;
};

namespace oracle_detail {

struct QuadraticForm {
  Eigen::MatrixXd H;
  Eigen::VectorXd c;
  double constant = 0.0;
};

// Assembles the smooth part sum_j h_j(x_j) + sum_k g_k((Lx)_k) as a dense
// quadratic; requires every h in {zero, quadratic, least_squares} and every g
// in {zero, sql2, sql2_shift}.
inline QuadraticForm assemble_smooth(const CompositeProblem& prob) {
  const Index n = prob.primal_layout().total();
  QuadraticForm qf;
  qf.H = Eigen::MatrixXd::Zero(n, n);
  qf.c = Eigen::VectorXd::Zero(n);

  for (Index j = 0; j < prob.p(); ++j) {
    const OpDescriptor& d = prob.primal(j).h.descriptor();
    const Index off = prob.primal_layout().offset(j);
    const Index dim = prob.primal_layout().dim(j);
    if (d.op == "zero") continue;
    if (d.op == "quadratic") {
      qf.H.block(off, off, dim, dim) += d.matrix;
      qf.c.segment(off, dim) += d.vec;
    } else if (d.op == "least_squares") {
      qf.H.block(off, off, dim, dim) += d.matrix.transpose() * d.matrix;
      qf.c.segment(off, dim) -= d.matrix.transpose() * d.vec;
      qf.constant += 0.5 * d.vec.squaredNorm();
    } else {
      throw UnsupportedError("oracle: smooth term '" + d.op + "' is not quadratic");
    }
  }

  const Eigen::MatrixXd Ld = prob.L().dense();
  for (Index k = 0; k < prob.q(); ++k) {
    const OpDescriptor& d = prob.dual(k).g.descriptor();
    if (d.op == "zero") continue;
    const Eigen::MatrixXd G =
        Ld.middleRows(prob.dual_layout().offset(k), prob.dual_layout().dim(k));
    if (d.op == "sql2") {
      qf.H += d.weight * G.transpose() * G;
    } else if (d.op == "sql2_shift") {
      qf.H += d.weight * G.transpose() * G;
      qf.c -= d.weight * G.transpose() * d.vec;
      qf.constant += 0.5 * d.weight * d.vec.squaredNorm();
    } else {
      throw UnsupportedError("oracle: coupled term '" + d.op + "' is not smooth");
    }
  }
  return qf;
}

}  // namespace oracle_detail

/// Reference solution for supported problem families: a dense closed form
/// when the objective is purely quadratic, otherwise a long-run proximal
/// gradient loop when the nonsmooth part is separable over primal blocks.
inline OracleSolution oracle_solve(const LoadedProblem& lp, long max_iters = 1000000,
                                   double target_residual = 1e-13) {
  if (!lp.composite)
    throw UnsupportedError("oracle_solve: only composite problems have a reference solver");
  const CompositeProblem& prob = *lp.composite;
  if (!prob.objective_available())
    throw UnsupportedError("oracle_solve: only l = indicator{0} problems are supported");

  oracle_detail::QuadraticForm qf = oracle_detail::assemble_smooth(prob);
  const BlockLayout& layout = prob.primal_layout();

  if (prob.all_f_zero()) {
    Eigen::LDLT<Eigen::MatrixXd> ldlt(qf.H);
    if (ldlt.info() != Eigen::Success)
      throw UnsupportedError("oracle_solve: quadratic form is not positive definite");
    Eigen::VectorXd x = ldlt.solve(-qf.c);
    const double res = (qf.H * x + qf.c).norm();
    if (!(res <= 1e-10 * (1.0 + qf.c.norm())))
      throw UnsupportedError("oracle_solve: dense solve failed its residual certificate");
    OracleSolution sol{BlockVector(layout, std::move(x)), res, "dense-quadratic"};
    return sol;
  }

  // proximal gradient on f + smooth
  const double lip = symmetric_lambda_max(qf.H);
  if (!(lip > 0.0)) throw UnsupportedError("oracle_solve: smooth part has no curvature");
  const double gamma = 1.0 / lip;

  Eigen::VectorXd x = Eigen::VectorXd::Zero(layout.total());
  double res = kInf;
  for (long it = 0; it < max_iters; ++it) {
    const Eigen::VectorXd grad = qf.H * x + qf.c;
    Eigen::VectorXd next(layout.total());
    for (Index j = 0; j < prob.p(); ++j)
      next.segment(layout.offset(j), layout.dim(j)) = prob.primal(j).f.eval(
          x.segment(layout.offset(j), layout.dim(j)) -
              gamma * grad.segment(layout.offset(j), layout.dim(j)),
          gamma);
    res = (next - x).norm();
    x = std::move(next);
    if (res <= target_residual) break;
  }
  OracleSolution sol{BlockVector(layout, std::move(x)), res, "proximal-gradient"};
  return sol;
}

/// Objective of the composite problem at the oracle's own assembled form;
/// matches CompositeProblem::objective up to rounding.
inline double oracle_objective(const LoadedProblem& lp, const BlockVector& x) {
  const CompositeProblem& prob = *lp.composite;
  oracle_detail::QuadraticForm qf = oracle_detail::assemble_smooth(prob);
  double v = 0.5 * x.data().dot(qf.H * x.data()) + qf.c.dot(x.data()) + qf.constant;
  for (Index j = 0; j < prob.p(); ++j) v += prob.primal(j).f.value(x.block(j));
  return v;
}

// ---------------------------------------------------------------------------
// Independent deterministic reference loops (full activation, alpha = 0,
// constant relaxation). Coded on dense assembled operators, deliberately off
// the engine code path, for the reduction regression checks.
// ---------------------------------------------------------------------------

inline std::pair<BlockVector, BlockVector> reference_pd_composite(const CompositeProblem& prob,
                                                                  const Preconditioner& prec,
                                                                  BlockVector x, BlockVector y,
                                                                  double lambda, long iters) {
  const Eigen::MatrixXd Ld = prob.L().dense();
  const BlockLayout& pl = prob.primal_layout();
  const BlockLayout& dl = prob.dual_layout();
  for (long n = 0; n < iters; ++n) {
    const Eigen::VectorXd lty = Ld.transpose() * y.data();
    Eigen::VectorXd z(pl.total());
    for (Index j = 0; j < prob.p(); ++j) {
      const auto seg = [&](const Eigen::VectorXd& v) { return v.segment(pl.offset(j), pl.dim(j)); };
      const Eigen::VectorXd u = seg(lty) + prob.primal(j).h.grad(x.block(j));
      z.segment(pl.offset(j), pl.dim(j)) = prob.primal(j).f.eval_scaled(
          x.block(j) - prec.F.diag_block(j).cwiseProduct(u), prec.F.diag_block(j));
    }
    const Eigen::VectorXd lz = Ld * (2.0 * z - x.data());
    Eigen::VectorXd s(dl.total());
    for (Index k = 0; k < prob.q(); ++k) {
      const Eigen::VectorXd v =
          lz.segment(dl.offset(k), dl.dim(k)) - prob.dual(k).lstar.grad(y.block(k));
      s.segment(dl.offset(k), dl.dim(k)) = prox_conjugate_scaled(
          prob.dual(k).g, y.block(k) + prec.R.diag_block(k).cwiseProduct(v),
          prec.R.diag_block(k));
    }
    x.data() += lambda * (z - x.data());
    y.data() += lambda * (s - y.data());
  }
  return {std::move(x), std::move(y)};
}

inline std::pair<BlockVector, BlockVector> reference_pd_inclusion(const MonotoneBlockProblem& prob,
                                                                  const Preconditioner& prec,
                                                                  BlockVector x, BlockVector y,
                                                                  double lambda, long iters) {
  const Eigen::MatrixXd Ld = prob.L().dense();
  const BlockLayout& pl = prob.primal_layout();
  const BlockLayout& dl = prob.dual_layout();
  for (long n = 0; n < iters; ++n) {
    const Eigen::VectorXd lty = Ld.transpose() * y.data();
    Eigen::VectorXd z(pl.total());
    for (Index j = 0; j < prob.p(); ++j) {
      const Eigen::VectorXd u =
          lty.segment(pl.offset(j), pl.dim(j)) + prob.primal(j).C.grad(x.block(j));
      z.segment(pl.offset(j), pl.dim(j)) = prob.primal(j).A.eval_scaled(
          x.block(j) - prec.F.diag_block(j).cwiseProduct(u), prec.F.diag_block(j));
    }
    const Eigen::VectorXd lz = Ld * (2.0 * z - x.data());
    Eigen::VectorXd s(dl.total());
    for (Index k = 0; k < prob.q(); ++k) {
      const Eigen::VectorXd v =
          lz.segment(dl.offset(k), dl.dim(k)) - prob.dual(k).Dinv.grad(y.block(k));
      s.segment(dl.offset(k), dl.dim(k)) = prob.dual(k).Binv.eval_scaled(
          y.block(k) + prec.R.diag_block(k).cwiseProduct(v), prec.R.diag_block(k));
    }
    x.data() += lambda * (z - x.data());
    y.data() += lambda * (s - y.data());
  }
  return {std::move(x), std::move(y)};
}

inline std::pair<BlockVector, BlockVector> reference_pd_smooth(const CompositeProblem& prob,
                                                               const Preconditioner& prec,
                                                               BlockVector x, BlockVector y,
                                                               double lambda, long iters) {
  const Eigen::MatrixXd Ld = prob.L().dense();
  const BlockLayout& pl = prob.primal_layout();
  const BlockLayout& dl = prob.dual_layout();
  for (long n = 0; n < iters; ++n) {
    Eigen::VectorXd z(pl.total());
    for (Index j = 0; j < prob.p(); ++j)
      z.segment(pl.offset(j), pl.dim(j)) =
          x.block(j) - prec.F.diag_block(j).cwiseProduct(prob.primal(j).h.grad(x.block(j)));
    const Eigen::VectorXd lty = Ld.transpose() * y.data();
    Eigen::VectorXd inner(pl.total());
    for (Index j = 0; j < prob.p(); ++j)
      inner.segment(pl.offset(j), pl.dim(j)) =
          z.segment(pl.offset(j), pl.dim(j)) -
          prec.F.diag_block(j).cwiseProduct(lty.segment(pl.offset(j), pl.dim(j)));
    const Eigen::VectorXd li = Ld * inner;
    Eigen::VectorXd s(dl.total());
    for (Index k = 0; k < prob.q(); ++k) {
      const Eigen::VectorXd v =
          li.segment(dl.offset(k), dl.dim(k)) - prob.dual(k).lstar.grad(y.block(k));
      s.segment(dl.offset(k), dl.dim(k)) = prox_conjugate_scaled(
          prob.dual(k).g, y.block(k) + prec.R.diag_block(k).cwiseProduct(v),
          prec.R.diag_block(k));
    }
    const Eigen::VectorXd lts = Ld.transpose() * s;
    Eigen::VectorXd x_next(pl.total());
    for (Index j = 0; j < prob.p(); ++j)
      x_next.segment(pl.offset(j), pl.dim(j)) =
          x.block(j) + lambda * (z.segment(pl.offset(j), pl.dim(j)) -
                                 prec.F.diag_block(j).cwiseProduct(
                                     lts.segment(pl.offset(j), pl.dim(j))) -
                                 x.block(j));
    x.data() = std::move(x_next);
    y.data() += lambda * (s - y.data());
  }
  return {std::move(x), std::move(y)};
}

/// Plain deterministic forward-backward loop: x <- x + lambda (J(x - theta B x) - x).
inline BlockVector reference_fb(const ForwardBackwardProblem& fb, BlockVector x, double theta,
                                double lambda, long iters) {
  for (long n = 0; n < iters; ++n) {
    BlockVector z = fb.forward(x);
    BlockVector u(x.layout(), x.data() - theta * z.data());
    BlockVector t = BlockVector::zero(x.layout());
    for (Index i = 0; i < x.blocks(); ++i) t.block(i) = fb.resolvent_block(i, u, theta);
    x.data() += lambda * (t.data() - x.data());
  }
  return x;
}

}  // namespace ripd

#endif  // RIPD_ORACLE_HPP
