#ifndef RIPD_OPERATOR_DESCRIPTOR_HPP
#define RIPD_OPERATOR_DESCRIPTOR_HPP

#include <Eigen/Core>
#include <memory>
#include <string>

namespace ripd {

/// Declarative identity of a toolbox operator. Drives serialization and lets
/// the oracle solvers recognize problem structure without probing evaluators.
struct OpDescriptor {
  std::string op = "zero";  // l1 | sql2 | sql2_shift | box | zero | quadratic |
                            // least_squares | linear | prox_of | conjugate_of
  double weight = 1.0;
  double lo = 0.0, hi = 0.0;                // box bounds
  Eigen::MatrixXd matrix;                   // Q, K, or M
  Eigen::VectorXd vec;                      // c, b, or shift center
  std::shared_ptr<OpDescriptor> inner;      // wrapped descriptor for prox_of/conjugate_of
};

inline bool operator==(const OpDescriptor& a, const OpDescriptor& b) {
  auto mat_eq = [](const Eigen::MatrixXd& x, const Eigen::MatrixXd& y) {
    return x.rows() == y.rows() && x.cols() == y.cols() && (x.array() == y.array()).all();
  };
  auto vec_eq = [](const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
    return x.size() == y.size() && (x.array() == y.array()).all();
  };
  if (a.op != b.op || a.weight != b.weight || a.lo != b.lo || a.hi != b.hi) return false;
  if (!mat_eq(a.matrix, b.matrix) || !vec_eq(a.vec, b.vec)) return false;
  if (static_cast<bool>(a.inner) != static_cast<bool>(b.inner)) return false;
  return !a.inner || *a.inner == *b.inner;
}

}  // namespace ripd

#endif  // RIPD_OPERATOR_DESCRIPTOR_HPP
