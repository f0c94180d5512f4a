#pragma once

#include <cstddef>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace chemomech {

using Vector = Eigen::VectorXd;
using SparseMatrix = Eigen::SparseMatrix<double>;

/// Semi-discrete system M y' = f(t, y) with a constant, possibly singular mass matrix.
///
/// The right-hand side may depend on the length `tau` of the step that ends at `t`
/// (rate-dependent internal variables); `commit` is called once per accepted step.
class DaeSystem {
 public:
  virtual ~DaeSystem() = default;

  virtual std::size_t size() const = 0;
  virtual const SparseMatrix& mass() const = 0;
  virtual void rhs(double t, double tau, const Vector& y, Vector& f) = 0;
  /// df/dy. The sparsity pattern must not change between calls.
  virtual SparseMatrix jacobian(double t, double tau, const Vector& y) = 0;
  virtual void commit(double /*t*/, double /*tau*/, const Vector& /*y*/) {}
};

}  // namespace chemomech
