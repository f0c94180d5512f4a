#pragma once

#include <vector>

namespace chemomech {

/// Gauss-Legendre rule on [-1, 1].
struct QuadratureRule {
  std::vector<double> points;
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule, exact for polynomials of degree 2n - 1.
QuadratureRule gauss_legendre(int n);

/// Lagrange shape functions of degree p on equispaced nodes of [-1, 1].
class LagrangeBasis {
 public:
  explicit LagrangeBasis(int degree);

  int degree() const { return degree_; }
  int size() const { return degree_ + 1; }
  const std::vector<double>& nodes() const { return nodes_; }

  void values(double xi, std::vector<double>& out) const;
  void derivatives(double xi, std::vector<double>& out) const;

 private:
  int degree_;
  std::vector<double> nodes_;
  std::vector<double> denominators_;
};

}  // namespace chemomech
