#include "chemomech/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <utility>

namespace chemomech {

QuadratureRule gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: need at least one point");
  // P_n(x) and P_n'(x) by the three-term recurrence.
  auto legendre = [n](double x) {
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    return std::pair{p1, n * (x * p1 - p0) / (x * x - 1.0)};
  };
  QuadratureRule rule;
  rule.points.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    for (int it = 0; it < 100; ++it) {
      const auto [p, dp] = legendre(x);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double dp = legendre(x).second;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.points[i] = -x;
    rule.points[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.points[n / 2] = 0.0;
  return rule;
}

LagrangeBasis::LagrangeBasis(int degree) : degree_(degree) {
  if (degree < 1) throw std::invalid_argument("LagrangeBasis: degree must be at least 1");
  nodes_.resize(degree + 1);
  for (int i = 0; i <= degree; ++i) nodes_[i] = -1.0 + 2.0 * i / degree;
  denominators_.assign(degree + 1, 1.0);
  for (int i = 0; i <= degree; ++i)
    for (int j = 0; j <= degree; ++j)
      if (j != i) denominators_[i] *= nodes_[i] - nodes_[j];
}

void LagrangeBasis::values(double xi, std::vector<double>& out) const {
  out.assign(size(), 1.0);
  for (int i = 0; i <= degree_; ++i) {
    for (int j = 0; j <= degree_; ++j)
      if (j != i) out[i] *= xi - nodes_[j];
    out[i] /= denominators_[i];
  }
}

void LagrangeBasis::derivatives(double xi, std::vector<double>& out) const {
  out.assign(size(), 0.0);
  for (int i = 0; i <= degree_; ++i) {
    double sum = 0.0;
    for (int k = 0; k <= degree_; ++k) {
      if (k == i) continue;
      double prod = 1.0;
      for (int j = 0; j <= degree_; ++j)
        if (j != i && j != k) prod *= xi - nodes_[j];
      sum += prod;
    }
    out[i] = sum / denominators_[i];
  }
}

}  // namespace chemomech
