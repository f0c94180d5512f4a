#pragma once

#include <array>
#include <cmath>
#include <functional>

namespace chemomech {

using Vec3 = std::array<double, 3>;

/// Second-order tensor in R^{3x3}, row-major: (i, j) lives at 3 * i + j.
class Tensor2 {
 public:
  constexpr Tensor2() = default;
  constexpr explicit Tensor2(const std::array<double, 9>& entries) : a_(entries) {}

  static constexpr Tensor2 zero() { return Tensor2{}; }
  static constexpr Tensor2 identity() { return diag(1.0, 1.0, 1.0); }
  static constexpr Tensor2 diag(double a, double b, double c) {
    Tensor2 t;
    t(0, 0) = a;
    t(1, 1) = b;
    t(2, 2) = c;
    return t;
  }
  static Tensor2 outer(const Vec3& u, const Vec3& v);

  constexpr double& operator()(int i, int j) { return a_[3 * i + j]; }
  constexpr double operator()(int i, int j) const { return a_[3 * i + j]; }
  constexpr const std::array<double, 9>& data() const { return a_; }

  Tensor2& operator+=(const Tensor2& o);
  Tensor2& operator-=(const Tensor2& o);
  Tensor2& operator*=(double s);

  bool is_diagonal() const;
  bool is_symmetric(double tol = 0.0) const;

  friend bool operator==(const Tensor2&, const Tensor2&) = default;

 private:
  std::array<double, 9> a_{};
};

Tensor2 operator+(Tensor2 a, const Tensor2& b);
Tensor2 operator-(Tensor2 a, const Tensor2& b);
Tensor2 operator-(Tensor2 a);
Tensor2 operator*(double s, Tensor2 a);
Tensor2 operator*(Tensor2 a, double s);
Tensor2 operator/(Tensor2 a, double s);
/// Matrix product.
Tensor2 operator*(const Tensor2& a, const Tensor2& b);
Vec3 operator*(const Tensor2& a, const Vec3& v);

Tensor2 transpose(const Tensor2& a);
double trace(const Tensor2& a);
double det(const Tensor2& a);
/// Cofactor matrix, cof(A) = det(A) A^{-T}.
Tensor2 cofactor(const Tensor2& a);
/// Throws std::domain_error when |det A| is zero.
Tensor2 inverse(const Tensor2& a);
/// A : B = sum_ij A_ij B_ij.
double ddot(const Tensor2& a, const Tensor2& b);
double norm(const Tensor2& a);
Tensor2 sym(const Tensor2& a);
Tensor2 deviator(const Tensor2& a);

/// Eigen-decomposition of a symmetric tensor: A = sum_a values[a] v_a (x) v_a with
/// v_a = column a of `vectors`.
struct SymmetricEigen {
  Vec3 values{};
  Tensor2 vectors = Tensor2::identity();
};

/// Closed-form (Cardano) eigenvalues with cross-product eigenvectors; falls back to
/// cyclic Jacobi when the spectrum is nearly degenerate or the closed form loses
/// accuracy. Exactly diagonal input short-circuits. Throws SpectralFailure when
/// Jacobi does not reach an off-diagonal norm of 1e-14 relative to ||A||.
SymmetricEigen eigen_symmetric(const Tensor2& a);

/// Cyclic Jacobi only; exposed for cross-checking the closed-form path.
SymmetricEigen eigen_symmetric_jacobi(const Tensor2& a);

/// f(S) = sum_a f(eta_a) r_a (x) r_a for symmetric S.
Tensor2 spectral_apply(const Tensor2& s, const std::function<double(double)>& f);

Tensor2 exp_symmetric(const Tensor2& s);
/// Throws SpectralFailure unless S is positive definite.
Tensor2 log_symmetric(const Tensor2& s);

}  // namespace chemomech
