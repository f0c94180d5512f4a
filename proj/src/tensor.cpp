#include "chemomech/tensor.hpp"

#include <algorithm>
#include <numbers>
#include <stdexcept>

#include "chemomech/errors.hpp"

namespace chemomech {

Tensor2 Tensor2::outer(const Vec3& u, const Vec3& v) {
  Tensor2 t;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) t(i, j) = u[i] * v[j];
  return t;
}

Tensor2& Tensor2::operator+=(const Tensor2& o) {
  for (int k = 0; k < 9; ++k) a_[k] += o.a_[k];
  return *this;
}

Tensor2& Tensor2::operator-=(const Tensor2& o) {
  for (int k = 0; k < 9; ++k) a_[k] -= o.a_[k];
  return *this;
}

Tensor2& Tensor2::operator*=(double s) {
  for (double& x : a_) x *= s;
  return *this;
}

bool Tensor2::is_diagonal() const {
  return a_[1] == 0.0 && a_[2] == 0.0 && a_[3] == 0.0 && a_[5] == 0.0 && a_[6] == 0.0 &&
         a_[7] == 0.0;
}

bool Tensor2::is_symmetric(double tol) const {
  return std::abs(a_[1] - a_[3]) <= tol && std::abs(a_[2] - a_[6]) <= tol &&
         std::abs(a_[5] - a_[7]) <= tol;
}

Tensor2 operator+(Tensor2 a, const Tensor2& b) { return a += b; }
Tensor2 operator-(Tensor2 a, const Tensor2& b) { return a -= b; }
Tensor2 operator-(Tensor2 a) { return a *= -1.0; }
Tensor2 operator*(double s, Tensor2 a) { return a *= s; }
Tensor2 operator*(Tensor2 a, double s) { return a *= s; }
Tensor2 operator/(Tensor2 a, double s) { return a *= 1.0 / s; }

Tensor2 operator*(const Tensor2& a, const Tensor2& b) {
  Tensor2 c;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) c(i, j) = a(i, 0) * b(0, j) + a(i, 1) * b(1, j) + a(i, 2) * b(2, j);
  return c;
}

Vec3 operator*(const Tensor2& a, const Vec3& v) {
  return {a(0, 0) * v[0] + a(0, 1) * v[1] + a(0, 2) * v[2],
          a(1, 0) * v[0] + a(1, 1) * v[1] + a(1, 2) * v[2],
          a(2, 0) * v[0] + a(2, 1) * v[1] + a(2, 2) * v[2]};
}

Tensor2 transpose(const Tensor2& a) {
  Tensor2 t;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) t(i, j) = a(j, i);
  return t;
}

double trace(const Tensor2& a) { return a(0, 0) + a(1, 1) + a(2, 2); }

double det(const Tensor2& a) {
  return a(0, 0) * (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1)) -
         a(0, 1) * (a(1, 0) * a(2, 2) - a(1, 2) * a(2, 0)) +
         a(0, 2) * (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0));
}

Tensor2 cofactor(const Tensor2& a) {
  Tensor2 c;
  c(0, 0) = a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1);
  c(0, 1) = a(1, 2) * a(2, 0) - a(1, 0) * a(2, 2);
  c(0, 2) = a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0);
  c(1, 0) = a(0, 2) * a(2, 1) - a(0, 1) * a(2, 2);
  c(1, 1) = a(0, 0) * a(2, 2) - a(0, 2) * a(2, 0);
  c(1, 2) = a(0, 1) * a(2, 0) - a(0, 0) * a(2, 1);
  c(2, 0) = a(0, 1) * a(1, 2) - a(0, 2) * a(1, 1);
  c(2, 1) = a(0, 2) * a(1, 0) - a(0, 0) * a(1, 2);
  c(2, 2) = a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
  return c;
}

Tensor2 inverse(const Tensor2& a) {
  if (a.is_diagonal()) {
    if (a(0, 0) == 0.0 || a(1, 1) == 0.0 || a(2, 2) == 0.0)
      throw std::domain_error("inverse: singular tensor");
    return Tensor2::diag(1.0 / a(0, 0), 1.0 / a(1, 1), 1.0 / a(2, 2));
  }
  const double d = det(a);
  if (d == 0.0 || !std::isfinite(d)) throw std::domain_error("inverse: singular tensor");
  return transpose(cofactor(a)) / d;
}

double ddot(const Tensor2& a, const Tensor2& b) {
  double s = 0.0;
  for (int k = 0; k < 9; ++k) s += a.data()[k] * b.data()[k];
  return s;
}

double norm(const Tensor2& a) { return std::sqrt(ddot(a, a)); }

Tensor2 sym(const Tensor2& a) { return 0.5 * (a + transpose(a)); }

Tensor2 deviator(const Tensor2& a) {
  const double p = trace(a) / 3.0;
  Tensor2 d = a;
  d(0, 0) -= p;
  d(1, 1) -= p;
  d(2, 2) -= p;
  return d;
}

namespace {

double off_diagonal_norm(const Tensor2& a) {
  return std::sqrt(2.0 * (a(0, 1) * a(0, 1) + a(0, 2) * a(0, 2) + a(1, 2) * a(1, 2)));
}

Vec3 cross(const Vec3& u, const Vec3& v) {
  return {u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]};
}

double dot(const Vec3& u, const Vec3& v) { return u[0] * v[0] + u[1] * v[1] + u[2] * v[2]; }

// Eigenvector of symmetric a for a simple eigenvalue: the largest cross product
// of two rows of (a - value I).
Vec3 simple_eigenvector(const Tensor2& a, double value) {
  const Vec3 r0{a(0, 0) - value, a(0, 1), a(0, 2)};
  const Vec3 r1{a(1, 0), a(1, 1) - value, a(1, 2)};
  const Vec3 r2{a(2, 0), a(2, 1), a(2, 2) - value};
  std::array<Vec3, 3> c{cross(r0, r1), cross(r0, r2), cross(r1, r2)};
  std::size_t best = 0;
  for (std::size_t k = 1; k < 3; ++k)
    if (dot(c[k], c[k]) > dot(c[best], c[best])) best = k;
  const double n = std::sqrt(dot(c[best], c[best]));
  if (n == 0.0) return {0.0, 0.0, 0.0};
  return {c[best][0] / n, c[best][1] / n, c[best][2] / n};
}

void sort_ascending(SymmetricEigen& e) {
  std::array<int, 3> idx{0, 1, 2};
  std::sort(idx.begin(), idx.end(), [&](int i, int j) { return e.values[i] < e.values[j]; });
  SymmetricEigen s;
  for (int k = 0; k < 3; ++k) {
    s.values[k] = e.values[idx[k]];
    for (int i = 0; i < 3; ++i) s.vectors(i, k) = e.vectors(i, idx[k]);
  }
  e = s;
}

}  // namespace

SymmetricEigen eigen_symmetric_jacobi(const Tensor2& input) {
  Tensor2 a = sym(input);
  Tensor2 v = Tensor2::identity();
  const double scale = std::max(norm(a), 1e-300);
  constexpr int kMaxSweeps = 50;
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    if (off_diagonal_norm(a) <= 1e-14 * scale) {
      SymmetricEigen e{{a(0, 0), a(1, 1), a(2, 2)}, v};
      sort_ascending(e);
      return e;
    }
    for (int p = 0; p < 2; ++p) {
      for (int q = p + 1; q < 3; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = std::copysign(1.0, theta) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        // a <- J^T a J with the Givens rotation J in the (p, q) plane.
        for (int k = 0; k < 3; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < 3; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (int k = 0; k < 3; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }
  throw SpectralFailure("eigen_symmetric: Jacobi iteration did not converge");
}

SymmetricEigen eigen_symmetric(const Tensor2& input) {
  const Tensor2 a = sym(input);
  for (double x : a.data())
    if (!std::isfinite(x)) throw SpectralFailure("eigen_symmetric: non-finite entry");
  if (a.is_diagonal()) return SymmetricEigen{{a(0, 0), a(1, 1), a(2, 2)}, Tensor2::identity()};

  const double q = trace(a) / 3.0;
  const double p1 = a(0, 1) * a(0, 1) + a(0, 2) * a(0, 2) + a(1, 2) * a(1, 2);
  const double p2 = (a(0, 0) - q) * (a(0, 0) - q) + (a(1, 1) - q) * (a(1, 1) - q) +
                    (a(2, 2) - q) * (a(2, 2) - q) + 2.0 * p1;
  const double p = std::sqrt(p2 / 6.0);
  const double scale = std::max(norm(a), 1e-300);
  if (p <= 1e-8 * scale) return eigen_symmetric_jacobi(a);

  Tensor2 b = a;
  b(0, 0) -= q;
  b(1, 1) -= q;
  b(2, 2) -= q;
  b *= 1.0 / p;
  const double r = std::clamp(det(b) / 2.0, -1.0, 1.0);
  const double phi = std::acos(r) / 3.0;
  const double e_max = q + 2.0 * p * std::cos(phi);
  const double e_min = q + 2.0 * p * std::cos(phi + 2.0 * std::numbers::pi / 3.0);
  const double e_mid = 3.0 * q - e_max - e_min;

  const double gap = std::min(e_max - e_mid, e_mid - e_min);
  if (gap <= 1e-4 * p) return eigen_symmetric_jacobi(a);

  SymmetricEigen e;
  e.values = {e_min, e_mid, e_max};
  const Vec3 v0 = simple_eigenvector(a, e_min);
  Vec3 v2 = simple_eigenvector(a, e_max);
  // Re-orthogonalize v2 against v0 and complete the basis.
  const double d = dot(v0, v2);
  for (int i = 0; i < 3; ++i) v2[i] -= d * v0[i];
  const double n2 = std::sqrt(dot(v2, v2));
  if (n2 < 0.5) return eigen_symmetric_jacobi(a);
  for (double& x : v2) x /= n2;
  const Vec3 v1 = cross(v2, v0);
  for (int i = 0; i < 3; ++i) {
    e.vectors(i, 0) = v0[i];
    e.vectors(i, 1) = v1[i];
    e.vectors(i, 2) = v2[i];
  }
  // Residual check; the closed form can lose digits for clustered spectra.
  for (int k = 0; k < 3; ++k) {
    const Vec3 vk{e.vectors(0, k), e.vectors(1, k), e.vectors(2, k)};
    const Vec3 av = a * vk;
    double res = 0.0;
    for (int i = 0; i < 3; ++i) res = std::max(res, std::abs(av[i] - e.values[k] * vk[i]));
    if (res > 1e-13 * scale) return eigen_symmetric_jacobi(a);
  }
  return e;
}

Tensor2 spectral_apply(const Tensor2& s, const std::function<double(double)>& f) {
  const SymmetricEigen e = eigen_symmetric(s);
  if (s.is_diagonal()) return Tensor2::diag(f(e.values[0]), f(e.values[1]), f(e.values[2]));
  Tensor2 out;
  for (int k = 0; k < 3; ++k) {
    const double fk = f(e.values[k]);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) out(i, j) += fk * e.vectors(i, k) * e.vectors(j, k);
  }
  return out;
}

Tensor2 exp_symmetric(const Tensor2& s) {
  return spectral_apply(s, [](double x) { return std::exp(x); });
}

Tensor2 log_symmetric(const Tensor2& s) {
  return spectral_apply(s, [](double x) {
    if (!(x > 0.0)) throw SpectralFailure("log_symmetric: tensor is not positive definite");
    return std::log(x);
  });
}

}  // namespace chemomech
