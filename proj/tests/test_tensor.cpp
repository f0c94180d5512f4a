#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "chemomech/errors.hpp"
#include "chemomech/kinematics.hpp"
#include "chemomech/tensor.hpp"

using namespace chemomech;

namespace {

Tensor2 random_symmetric(std::mt19937& rng, double scale) {
  std::uniform_real_distribution<double> u(-scale, scale);
  Tensor2 a;
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j) a(i, j) = a(j, i) = u(rng);
  return a;
}

Tensor2 random_rotation(std::mt19937& rng) {
  std::normal_distribution<double> n;
  double q[4] = {n(rng), n(rng), n(rng), n(rng)};
  const double s = std::sqrt(q[0] * q[0] + q[1] * q[1] + q[2] * q[2] + q[3] * q[3]);
  for (double& v : q) v /= s;
  const double w = q[0], x = q[1], y = q[2], z = q[3];
  return Tensor2({1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y),
                  2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x),
                  2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y)});
}

double reconstruction_error(const Tensor2& a, const SymmetricEigen& e) {
  Tensor2 r;
  for (int k = 0; k < 3; ++k) {
    const Vec3 v{e.vectors(0, k), e.vectors(1, k), e.vectors(2, k)};
    r += e.values[k] * Tensor2::outer(v, v);
  }
  return norm(r - a);
}

}  // namespace

TEST(Tensor, DeterminantCofactorInverse) {
  const Tensor2 a({2, 1, 0, 0.5, 3, 1, 0, 0.25, 4});
  EXPECT_NEAR(det(a), 2 * (12 - 0.25) - 1 * (2 - 0), 1e-14);
  EXPECT_LT(norm(a * inverse(a) - Tensor2::identity()), 1e-14);
  EXPECT_LT(norm(cofactor(a) - det(a) * transpose(inverse(a))), 1e-13);
  EXPECT_THROW(inverse(Tensor2::zero()), std::domain_error);
}

TEST(Tensor, DeviatorIsTraceFree) {
  const Tensor2 a({2, 1, 0, 1, 3, 1, 0, 1, 4});
  EXPECT_NEAR(trace(deviator(a)), 0.0, 1e-15);
  EXPECT_NEAR(ddot(a, Tensor2::identity()), 9.0, 0.0);
}

TEST(Tensor, CardanoAgreesWithJacobi) {
  std::mt19937 rng(7);
  for (int n = 0; n < 500; ++n) {
    const Tensor2 a = random_symmetric(rng, 1.0);
    const SymmetricEigen fast = eigen_symmetric(a);
    const SymmetricEigen slow = eigen_symmetric_jacobi(a);
    Vec3 x = fast.values, y = slow.values;
    std::sort(x.begin(), x.end());
    std::sort(y.begin(), y.end());
    for (int k = 0; k < 3; ++k) EXPECT_NEAR(x[k], y[k], 1e-12);
    EXPECT_LT(reconstruction_error(a, fast), 1e-12);
  }
}

TEST(Tensor, DegenerateSpectrum) {
  std::mt19937 rng(3);
  const Tensor2 q = random_rotation(rng);
  for (const Tensor2& d : {Tensor2::diag(2, 2, 2), Tensor2::diag(1, 1, 3), Tensor2::diag(1, 1 + 1e-12, 3)}) {
    const Tensor2 a = sym(q * d * transpose(q));
    EXPECT_LT(reconstruction_error(a, eigen_symmetric(a)), 1e-12);
  }
}

TEST(Tensor, ExpOfDiagonal) {
  EXPECT_EQ(exp_symmetric(Tensor2::zero()), Tensor2::identity());
  const Tensor2 e = exp_symmetric(Tensor2::diag(0.1, -0.2, 0.3));
  EXPECT_DOUBLE_EQ(e(0, 0), std::exp(0.1));
  EXPECT_DOUBLE_EQ(e(1, 1), std::exp(-0.2));
  EXPECT_DOUBLE_EQ(e(2, 2), std::exp(0.3));
}

TEST(Tensor, LogInvertsExp) {
  std::mt19937 rng(11);
  for (int n = 0; n < 200; ++n) {
    Tensor2 s = random_symmetric(rng, 1.0);
    if (norm(s) > 1.0) s = s / norm(s);
    EXPECT_LT(norm(log_symmetric(exp_symmetric(s)) - s), 1e-12);
  }
  EXPECT_THROW(log_symmetric(Tensor2::diag(1, -1, 1)), SpectralFailure);
}

TEST(Tensor, ExpOfTraceFreeIsUnimodular) {
  std::mt19937 rng(5);
  for (int n = 0; n < 200; ++n) {
    const Tensor2 s = deviator(random_symmetric(rng, 0.3));
    EXPECT_NEAR(det(exp_symmetric(s)), 1.0, 1e-12);
  }
}

TEST(Tensor, HenckyIsRotationInvariant) {
  std::mt19937 rng(13);
  for (int n = 0; n < 100; ++n) {
    const Tensor2 f = Tensor2::identity() + random_symmetric(rng, 0.2) + 0.05 * random_rotation(rng);
    const Tensor2 q = random_rotation(rng);
    EXPECT_LT(norm(hencky_strain(q * f) - hencky_strain(f)), 1e-10);
  }
}
