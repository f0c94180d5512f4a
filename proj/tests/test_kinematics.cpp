#include <cmath>
#include <limits>
#include <random>

#include <gtest/gtest.h>

#include "chemomech/errors.hpp"
#include "chemomech/kinematics.hpp"

using namespace chemomech;

namespace {

Tensor2 random_perturbation(std::mt19937& rng, double size) {
  std::normal_distribution<double> n;
  Tensor2 d;
  for (int i = 0; i < 9; ++i) d(i / 3, i % 3) = n(rng);
  return d * (size / norm(d));
}

}  // namespace

TEST(Kinematics, RadialDeformationGradient) {
  EXPECT_EQ(radial_deformation_gradient({0.0, 0.0, 0.7}), Tensor2::identity());
  EXPECT_EQ(radial_deformation_gradient({0.1, 0.05, 0.5}), Tensor2::diag(1.1, 1.05, 1.05));
  const Tensor2 f = radial_deformation_gradient({0.2, 0.2, 0.3});
  EXPECT_EQ(f, Tensor2::diag(1.2, 1.2, 1.2));
  EXPECT_NEAR(det(f), 1.728, 1e-14);
  EXPECT_THROW(radial_deformation_gradient({-1.0, 0.0, 0.5}), OrientationViolation);
  EXPECT_THROW(radial_deformation_gradient({0.0, -1.5, 0.5}), OrientationViolation);
}

TEST(Kinematics, ChemicalStretch) {
  EXPECT_EQ(chemical_stretch(0.0, 3.0), 1.0);
  EXPECT_NEAR(chemical_stretch(1.0, 3.0), std::cbrt(4.0), 4 * std::numeric_limits<double>::epsilon());
  EXPECT_NEAR(chemical_stretch(1.0 / 3.0, 3.0), std::cbrt(2.0), 4 * std::numeric_limits<double>::epsilon());
  EXPECT_THROW(chemical_stretch(1.01, 3.0), ConcentrationOutOfRange);
  EXPECT_THROW(chemical_stretch(-0.01, 3.0), ConcentrationOutOfRange);
}

TEST(Kinematics, ChemicalStretchCubes) {
  const double ulp = std::numeric_limits<double>::epsilon();
  for (int i = 0; i <= 100; ++i) {
    const double c = i / 100.0;
    const long double l = chemical_stretch(c, 3.0);
    const long double target = 1.0 + 3.0 * c;
    EXPECT_LE(std::abs(static_cast<double>(l * l * l - target)), 4 * ulp * static_cast<double>(target)) << c;
  }
}

TEST(Kinematics, ElasticPart) {
  EXPECT_EQ(elastic_part(2.0 * Tensor2::identity(), ParticleSplit{2.0}), Tensor2::identity());
  EXPECT_EQ(elastic_part(Tensor2::identity(), SeiSplit{}), Tensor2::identity());
  const Tensor2 fe = elastic_part(Tensor2::diag(1.2, 1.1, 1.1), SeiSplit{Tensor2::diag(1.1, 1.05, 1.05)});
  EXPECT_NEAR(fe(0, 0), 1.2 / 1.1, 1e-15);
  EXPECT_NEAR(fe(1, 1), 1.1 / 1.05, 1e-15);
  EXPECT_NEAR(fe(2, 2), 1.1 / 1.05, 1e-15);
  EXPECT_THROW(elastic_part(Tensor2::identity(), SeiSplit{Tensor2::diag(1, 0, 1)}), PlasticSingularity);
}

TEST(Kinematics, StrainExamples) {
  EXPECT_EQ(gsv_strain(Tensor2::identity()), Tensor2::zero());
  EXPECT_EQ(gsv_strain(Tensor2::diag(2, 1, 1)), Tensor2::diag(1.5, 0, 0));
  EXPECT_LT(norm(hencky_strain(Tensor2::identity())), 1e-16);
  EXPECT_LT(norm(hencky_strain(Tensor2::diag(2, 1, 1)) - Tensor2::diag(std::log(2.0), 0, 0)), 1e-15);
  EXPECT_THROW(hencky_strain(Tensor2::zero()), SpectralFailure);
}

TEST(Kinematics, SmallStrainLimit) {
  std::mt19937 rng(17);
  for (int n = 0; n < 100; ++n) {
    const Tensor2 d = random_perturbation(rng, 1e-4);
    const Tensor2 f = Tensor2::identity() + d;
    EXPECT_LE(norm(gsv_strain(f) - sym(d)), 1e-7);
    EXPECT_LE(norm(hencky_strain(f) - gsv_strain(f)), 1e-7);
  }
}

TEST(Kinematics, MeasuresAgreeToFirstOrder) {
  std::mt19937 rng(19);
  std::uniform_real_distribution<double> size(1e-4, 0.1);
  for (int n = 0; n < 200; ++n) {
    const double s = size(rng);
    const Tensor2 f = Tensor2::identity() + random_perturbation(rng, s);
    EXPECT_LE(norm(gsv_strain(f) - hencky_strain(f)), 10 * s * s);
  }
}

TEST(Kinematics, Stiffness) {
  const Lame sei = Lame::from_young_poisson(900e6, 0.25);
  EXPECT_NEAR(sei.shear, 360e6, 1e-6);
  EXPECT_NEAR(sei.lambda, 360e6, 1e-6);
  const Tensor2 m = stiffness_apply(Tensor2::diag(0.01, 0, 0), sei);
  EXPECT_NEAR(m(0, 0), 10.8e6, 1e-6);
  EXPECT_NEAR(m(1, 1), 3.6e6, 1e-6);
  EXPECT_NEAR(m(2, 2), 3.6e6, 1e-6);
  EXPECT_EQ(stiffness_apply(Tensor2::zero(), sei), Tensor2::zero());
  const double e = 1e-3;
  const Tensor2 h = stiffness_apply(e * Tensor2::identity(), sei);
  EXPECT_LT(norm(h - (3 * sei.lambda + 2 * sei.shear) * e * Tensor2::identity()), 1e-6);
}
