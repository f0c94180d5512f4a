#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "chemomech/constitutive.hpp"
#include "chemomech/errors.hpp"

using namespace chemomech;

namespace {

ModelParams unit_params() {
  ModelParams p;
  p.particle = Lame::from_young_poisson(1.0, 0.22);
  p.sei = Lame::from_young_poisson(0.01, 0.25);
  p.swelling = 3.0;
  return p;
}

}  // namespace

TEST(Ocv, ReproducesNodes) {
  const OcvCurve curve = OcvCurve::silicon_default();
  for (std::size_t i = 0; i < curve.grid().size(); ++i)
    EXPECT_EQ(ocv(curve, curve.grid()[i]), curve.samples()[i]);
}

TEST(Ocv, LinearTable) {
  const OcvCurve curve({0.0, 0.5, 1.0}, {1.0, 0.5, 0.0});
  EXPECT_DOUBLE_EQ(ocv(curve, 0.25), 0.75);
  EXPECT_NEAR(curve.derivative(0.6), -1.0, 1e-14);
  EXPECT_NEAR(curve.integral(1.0), 0.5, 1e-14);
  EXPECT_THROW(ocv(curve, 1.5), ConcentrationOutOfRange);
}

TEST(Ocv, MonotoneOnEveryInterval) {
  const OcvCurve curve = OcvCurve::silicon_default();
  double prev = ocv(curve, 0.0);
  for (int i = 1; i <= 20000; ++i) {
    const double v = ocv(curve, i / 20000.0);
    EXPECT_LE(v, prev);
    prev = v;
  }
}

TEST(Ocv, RejectsBadGrid) {
  EXPECT_THROW(OcvCurve({0.0, 0.5, 0.5, 1.0}, {1, 0.5, 0.4, 0}), ConfigError);
  EXPECT_THROW(OcvCurve({0.1, 1.0}, {1, 0}), ConfigError);
}

TEST(ChemicalPotential, StressFreeSwelling) {
  const ModelParams p = unit_params();
  const OcvCurve curve = OcvCurve::silicon_default();
  for (double c : {0.0, 0.02, 0.4, 0.9}) {
    const double l = chemical_stretch(c, p.swelling);
    const ChemicalPotential mu = chemical_potential(c, l * Tensor2::identity(), curve, p);
    EXPECT_NEAR(mu.mechanical, 0.0, 1e-15);
    EXPECT_DOUBLE_EQ(mu.total(), -p.faraday * ocv(curve, c));
  }
}

TEST(ChemicalPotential, InitialValueIsChemicalDerivative) {
  const ModelParams p = unit_params();
  const OcvCurve curve = OcvCurve::silicon_default();
  const double c0 = 0.02, h = 1e-6;
  // rho0 psi_ch = Fa c_max int_0^c -U; mu = (1 / c_max) d/dc_bar.
  auto psi = [&](double c) { return -p.faraday * curve.integral(c); };
  const double fd = (psi(c0 + h) - psi(c0 - h)) / (2 * h);
  const double l = chemical_stretch(c0, p.swelling);
  EXPECT_NEAR(chemical_potential(c0, l * Tensor2::identity(), curve, p).total(), fd, 1e-8);
}

TEST(ChemicalPotential, DerivativeWithLinearOcv) {
  ModelParams p = unit_params();
  p.faraday = 2.0;
  p.c_max = 1.5;
  const double a = 0.8, b = 0.6;
  const OcvCurve curve = OcvCurve::linear(a, b);
  const double c = 0.3;
  const double l = chemical_stretch(c, p.swelling);
  const double bulk3 = 3 * p.particle.lambda + 2 * p.particle.shear;
  const double swelling_term = p.swelling * p.swelling * bulk3 / (3 * p.c_max * p.c_max * std::pow(l, 6));
  EXPECT_NEAR(dmu_dc(c, l * Tensor2::identity(), curve, p), p.faraday * b / p.c_max + swelling_term, 1e-12);
}

TEST(ChemicalPotential, DerivativeMatchesDifferences) {
  const ModelParams p = unit_params();
  const OcvCurve curve = OcvCurve::silicon_default();
  std::mt19937 rng(23);
  std::uniform_real_distribution<double> cs(0.05, 0.95), fs(0.97, 1.03);
  for (int n = 0; n < 100; ++n) {
    const double c = cs(rng);
    const double l = chemical_stretch(c, p.swelling);
    const Tensor2 f = l * Tensor2::diag(fs(rng), fs(rng), fs(rng));
    const double h = 1e-6;
    const double fd = (chemical_potential(c + h, f, curve, p).total() -
                       chemical_potential(c - h, f, curve, p).total()) / (2 * h * p.c_max);
    const double d = dmu_dc(c, f, curve, p);
    EXPECT_LE(std::abs(d - fd), 1e-6 * std::abs(d));
  }
}

TEST(ChemicalPotential, Mobility) {
  const ModelParams p = unit_params();
  const OcvCurve curve = OcvCurve::linear(1.0, 1.0);
  const Tensor2 f = chemical_stretch(0.4, p.swelling) * Tensor2::identity();
  EXPECT_DOUBLE_EQ(mobility(0.4, f, curve, p), p.diffusivity / dmu_dc(0.4, f, curve, p));
}

TEST(Stress, ParticleStressFreeSwelling) {
  const ModelParams p = unit_params();
  const double l = chemical_stretch(0.5, p.swelling);
  EXPECT_LT(norm(piola_particle_gsv(0.5, l * Tensor2::identity(), p)), 1e-15);
}

TEST(Stress, ParticleSmallStrain) {
  const ModelParams p = unit_params();
  const double e = 0.01;
  const Tensor2 f = Tensor2::diag(1 + e, 1, 1);
  const Tensor2 pk = piola_particle_gsv(0.0, f, p);
  const double green = e + 0.5 * e * e;
  EXPECT_NEAR(pk(0, 0), (1 + e) * (p.particle.lambda + 2 * p.particle.shear) * green, 1e-15);
  EXPECT_NEAR(pk(1, 1), p.particle.lambda * green, 1e-15);
  // The second Piola-Kirchhoff stress stays within 1 % of linear elasticity.
  const Tensor2 s = inverse(f) * pk;
  EXPECT_NEAR(s(0, 0), (p.particle.lambda + 2 * p.particle.shear) * e,
              0.01 * (p.particle.lambda + 2 * p.particle.shear) * e);
  EXPECT_NEAR(s(1, 1), p.particle.lambda * e, 0.01 * p.particle.lambda * e);
}

TEST(Stress, SeiReferenceState) {
  const ModelParams p = unit_params();
  for (StrainMeasure m : {StrainMeasure::gsv, StrainMeasure::log})
    EXPECT_EQ(norm(piola_sei(Tensor2::identity(), Tensor2::identity(), m, p)), 0.0);
}

TEST(Stress, SeiMeasuresAgreeAtSmallStrain) {
  const ModelParams p = unit_params();
  const Tensor2 f = Tensor2::diag(1 + 1e-4, 1 - 0.5e-4, 1 + 0.3e-4);
  const Tensor2 a = piola_sei(f, Tensor2::identity(), StrainMeasure::gsv, p);
  const Tensor2 b = piola_sei(f, Tensor2::identity(), StrainMeasure::log, p);
  EXPECT_LE(norm(a - b), 1e-3 * norm(a));
}

TEST(Stress, SeiLogMatchesEnergyDifferences) {
  const ModelParams p = unit_params();
  const Tensor2 f = Tensor2::diag(1.05, 0.97, 0.97);
  const Tensor2 pk = piola_sei(f, Tensor2::identity(), StrainMeasure::log, p);
  for (int i = 0; i < 3; ++i) {
    const double h = 1e-6;
    Tensor2 fp = f, fm = f;
    fp(i, i) += h;
    fm(i, i) -= h;
    const double fd = (sei_free_energy(fp, Tensor2::identity(), StrainMeasure::log, p) -
                       sei_free_energy(fm, Tensor2::identity(), StrainMeasure::log, p)) / (2 * h);
    EXPECT_LE(std::abs(fd - pk(i, i)), 1e-6 * norm(pk));
  }
}

TEST(Stress, Cauchy) {
  const Tensor2 f = Tensor2::diag(1.1, 0.9, 1.2);
  EXPECT_EQ(cauchy_from_piola(Tensor2::zero(), f), Tensor2::zero());
  const Tensor2 pk({1, 2, 0, 2, 3, 0, 0, 0, 4});
  EXPECT_EQ(cauchy_from_piola(pk, Tensor2::identity()), pk);
  const double pressure = 2.5;
  const Tensor2 g({1.1, 0.1, 0, 0.05, 0.95, 0.02, 0, 0.01, 1.05});
  const Tensor2 sigma = cauchy_from_piola(-pressure * cofactor(g), g);
  EXPECT_LT(norm(sigma + pressure * Tensor2::identity()), 1e-13);
  EXPECT_THROW(cauchy_from_piola(pk, Tensor2::diag(1, 1, -1)), OrientationViolation);
}

TEST(Voltage, ButlerVolmer) {
  const ButlerVolmerParams bv;
  const double mu = -0.4 * bv.faraday;
  EXPECT_DOUBLE_EQ(voltage_postprocess(mu, 0.0, bv), 0.4);
  const double up = voltage_postprocess(mu, 1e-5, bv) - 0.4;
  const double down = voltage_postprocess(mu, -1e-5, bv) - 0.4;
  EXPECT_LT(up, 0.0);
  EXPECT_NEAR(up, -down, 1e-15);
  const OcvCurve curve = OcvCurve::silicon_default();
  EXPECT_NEAR(voltage_postprocess(-bv.faraday * ocv(curve, 0.3), 0.0, bv), ocv(curve, 0.3), 1e-15);
}

TEST(Parameters, Validation) {
  MaterialParams m;
  EXPECT_NO_THROW(m.validate());
  m.nu_S = 0.5;
  EXPECT_THROW(m.validate(), ConfigError);
  m = MaterialParams{};
  m.beta = 0.0;
  EXPECT_THROW(m.validate(), ConfigError);
}
