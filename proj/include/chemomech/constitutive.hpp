#pragma once

#include <span>
#include <string>
#include <vector>

#include "chemomech/kinematics.hpp"
#include "chemomech/tensor.hpp"

namespace chemomech {

/// Physical constants of the particle (amorphous silicon) and the SEI shell, in SI units.
///
/// Particle values follow the aSi data set commonly used for chemo-mechanical particle
/// models; SEI values are E_S = 900 MPa, nu_S = 0.25, sigma_Y = 49.5 MPa and a shell
/// of 10 % of the particle radius.
struct MaterialParams {
  double E_P = 90.13e9;            ///< [Pa]
  double nu_P = 0.22;              ///< [-]
  double E_S = 900e6;              ///< [Pa]
  double nu_S = 0.25;              ///< [-]
  double v_pmv_cmax = 10.96e-6 * 3.11e5;  ///< partial molar volume times c_max [-]
  double D = 1e-17;                ///< [m^2/s]
  double rho0 = 2.285e3;           ///< [kg/m^3], documentation only
  double Fa = 96485.33212;         ///< [C/mol]
  double c_max = 3.11e5;           ///< [mol/m^3]
  double sigma_Y = 49.5e6;         ///< [Pa]
  double eps_dot_0 = 1e-3;         ///< [1/s]
  double sigma_Y_star = 49.5e6;    ///< [Pa]
  double beta = 2.94;              ///< [-]
  double L0_S_over_L0_P = 0.1;     ///< [-]
  double particle_radius = 50e-9;  ///< [m]
  /// Apply the sqrt(2/3) tensile-test rescale to sigma_Y_star as well as sigma_Y.
  bool rescale_rate_stress = true;

  /// Throws ConfigError naming the first violated invariant.
  void validate() const;
};

/// Characteristic scales of the dimensionless formulation.
struct Scales {
  double length = 50e-9;     ///< particle radius [m]
  double time = 3600.0;      ///< [s]
  double stress = 90.13e9;   ///< particle Young's modulus [Pa]
  double voltage = 1.0;      ///< chemical potential is measured in Fa * voltage [J/mol]
  double faraday = 96485.33212;
  double c_max = 3.11e5;

  static Scales from(const MaterialParams& p);
};

/// Parameters in one consistent unit system, consumed by every constitutive routine.
///
/// With the SI set from `in_si_units` stresses are in Pa and mu in J/mol; with the
/// dimensionless set from `nondimensionalize` stresses are relative to E_P, mu is in
/// volts (Fa * 1 V per mol), lengths relative to the particle radius and time in hours.
/// `c_max` is the factor in mu = (1 / c_max) d(rho0 psi)/d(c_bar).
struct ModelParams {
  Lame particle;
  Lame sei;
  double swelling = 3.0;  ///< v_pmv c_max
  double c_max = 1.0;
  double faraday = 1.0;
  double diffusivity = 1.0;
  double yield_stress = 0.0;
  double rate_stress = 0.0;
  double reference_rate = 0.0;
  double rate_exponent = 1.0;
  bool rescale_rate_stress = true;
  double sei_thickness = 0.1;
};

ModelParams in_si_units(const MaterialParams& p);
ModelParams nondimensionalize(const MaterialParams& p);

/// Open-circuit voltage as a monotone piecewise-cubic Hermite interpolant
/// (Fritsch-Carlson slopes) of a sample table on [0, 1].
class OcvCurve {
 public:
  /// Throws ConfigError unless the grid is strictly increasing and spans [0, 1].
  OcvCurve(std::vector<double> c_bar, std::vector<double> voltage);

  /// U(c) = a - b c sampled on a coarse grid; a placeholder for tests.
  static OcvCurve linear(double a, double b);
  /// Samples of the rational aSi fit used by the default scenario.
  static OcvCurve silicon_default();
  /// Two-column CSV (c_bar, U [V]); '#' comments and one non-numeric header line allowed.
  static OcvCurve from_csv(const std::string& path);

  /// Throws ConcentrationOutOfRange outside [0, 1].
  double value(double c_bar) const;
  double derivative(double c_bar) const;
  /// int_0^c_bar U(z) dz, exact for the interpolant.
  double integral(double c_bar) const;

  std::span<const double> grid() const { return c_; }
  std::span<const double> samples() const { return u_; }

 private:
  std::size_t interval(double c_bar) const;

  std::vector<double> c_;
  std::vector<double> u_;
  std::vector<double> slope_;
  std::vector<double> cumulative_;  // integral up to grid point i
};

/// Chemical potential split into its chemical and mechanical parts.
struct ChemicalPotential {
  double chemical = 0.0;
  double mechanical = 0.0;
  double total() const { return chemical + mechanical; }
};

double ocv(const OcvCurve& curve, double c_bar);

/// rho0 psi of the particle: chemical part plus GSV elastic energy of F / lambda_ch.
double particle_free_energy(double c_bar, const Tensor2& f, const OcvCurve& curve,
                            const ModelParams& p);

/// mu = -Fa U(c) - v_pmv / (3 lambda^5) F^T F : C[E_el] with v_pmv = swelling / c_max.
ChemicalPotential chemical_potential(double c_bar, const Tensor2& f, const OcvCurve& curve,
                                     const ModelParams& p);

/// d(mu)/dc at fixed deformation, with dc = c_max dc_bar. Throws NonconvexChemistry
/// when the result is not positive.
double dmu_dc(double c_bar, const Tensor2& f, const OcvCurve& curve, const ModelParams& p);

/// m = D / (d mu / dc).
double mobility(double c_bar, const Tensor2& f, const OcvCurve& curve, const ModelParams& p);

/// P = lambda^-2 F C_P[E_gsv(F / lambda)].
Tensor2 piola_particle_gsv(double c_bar, const Tensor2& f, const ModelParams& p);

enum class StrainMeasure { gsv, log };

double sei_free_energy(const Tensor2& f, const Tensor2& f_pl, StrainMeasure measure,
                       const ModelParams& p);

/// First Piola-Kirchhoff stress of the SEI for the chosen elastic strain.
///   gsv: P = F F_pl^-1 C[E] F_pl^-T
///   log: P = F F_pl^-1 C_el^-1 C[E] F_pl^-T
/// Both reduce to the familiar F F_pl^-T F_pl^-1 (...) ordering whenever F_pl commutes
/// with the stress, which holds in spherical symmetry.
Tensor2 piola_sei(const Tensor2& f, const Tensor2& f_pl, StrainMeasure measure,
                  const ModelParams& p);

/// Log-strain SEI stress with a given (possibly projected) Mandel stress M = C[E_el].
Tensor2 piola_sei_from_mandel(const Tensor2& f, const Tensor2& f_pl, const Tensor2& mandel);

/// sigma = P F^T / det F. Throws OrientationViolation when det F <= 0.
Tensor2 cauchy_from_piola(const Tensor2& piola, const Tensor2& f);

struct ButlerVolmerParams {
  double temperature = 298.15;          ///< [K]
  double exchange_current = 0.1;        ///< i00 [A/m^2]
  double gas_constant = 8.314462618;    ///< [J/(mol K)]
  double faraday = 96485.33212;         ///< [C/mol]
};

/// U = -mu_surface / Fa - (2 R T / Fa) asinh(N_ext Fa / (2 i00)).
/// mu_surface in J/mol, n_ext in mol/(m^2 s), positive for lithium insertion.
double voltage_postprocess(double mu_surface, double n_ext, const ButlerVolmerParams& bv);

}  // namespace chemomech
