#pragma once

#include <string>
#include <vector>

#include "chemomech/constitutive.hpp"

namespace chemomech {

struct CheckResult {
  std::string name;
  bool passed = false;
  double value = 0.0;      ///< the measured quantity (error, order, ...)
  double tolerance = 0.0;  ///< the bound it was compared against
  std::string detail;
};

/// P_ii against central differences of the particle energy in F_ii.
CheckResult check_particle_stress(unsigned seed, int samples = 100);
/// mu against central differences of the particle energy in c.
CheckResult check_chemical_potential(unsigned seed, int samples = 100);
/// SEI stress against central differences of the SEI energy, random coaxial F_pl.
CheckResult check_sei_stress(StrainMeasure measure, unsigned seed, int samples = 100);
/// F_Y <= 0, d >= 0, d F_Y = 0 after the rate-independent return.
CheckResult check_kkt(unsigned seed, int samples = 10000);
/// Viscoplastic increment against a plain bisection of the scalar consistency equation.
CheckResult check_viscoplastic_bisection(unsigned seed, int samples = 1000);
/// Viscoplastic increment for tau eps0 -> infinity against the rate-independent return.
CheckResult check_viscoplastic_limit(unsigned seed, int samples = 1000);
/// |det F_pl - 1| after repeated commits.
CheckResult check_plastic_determinant(unsigned seed, int commits = 10000);
/// Observed convergence order of the fixed-order NDF on y' = -y.
CheckResult check_ndf_order(int order);
/// Fixed-step order-1 BDF against the closed-form implicit Euler iterate.
CheckResult check_implicit_euler();
/// Residual of the homogeneous stress-free swelling state of a bare particle.
CheckResult check_stress_free_residual();
/// Drift of the homogeneous state of a bare particle under zero flux over 0.1 h.
CheckResult check_stationary_particle();

/// Every check above.
std::vector<CheckResult> run_checks(unsigned seed);

}  // namespace chemomech
