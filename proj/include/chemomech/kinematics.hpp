#pragma once

#include <variant>

#include "chemomech/tensor.hpp"

namespace chemomech {

/// Displacement data of a spherically symmetric field u(r) e_r at one radius.
struct RadialKinematicPoint {
  double du_dr = 0.0;
  double u_over_r = 0.0;
  double r = 0.0;
};

/// F = diag(1 + u', 1 + u/r, 1 + u/r). Throws OrientationViolation for a non-positive stretch.
Tensor2 radial_deformation_gradient(const RadialKinematicPoint& p);

/// lambda_ch = (1 + v_pmv c_max c_bar)^(1/3). Throws ConcentrationOutOfRange unless
/// c_bar lies in [0, 1].
double chemical_stretch(double c_bar, double v_pmv_cmax);

/// Same formula without the range check; used inside Newton iterations where
/// iterates may leave [0, 1] transiently. Throws OrientationViolation when
/// 1 + v_pmv_cmax * c_bar <= 0.
double chemical_stretch_unchecked(double c_bar, double v_pmv_cmax);

/// Particle split F = lambda_ch F_el.
struct ParticleSplit {
  double chemical_stretch = 1.0;
};

/// SEI split F = F_el F_pl.
struct SeiSplit {
  Tensor2 plastic = Tensor2::identity();
};

using SplitMode = std::variant<ParticleSplit, SeiSplit>;

/// Elastic part of F for either domain. Throws PlasticSingularity for a singular F_pl.
Tensor2 elastic_part(const Tensor2& f, const SplitMode& mode);

/// Green-St-Venant strain 1/2 (F^T F - Id).
Tensor2 gsv_strain(const Tensor2& f_el);

/// Hencky strain ln(sqrt(C_el)) = 1/2 ln(F_el^T F_el). Throws SpectralFailure when
/// C_el is not positive definite.
Tensor2 hencky_strain(const Tensor2& f_el);

struct Lame {
  double lambda = 0.0;
  double shear = 0.0;

  static Lame from_young_poisson(double young, double poisson);
};

/// Isotropic stiffness: C[E] = lambda tr(E) Id + 2 G E.
Tensor2 stiffness_apply(const Tensor2& e, const Lame& lame);

}  // namespace chemomech
