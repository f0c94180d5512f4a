#include "chemomech/kinematics.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "chemomech/errors.hpp"

namespace chemomech {

Tensor2 radial_deformation_gradient(const RadialKinematicPoint& p) {
  const double radial = 1.0 + p.du_dr;
  const double hoop = 1.0 + p.u_over_r;
  if (!(radial > 0.0) || !(hoop > 0.0))
    throw OrientationViolation("radial deformation gradient: non-positive stretch (radial " +
                               std::to_string(radial) + ", hoop " + std::to_string(hoop) + ")");
  return Tensor2::diag(radial, hoop, hoop);
}

double chemical_stretch_unchecked(double c_bar, double v_pmv_cmax) {
  const double volume = 1.0 + v_pmv_cmax * c_bar;
  if (!(volume > 0.0)) throw OrientationViolation("chemical stretch: non-positive volume ratio");
  // One Newton correction in extended precision rounds the libm cube root to nearest.
  const long double l = std::cbrt(volume);
  return static_cast<double>(l - (l * l * l - volume) / (3.0L * l * l));
}

double chemical_stretch(double c_bar, double v_pmv_cmax) {
  if (!(c_bar >= 0.0 && c_bar <= 1.0))
    throw ConcentrationOutOfRange("chemical stretch: c_bar = " + std::to_string(c_bar) +
                                  " outside [0, 1]");
  return chemical_stretch_unchecked(c_bar, v_pmv_cmax);
}

Tensor2 elastic_part(const Tensor2& f, const SplitMode& mode) {
  if (const auto* particle = std::get_if<ParticleSplit>(&mode)) {
    if (!(particle->chemical_stretch > 0.0))
      throw OrientationViolation("elastic part: non-positive chemical stretch");
    return f / particle->chemical_stretch;
  }
  const auto& plastic = std::get<SeiSplit>(mode).plastic;
  if (plastic == Tensor2::identity()) return f;
  const double d = det(plastic);
  if (!(std::abs(d) > 1e-300) || !std::isfinite(d))
    throw PlasticSingularity("elastic part: singular plastic deformation gradient");
  return f * inverse(plastic);
}

Tensor2 gsv_strain(const Tensor2& f_el) {
  Tensor2 e = transpose(f_el) * f_el;
  e(0, 0) -= 1.0;
  e(1, 1) -= 1.0;
  e(2, 2) -= 1.0;
  return 0.5 * sym(e);
}

Tensor2 hencky_strain(const Tensor2& f_el) {
  const Tensor2 c = sym(transpose(f_el) * f_el);
  return spectral_apply(c, [](double eta) {
    if (!(eta > 0.0)) throw SpectralFailure("hencky strain: C_el is not positive definite");
    return 0.5 * std::log(eta);
  });
}

Lame Lame::from_young_poisson(double young, double poisson) {
  const double shear = young / (2.0 * (1.0 + poisson));
  return Lame{2.0 * shear * poisson / (1.0 - 2.0 * poisson), shear};
}

Tensor2 stiffness_apply(const Tensor2& e, const Lame& lame) {
  Tensor2 s = 2.0 * lame.shear * e;
  const double vol = lame.lambda * trace(e);
  s(0, 0) += vol;
  s(1, 1) += vol;
  s(2, 2) += vol;
  return s;
}

}  // namespace chemomech
