#include "chemomech/constitutive.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "chemomech/errors.hpp"

namespace chemomech {

void MaterialParams::validate() const {
  auto require = [](bool ok, const char* field, const char* what) {
    if (!ok) throw ConfigError(field, what);
  };
  require(E_P > 0.0, "E_P", "must be positive");
  require(E_S > 0.0, "E_S", "must be positive");
  require(nu_P > -1.0 && nu_P < 0.5, "nu_P", "must lie in (-1, 0.5)");
  require(nu_S > -1.0 && nu_S < 0.5, "nu_S", "must lie in (-1, 0.5)");
  require(v_pmv_cmax > 0.0, "v_pmv_cmax", "must be positive");
  require(D > 0.0, "D", "must be positive");
  require(Fa > 0.0, "Fa", "must be positive");
  require(c_max > 0.0, "c_max", "must be positive");
  require(sigma_Y > 0.0, "sigma_Y", "must be positive");
  require(sigma_Y_star > 0.0, "sigma_Y_star", "must be positive");
  require(eps_dot_0 > 0.0, "eps_dot_0", "must be positive");
  require(beta > 0.0, "beta", "must be positive");
  require(L0_S_over_L0_P >= 0.0, "L0_S_over_L0_P", "must be non-negative");
  require(particle_radius > 0.0, "particle_radius", "must be positive");
}

Scales Scales::from(const MaterialParams& p) {
  Scales s;
  s.length = p.particle_radius;
  s.stress = p.E_P;
  s.faraday = p.Fa;
  s.c_max = p.c_max;
  return s;
}

ModelParams in_si_units(const MaterialParams& p) {
  ModelParams m;
  m.particle = Lame::from_young_poisson(p.E_P, p.nu_P);
  m.sei = Lame::from_young_poisson(p.E_S, p.nu_S);
  m.swelling = p.v_pmv_cmax;
  m.c_max = p.c_max;
  m.faraday = p.Fa;
  m.diffusivity = p.D;
  m.yield_stress = p.sigma_Y;
  m.rate_stress = p.sigma_Y_star;
  m.reference_rate = p.eps_dot_0;
  m.rate_exponent = p.beta;
  m.rescale_rate_stress = p.rescale_rate_stress;
  m.sei_thickness = p.L0_S_over_L0_P * p.particle_radius;
  return m;
}

ModelParams nondimensionalize(const MaterialParams& p) {
  const Scales s = Scales::from(p);
  ModelParams m;
  m.particle = Lame::from_young_poisson(p.E_P / s.stress, p.nu_P);
  m.sei = Lame::from_young_poisson(p.E_S / s.stress, p.nu_S);
  m.swelling = p.v_pmv_cmax;
  // mu / (Fa * 1 V) = (1 / c_max~) d(rho0 psi / E_P)/d c_bar
  m.c_max = p.c_max * s.faraday * s.voltage / s.stress;
  m.faraday = 1.0;
  m.diffusivity = p.D * s.time / (s.length * s.length);
  m.yield_stress = p.sigma_Y / s.stress;
  m.rate_stress = p.sigma_Y_star / s.stress;
  m.reference_rate = p.eps_dot_0 * s.time;
  m.rate_exponent = p.beta;
  m.rescale_rate_stress = p.rescale_rate_stress;
  m.sei_thickness = p.L0_S_over_L0_P;
  return m;
}

// ---------------------------------------------------------------------------
// OCV curve

OcvCurve::OcvCurve(std::vector<double> c_bar, std::vector<double> voltage)
    : c_(std::move(c_bar)), u_(std::move(voltage)) {
  if (c_.size() != u_.size()) throw ConfigError("ocv", "grid and samples differ in length");
  if (c_.size() < 2) throw ConfigError("ocv", "need at least two samples");
  for (std::size_t i = 1; i < c_.size(); ++i)
    if (!(c_[i] > c_[i - 1])) throw ConfigError("ocv", "grid must be strictly increasing");
  if (c_.front() != 0.0 || c_.back() != 1.0) throw ConfigError("ocv", "grid must span [0, 1]");
  for (double u : u_)
    if (!std::isfinite(u)) throw ConfigError("ocv", "non-finite voltage sample");

  const std::size_t n = c_.size();
  std::vector<double> h(n - 1), delta(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    h[i] = c_[i + 1] - c_[i];
    delta[i] = (u_[i + 1] - u_[i]) / h[i];
  }
  slope_.assign(n, 0.0);
  if (n == 2) {
    slope_[0] = slope_[1] = delta[0];
  } else {
    for (std::size_t k = 1; k + 1 < n; ++k) {
      if (delta[k - 1] * delta[k] <= 0.0) continue;
      const double w1 = 2.0 * h[k] + h[k - 1];
      const double w2 = h[k] + 2.0 * h[k - 1];
      slope_[k] = (w1 + w2) / (w1 / delta[k - 1] + w2 / delta[k]);
    }
    auto end_slope = [](double h0, double h1, double d0, double d1) {
      double d = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
      if (d * d0 <= 0.0) return 0.0;
      if (d0 * d1 <= 0.0 && std::abs(d) > std::abs(3.0 * d0)) return 3.0 * d0;
      return d;
    };
    slope_[0] = end_slope(h[0], h[1], delta[0], delta[1]);
    slope_[n - 1] = end_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
  }

  cumulative_.assign(n, 0.0);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    // Exact integral of the cubic Hermite piece over the whole interval.
    cumulative_[i + 1] = cumulative_[i] + h[i] * (0.5 * (u_[i] + u_[i + 1]) +
                                                  h[i] * (slope_[i] - slope_[i + 1]) / 12.0);
  }
}

OcvCurve OcvCurve::linear(double a, double b) {
  std::vector<double> c{0.0, 0.25, 0.5, 0.75, 1.0};
  std::vector<double> u;
  for (double x : c) u.push_back(a - b * x);
  return OcvCurve(std::move(c), std::move(u));
}

OcvCurve OcvCurve::silicon_default() {
  // Rational fit of the aSi open-circuit voltage; quadratic grid resolves the steep
  // branch near c_bar = 0.
  auto fit = [](double z) {
    return (-0.2453 * z * z * z - 0.00527 * z * z + 0.2477 * z + 0.006457) / (z + 0.002493);
  };
  constexpr int kIntervals = 160;
  std::vector<double> c, u;
  for (int i = 0; i <= kIntervals; ++i) {
    const double s = static_cast<double>(i) / kIntervals;
    const double z = i == kIntervals ? 1.0 : s * s;
    c.push_back(z);
    u.push_back(fit(z));
  }
  return OcvCurve(std::move(c), std::move(u));
}

OcvCurve OcvCurve::from_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("ocv.table", "cannot open '" + path + "'");
  std::vector<double> c, u;
  std::string line;
  bool header_allowed = true;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ss(line);
    double x = 0.0, y = 0.0;
    if (!(ss >> x >> y)) {
      if (header_allowed) {
        header_allowed = false;
        continue;
      }
      throw ConfigError("ocv.table", "malformed line in '" + path + "': " + line);
    }
    header_allowed = false;
    c.push_back(x);
    u.push_back(y);
  }
  return OcvCurve(std::move(c), std::move(u));
}

std::size_t OcvCurve::interval(double c_bar) const {
  if (!(c_bar >= 0.0 && c_bar <= 1.0))
    throw ConcentrationOutOfRange("ocv: c_bar = " + std::to_string(c_bar) + " outside [0, 1]");
  const auto it = std::upper_bound(c_.begin(), c_.end(), c_bar);
  const auto i = static_cast<std::size_t>(std::distance(c_.begin(), it));
  return std::clamp<std::size_t>(i == 0 ? 0 : i - 1, 0, c_.size() - 2);
}

double OcvCurve::value(double c_bar) const {
  const std::size_t i = interval(c_bar);
  const double h = c_[i + 1] - c_[i];
  const double t = (c_bar - c_[i]) / h;
  const double t2 = t * t, t3 = t2 * t;
  return (2 * t3 - 3 * t2 + 1) * u_[i] + (t3 - 2 * t2 + t) * h * slope_[i] +
         (-2 * t3 + 3 * t2) * u_[i + 1] + (t3 - t2) * h * slope_[i + 1];
}

double OcvCurve::derivative(double c_bar) const {
  const std::size_t i = interval(c_bar);
  const double h = c_[i + 1] - c_[i];
  const double t = (c_bar - c_[i]) / h;
  const double t2 = t * t;
  return ((6 * t2 - 6 * t) * u_[i] + (-6 * t2 + 6 * t) * u_[i + 1]) / h +
         (3 * t2 - 4 * t + 1) * slope_[i] + (3 * t2 - 2 * t) * slope_[i + 1];
}

double OcvCurve::integral(double c_bar) const {
  const std::size_t i = interval(c_bar);
  const double h = c_[i + 1] - c_[i];
  const double t = (c_bar - c_[i]) / h;
  const double t2 = t * t, t3 = t2 * t, t4 = t3 * t;
  const double part = (t - t3 + 0.5 * t4) * u_[i] + (0.5 * t2 - 2.0 * t3 / 3.0 + 0.25 * t4) * h * slope_[i] +
                      (t3 - 0.5 * t4) * u_[i + 1] + (0.25 * t4 - t3 / 3.0) * h * slope_[i + 1];
  return cumulative_[i] + h * part;
}

double ocv(const OcvCurve& curve, double c_bar) { return curve.value(c_bar); }

// ---------------------------------------------------------------------------
// Particle

namespace {

struct ParticleElastic {
  double stretch;
  Tensor2 right_cauchy_green;
  Tensor2 strain;
  Tensor2 stress;  // C_P[E_el]
};

ParticleElastic particle_elastic(double c_bar, const Tensor2& f, const ModelParams& p) {
  ParticleElastic pe;
  pe.stretch = chemical_stretch_unchecked(c_bar, p.swelling);
  pe.right_cauchy_green = transpose(f) * f;
  pe.strain = gsv_strain(f / pe.stretch);
  pe.stress = stiffness_apply(pe.strain, p.particle);
  return pe;
}

}  // namespace

double particle_free_energy(double c_bar, const Tensor2& f, const OcvCurve& curve,
                            const ModelParams& p) {
  const ParticleElastic pe = particle_elastic(c_bar, f, p);
  return -p.c_max * p.faraday * curve.integral(c_bar) + 0.5 * ddot(pe.strain, pe.stress);
}

ChemicalPotential chemical_potential(double c_bar, const Tensor2& f, const OcvCurve& curve,
                                     const ModelParams& p) {
  const ParticleElastic pe = particle_elastic(c_bar, f, p);
  const double l5 = std::pow(pe.stretch, 5);
  ChemicalPotential mu;
  mu.chemical = -p.faraday * curve.value(c_bar);
  mu.mechanical = -(p.swelling / p.c_max) / (3.0 * l5) * ddot(pe.right_cauchy_green, pe.stress);
  return mu;
}

double dmu_dc(double c_bar, const Tensor2& f, const OcvCurve& curve, const ModelParams& p) {
  const ParticleElastic pe = particle_elastic(c_bar, f, p);
  const double l = pe.stretch;
  const double l2 = l * l, l4 = l2 * l2, l8 = l4 * l4;
  const Tensor2& c = pe.right_cauchy_green;
  const double mech = p.swelling * p.swelling / (9.0 * p.c_max) *
                      (5.0 / l8 * ddot(c, pe.stress) +
                       1.0 / (l8 * l2) * ddot(c, stiffness_apply(c, p.particle)));
  const double d = (-p.faraday * curve.derivative(c_bar) + mech) / p.c_max;
  if (!(d > 0.0))
    throw NonconvexChemistry("dmu_dc: non-positive derivative " + std::to_string(d) +
                             " at c_bar = " + std::to_string(c_bar));
  return d;
}

double mobility(double c_bar, const Tensor2& f, const OcvCurve& curve, const ModelParams& p) {
  return p.diffusivity / dmu_dc(c_bar, f, curve, p);
}

Tensor2 piola_particle_gsv(double c_bar, const Tensor2& f, const ModelParams& p) {
  const ParticleElastic pe = particle_elastic(c_bar, f, p);
  return f * pe.stress / (pe.stretch * pe.stretch);
}

// ---------------------------------------------------------------------------
// SEI

double sei_free_energy(const Tensor2& f, const Tensor2& f_pl, StrainMeasure measure,
                       const ModelParams& p) {
  const Tensor2 f_el = elastic_part(f, SeiSplit{f_pl});
  const Tensor2 e = measure == StrainMeasure::gsv ? gsv_strain(f_el) : hencky_strain(f_el);
  return 0.5 * ddot(e, stiffness_apply(e, p.sei));
}

Tensor2 piola_sei_from_mandel(const Tensor2& f, const Tensor2& f_pl, const Tensor2& mandel) {
  const Tensor2 fpl_inv = inverse(f_pl);
  const Tensor2 f_el = f * fpl_inv;
  const Tensor2 c_el = transpose(f_el) * f_el;
  return f * fpl_inv * inverse(c_el) * mandel * transpose(fpl_inv);
}

Tensor2 piola_sei(const Tensor2& f, const Tensor2& f_pl, StrainMeasure measure,
                  const ModelParams& p) {
  const Tensor2 f_el = elastic_part(f, SeiSplit{f_pl});
  if (measure == StrainMeasure::log)
    return piola_sei_from_mandel(f, f_pl, stiffness_apply(hencky_strain(f_el), p.sei));
  const Tensor2 fpl_inv = inverse(f_pl);
  return f * fpl_inv * stiffness_apply(gsv_strain(f_el), p.sei) * transpose(fpl_inv);
}

Tensor2 cauchy_from_piola(const Tensor2& piola, const Tensor2& f) {
  const double j = det(f);
  if (!(j > 0.0)) throw OrientationViolation("cauchy_from_piola: det F <= 0");
  return piola * transpose(f) / j;
}

double voltage_postprocess(double mu_surface, double n_ext, const ButlerVolmerParams& bv) {
  const double overpotential = 2.0 * bv.gas_constant * bv.temperature / bv.faraday *
                               std::asinh(n_ext * bv.faraday / (2.0 * bv.exchange_current));
  return -mu_surface / bv.faraday - overpotential;
}

}  // namespace chemomech
