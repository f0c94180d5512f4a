#include "chemomech/verification.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "chemomech/plasticity.hpp"
#include "chemomech/radial_fem.hpp"
#include "chemomech/time_integrator.hpp"

namespace chemomech {

namespace {

CheckResult result(std::string name, double value, double tolerance, std::string detail = {}) {
  CheckResult r;
  r.name = std::move(name);
  r.value = value;
  r.tolerance = tolerance;
  r.passed = std::isfinite(value) && value <= tolerance;
  std::ostringstream s;
  s << "max " << value << " (bound " << tolerance << ")";
  if (!detail.empty()) s << "; " << detail;
  r.detail = s.str();
  return r;
}

ModelParams default_params() { return nondimensionalize(MaterialParams{}); }

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

// Random symmetric tensor with entries in [-a, a].
Tensor2 random_symmetric(std::mt19937_64& rng, double a) {
  Tensor2 t;
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j) t(i, j) = t(j, i) = uniform(rng, -a, a);
  return t;
}

// Relative error of a diagonal stress against central differences of `energy`.
template <class Energy>
double diagonal_fd_error(const Tensor2& f, const Tensor2& piola, Energy energy) {
  double worst = 0.0;
  const double scale = std::max(norm(piola), 1e-12);
  for (int i = 0; i < 3; ++i) {
    const double h = 1e-5 * std::abs(f(i, i));
    Tensor2 fp = f, fm = f;
    fp(i, i) += h;
    fm(i, i) -= h;
    const double fd = (energy(fp) - energy(fm)) / (2.0 * h);
    worst = std::max(worst, std::abs(fd - piola(i, i)) / scale);
  }
  return worst;
}

// Relative error after Richardson extrapolation of two central differences.
template <class Energy>
double diagonal_fd_error_richardson(const Tensor2& f, const Tensor2& piola, Energy energy) {
  double worst = 0.0;
  const double scale = std::max(norm(piola), 1e-12);
  for (int i = 0; i < 3; ++i) {
    auto central = [&](double h) {
      Tensor2 fp = f, fm = f;
      fp(i, i) += h;
      fm(i, i) -= h;
      return (energy(fp) - energy(fm)) / (2.0 * h);
    };
    const double h = 1e-3 * std::abs(f(i, i));
    const double fd = (4.0 * central(0.5 * h) - central(h)) / 3.0;
    worst = std::max(worst, std::abs(fd - piola(i, i)) / scale);
  }
  return worst;
}

}  // namespace

CheckResult check_particle_stress(unsigned seed, int samples) {
  std::mt19937_64 rng(seed);
  const ModelParams p = default_params();
  const OcvCurve curve = OcvCurve::silicon_default();
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    const double c = uniform(rng, 0.05, 0.95);
    const double lam = chemical_stretch(c, p.swelling);
    const Tensor2 f = Tensor2::diag(lam * uniform(rng, 0.95, 1.05), lam * uniform(rng, 0.95, 1.05),
                                    lam * uniform(rng, 0.95, 1.05));
    const Tensor2 piola = piola_particle_gsv(c, f, p);
    worst = std::max(worst, diagonal_fd_error_richardson(f, piola, [&](const Tensor2& g) {
                       return particle_free_energy(c, g, curve, p);
                     }));
  }
  return result("particle stress vs energy derivative", worst, 1e-6);
}

CheckResult check_chemical_potential(unsigned seed, int samples) {
  std::mt19937_64 rng(seed);
  const ModelParams p = default_params();
  const OcvCurve curve = OcvCurve::silicon_default();
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    const double c = uniform(rng, 0.05, 0.95);
    const double lam = chemical_stretch(c, p.swelling);
    const Tensor2 f = Tensor2::diag(lam * uniform(rng, 0.95, 1.05), lam * uniform(rng, 0.95, 1.05),
                                    lam * uniform(rng, 0.95, 1.05));
    const double mu = chemical_potential(c, f, curve, p).total();
    auto central = [&](double h) {
      return (particle_free_energy(c + h, f, curve, p) - particle_free_energy(c - h, f, curve, p)) /
             (2.0 * h) / p.c_max;
    };
    const double h = 1e-4;
    const double fd = (4.0 * central(0.5 * h) - central(h)) / 3.0;
    worst = std::max(worst, std::abs(fd - mu) / std::max(std::abs(mu), 1e-12));
  }
  return result("chemical potential vs energy derivative", worst, 1e-6);
}

CheckResult check_sei_stress(StrainMeasure measure, unsigned seed, int samples) {
  std::mt19937_64 rng(seed);
  const ModelParams p = default_params();
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    const double a = uniform(rng, 0.9, 1.1), b = uniform(rng, 0.9, 1.1);
    const Tensor2 f_pl = Tensor2::diag(a, b, 1.0 / (a * b));
    const Tensor2 f = Tensor2::diag(uniform(rng, 0.8, 1.3), uniform(rng, 0.8, 1.3),
                                    uniform(rng, 0.8, 1.3));
    const Tensor2 piola = piola_sei(f, f_pl, measure, p);
    worst = std::max(worst, diagonal_fd_error_richardson(f, piola, [&](const Tensor2& g) {
                       return sei_free_energy(g, f_pl, measure, p);
                     }));
  }
  return result(std::string("SEI stress (") + (measure == StrainMeasure::gsv ? "gsv" : "log") +
                    ") vs energy derivative",
                worst, 1e-6);
}

CheckResult check_kkt(unsigned seed, int samples) {
  std::mt19937_64 rng(seed);
  const ModelParams p = default_params();
  const double yield_strain = p.yield_stress / (2.0 * p.sei.shear);
  double worst = 0.0;
  int yielded = 0;
  for (int s = 0; s < samples; ++s) {
    const Tensor2 e = random_symmetric(rng, uniform(rng, 0.0, 10.0) * yield_strain);
    const ReturnMapResult r = return_map_rate_independent(e, p);
    const double fy = yield_function(mandel_stress(r.elastic_strain, p), p) / p.yield_stress;
    yielded += r.yielded ? 1 : 0;
    worst = std::max({worst, fy, -r.delta_eps, std::abs(r.delta_eps * fy)});
  }
  return result("KKT conditions of the radial return", worst, 1e-12,
                std::to_string(yielded) + " of " + std::to_string(samples) + " yielded");
}

CheckResult check_viscoplastic_bisection(unsigned seed, int samples) {
  std::mt19937_64 rng(seed);
  ModelParams p = default_params();
  const double yield_strain = p.yield_stress / (2.0 * p.sei.shear);
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    p.rate_exponent = uniform(rng, 1.0, 4.0);
    const double tau = std::pow(10.0, uniform(rng, -8.0, -1.0));
    const Tensor2 e = random_symmetric(rng, uniform(rng, 0.0, 10.0) * yield_strain);
    const ReturnMapResult r = viscoplastic_increment(e, tau, p);

    const double q = norm(deviator(mandel_stress(e, p)));
    const double excess = q - kTensileRescale * p.yield_stress;
    double expected = 0.0;
    if (excess > 0.0) {
      const double rate_stress = kTensileRescale * p.rate_stress;
      const double two_g = 2.0 * p.sei.shear;
      auto g = [&](double d) {
        return d - tau * p.reference_rate * std::pow((excess - two_g * d) / rate_stress, p.rate_exponent);
      };
      double lo = 0.0, hi = excess / two_g;
      for (int it = 0; it < 300; ++it) {
        const double mid = 0.5 * (lo + hi);
        (g(mid) < 0.0 ? lo : hi) = mid;
      }
      expected = 0.5 * (lo + hi);
    }
    const double err = std::abs(r.delta_eps - expected) / std::max(expected, 1e-300);
    worst = std::max(worst, expected > 0.0 ? err : std::abs(r.delta_eps));
  }
  return result("viscoplastic increment vs bisection", worst, 1e-10);
}

CheckResult check_viscoplastic_limit(unsigned seed, int samples) {
  std::mt19937_64 rng(seed);
  ModelParams p = default_params();
  const double yield_strain = p.yield_stress / (2.0 * p.sei.shear);
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    const Tensor2 e = random_symmetric(rng, uniform(rng, 1.5, 10.0) * yield_strain);
    const ReturnMapResult ri = return_map_rate_independent(e, p);
    if (!ri.yielded) continue;
    const double tau = 1e24 / p.reference_rate;
    const ReturnMapResult vp = viscoplastic_increment(e, tau, p);
    worst = std::max(worst, std::abs(vp.delta_eps - ri.delta_eps) / ri.delta_eps);
  }
  return result("viscoplastic limit tau eps0 -> infinity", worst, 1e-6,
                "tau eps0 = 1e24, beta = " + std::to_string(p.rate_exponent));
}

CheckResult check_plastic_determinant(unsigned seed, int commits) {
  std::mt19937_64 rng(seed);
  const ModelParams p = default_params();
  InternalState state;
  double worst = 0.0;
  for (int s = 0; s < commits; ++s) {
    // Random non-coaxial deformation within 10 % of identity.
    Tensor2 f = Tensor2::identity();
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) f(i, j) += uniform(rng, -0.1, 0.1);
    const ProjectorResult pr = projector(f, state, 1.0, PlasticityMode::rate_independent, p);
    state = commit_internal(state, pr.map);
    worst = std::max(worst, std::abs(det(state.plastic) - 1.0));
  }
  return result("det F_pl drift over commits", worst, 1e-8,
                "eps_pl_eq = " + std::to_string(state.eps_pl_eq));
}

namespace {

class Decay : public DaeSystem {
 public:
  Decay() {
    mass_.resize(1, 1);
    mass_.insert(0, 0) = 1.0;
    mass_.makeCompressed();
  }
  std::size_t size() const override { return 1; }
  const SparseMatrix& mass() const override { return mass_; }
  void rhs(double, double, const Vector& y, Vector& f) override { f = -y; }
  SparseMatrix jacobian(double, double, const Vector&) override {
    SparseMatrix j(1, 1);
    j.insert(0, 0) = -1.0;
    j.makeCompressed();
    return j;
  }

 private:
  SparseMatrix mass_;
};

double ndf_decay_error(int order, double h, bool bdf) {
  Decay sys;
  NdfOptions opt;
  opt.rel_tol = 1e-13;
  opt.abs_tol = 1e-13;
  opt.initial_step = h;
  opt.max_step = h;
  opt.min_step = h;
  opt.fixed_step = true;
  opt.fixed_order = order;
  opt.bdf = bdf;
  NdfIntegrator integ(sys, opt);
  std::vector<Vector> past;
  for (int j = 0; j <= order; ++j) past.push_back(Vector::Constant(1, std::exp(j * h)));
  integ.initialize_history(0.0, past, h);
  integ.advance_to(1.0);
  return std::abs(integ.state()[0] - std::exp(-1.0));
}

}  // namespace

CheckResult check_ndf_order(int order) {
  std::vector<double> hs, errs;
  for (int m = 0; m < 4; ++m) {
    hs.push_back(0.05 / (1 << m));
    errs.push_back(ndf_decay_error(order, hs.back(), false));
  }
  // Least-squares slope of log(err) over log(h).
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(hs.size());
  for (std::size_t i = 0; i < hs.size(); ++i) {
    const double x = std::log(hs[i]), y = std::log(errs[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  CheckResult r = result("NDF order " + std::to_string(order) + " convergence",
                         std::abs(slope - order), 0.2);
  std::ostringstream s;
  s << "observed order " << slope << ", errors";
  for (double e : errs) s << ' ' << e;
  r.detail = s.str();
  return r;
}

CheckResult check_implicit_euler() {
  Decay sys;
  NdfOptions opt;
  const double h = 0.01;
  opt.rel_tol = 1e-14;
  opt.abs_tol = 1e-14;
  opt.initial_step = opt.max_step = opt.min_step = h;
  opt.fixed_step = true;
  opt.fixed_order = 1;
  opt.bdf = true;
  NdfIntegrator integ(sys, opt);
  integ.initialize(0.0, Vector::Constant(1, 1.0), false);
  double worst = 0.0;
  int n = 0;
  integ.advance_to(1.0, [&](const StepRecord&, const Vector& y) {
    ++n;
    worst = std::max(worst, std::abs(y[0] - std::pow(1.0 / (1.0 + h), n)));
  });
  return result("order-1 BDF equals implicit Euler", worst, 1e-12,
                std::to_string(n) + " steps");
}

namespace {

RadialProblem bare_particle() {
  MeshSpec spec;
  spec.particle_elements = 20;
  spec.sei_elements = 0;
  return RadialProblem(default_params(), OcvCurve::silicon_default(), StrainMeasure::log,
                       PlasticityMode::elastic, spec);
}

}  // namespace

CheckResult check_stress_free_residual() {
  RadialProblem problem = bare_particle();
  double worst = 0.0;
  for (double c0 : {0.0, 0.02, 0.3, 0.7}) {
    const Vector y = problem.initial_state(c0);
    Vector f;
    problem.rhs(0.0, 1e-3, y, f);
    worst = std::max(worst, f.cwiseAbs().maxCoeff());
  }
  return result("stress-free swelling residual", worst, 1e-12);
}

CheckResult check_stationary_particle() {
  RadialProblem problem = bare_particle();
  problem.set_surface_flux(0.0);
  NdfOptions opt;
  NdfIntegrator integ(problem, opt);
  const Vector y0 = problem.initial_state(0.3);
  integ.initialize(0.0, y0);
  const AdvanceResult res = integ.advance_to(0.1);
  // Drift in units of the local error weights.
  const Vector w = (opt.rel_tol * y0.cwiseAbs()).cwiseMax(opt.abs_tol);
  const double drift = ((integ.state() - y0).array() / w.array()).abs().maxCoeff();
  return result("stationary homogeneous particle", res.reached ? drift : INFINITY, 1.0,
                std::to_string(integ.stats().accepted) + " steps");
}

std::vector<CheckResult> run_checks(unsigned seed) {
  std::vector<CheckResult> out;
  out.push_back(check_particle_stress(seed));
  out.push_back(check_chemical_potential(seed + 1));
  out.push_back(check_sei_stress(StrainMeasure::gsv, seed + 2));
  out.push_back(check_sei_stress(StrainMeasure::log, seed + 3));
  out.push_back(check_kkt(seed + 4));
  out.push_back(check_viscoplastic_bisection(seed + 5));
  out.push_back(check_viscoplastic_limit(seed + 6));
  out.push_back(check_plastic_determinant(seed + 7));
  for (int k = 1; k <= 5; ++k) out.push_back(check_ndf_order(k));
  out.push_back(check_implicit_euler());
  out.push_back(check_stress_free_residual());
  out.push_back(check_stationary_particle());
  return out;
}

}  // namespace chemomech
