#include "chemomech/plasticity.hpp"

#include <cmath>
#include <string>

#include "chemomech/errors.hpp"

namespace chemomech {

Tensor2 mandel_stress(const Tensor2& e_log, const ModelParams& p) {
  return stiffness_apply(e_log, p.sei);
}

double yield_function(const Tensor2& mandel, const ModelParams& p) {
  return norm(deviator(mandel)) - kTensileRescale * p.yield_stress;
}

namespace {

struct TrialState {
  double overstress_norm = 0.0;  // ||dev M_trial||
  Tensor2 direction;
};

TrialState trial_state(const Tensor2& e_trial, const ModelParams& p) {
  const Tensor2 dev = deviator(mandel_stress(e_trial, p));
  TrialState t;
  t.overstress_norm = norm(dev);
  if (t.overstress_norm > 0.0) t.direction = dev / t.overstress_norm;
  return t;
}

ReturnMapResult returned(const Tensor2& e_trial, const TrialState& t, double delta) {
  return ReturnMapResult{e_trial - delta * t.direction, delta, t.direction, true};
}

}  // namespace

ReturnMapResult return_map_rate_independent(const Tensor2& e_trial, const ModelParams& p) {
  const TrialState t = trial_state(e_trial, p);
  const double excess = t.overstress_norm - kTensileRescale * p.yield_stress;
  if (excess <= 0.0) return ReturnMapResult{e_trial, 0.0, Tensor2::zero(), false};
  return returned(e_trial, t, excess / (2.0 * p.sei.shear));
}

ReturnMapResult viscoplastic_increment(const Tensor2& e_trial, double tau, const ModelParams& p) {
  if (!(tau > 0.0)) throw ViscoplasticSolveFailure("viscoplastic increment: tau must be positive");
  const TrialState t = trial_state(e_trial, p);
  const double yield = kTensileRescale * p.yield_stress;
  const double excess = t.overstress_norm - yield;
  if (excess <= 0.0) return ReturnMapResult{e_trial, 0.0, Tensor2::zero(), false};

  const double two_g = 2.0 * p.sei.shear;
  const double rate_stress = p.rescale_rate_stress ? kTensileRescale * p.rate_stress : p.rate_stress;
  const double gain = tau * p.reference_rate;
  const double beta = p.rate_exponent;
  const double upper = excess / two_g;

  // g is increasing in d; g(0) < 0 < g(upper).
  auto g = [&](double d) {
    const double x = std::max(0.0, (excess - two_g * d) / rate_stress);
    return d - gain * std::pow(x, beta);
  };
  auto dg = [&](double d) {
    const double x = std::max(0.0, (excess - two_g * d) / rate_stress);
    return 1.0 + gain * beta * std::pow(x, beta - 1.0) * two_g / rate_stress;
  };

  double lo = 0.0, hi = upper;
  const double g_lo = g(lo);
  if (!std::isfinite(g_lo) || !(g_lo < 0.0) || !(g(hi) > 0.0) || !std::isfinite(upper))
    throw ViscoplasticSolveFailure("viscoplastic increment: invalid bracket (gain " +
                                   std::to_string(gain) + ")");
  const double tol = 1e-12 * upper + 1e-16;
  double d = 0.0;
  for (int it = 0; it < 200; ++it) {
    const double gd = g(d);
    if (gd == 0.0) break;
    if (gd < 0.0)
      lo = d;
    else
      hi = d;
    double next = d - gd / dg(d);
    if (!(next > lo && next < hi) || !std::isfinite(next)) next = 0.5 * (lo + hi);
    const double step = std::abs(next - d);
    d = next;
    if (step <= tol || hi - lo <= tol) break;
  }
  return returned(e_trial, t, d);
}

ProjectorResult projector(const Tensor2& f, const InternalState& committed, double tau,
                          PlasticityMode mode, const ModelParams& p) {
  const Tensor2 e_trial = hencky_strain(elastic_part(f, SeiSplit{committed.plastic}));
  ProjectorResult out;
  switch (mode) {
    case PlasticityMode::elastic:
      out.map = ReturnMapResult{e_trial, 0.0, Tensor2::zero(), false};
      break;
    case PlasticityMode::rate_independent:
      out.map = return_map_rate_independent(e_trial, p);
      break;
    case PlasticityMode::viscoplastic:
      out.map = viscoplastic_increment(e_trial, tau, p);
      break;
  }
  out.mandel = mandel_stress(out.map.elastic_strain, p);
  out.plastic_update = out.map.yielded
                           ? exp_symmetric(out.map.delta_eps * out.map.flow_direction) * committed.plastic
                           : committed.plastic;
  return out;
}

InternalState commit_internal(const InternalState& state, const ReturnMapResult& result) {
  if (!result.yielded || result.delta_eps == 0.0) return state;
  return InternalState{exp_symmetric(result.delta_eps * result.flow_direction) * state.plastic,
                       state.eps_pl_eq + result.delta_eps};
}

}  // namespace chemomech
