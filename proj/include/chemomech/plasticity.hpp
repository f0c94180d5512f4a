#pragma once

#include "chemomech/constitutive.hpp"
#include "chemomech/tensor.hpp"

namespace chemomech {

enum class PlasticityMode { elastic, rate_independent, viscoplastic };

/// Plastic internal variables of one SEI quadrature point.
struct InternalState {
  Tensor2 plastic = Tensor2::identity();  ///< F_pl, det = 1
  double eps_pl_eq = 0.0;                 ///< accumulated equivalent plastic strain

  friend bool operator==(const InternalState&, const InternalState&) = default;
};

struct ReturnMapResult {
  Tensor2 elastic_strain;  ///< admissible log elastic strain
  double delta_eps = 0.0;
  Tensor2 flow_direction;  ///< unit, trace-free when yielded; zero otherwise
  bool yielded = false;
};

/// sqrt(2/3): rescales the yield stress to the uniaxial tensile test.
inline constexpr double kTensileRescale = 0.81649658092772603273;

/// M = C_S[E_el,log].
Tensor2 mandel_stress(const Tensor2& e_log, const ModelParams& p);

/// F_Y = ||dev M|| - sqrt(2/3) sigma_Y.
double yield_function(const Tensor2& mandel, const ModelParams& p);

/// Radial return in log-strain space for ideal plasticity.
ReturnMapResult return_map_rate_independent(const Tensor2& e_trial, const ModelParams& p);

/// Implicit overstress update
///   d = tau eps0 ((||dev M_trial|| - 2 G d - sqrt(2/3) sigma_Y) / sigma*)^beta,
/// sigma* = sqrt(2/3) sigma_Y_star when `rescale_rate_stress`, else sigma_Y_star.
/// Solved by Newton with bisection safeguard on [0, d_rate_independent].
/// Throws ViscoplasticSolveFailure when the bracket is invalid.
ReturnMapResult viscoplastic_increment(const Tensor2& e_trial, double tau, const ModelParams& p);

struct ProjectorResult {
  Tensor2 mandel;          ///< admissible stress C[E_el,log]
  ReturnMapResult map;
  Tensor2 plastic_update;  ///< exp(d nu) F_pl^n
};

/// Maps the deformation gradient and the committed state to the admissible stress:
/// elastic split, Hencky strain, mode-dependent return, stiffness.
ProjectorResult projector(const Tensor2& f, const InternalState& committed, double tau,
                          PlasticityMode mode, const ModelParams& p);

/// F_pl <- exp(d nu) F_pl, eps <- eps + d.
InternalState commit_internal(const InternalState& state, const ReturnMapResult& result);

}  // namespace chemomech
