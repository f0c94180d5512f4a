#pragma once

#include <array>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/SparseLU>

#include "chemomech/dae_system.hpp"

namespace chemomech {

// ---------------------------------------------------------------------------
// Newton

enum class NewtonFailure { none, max_iterations, non_finite, backtrack_exhausted, diverging };

const char* to_string(NewtonFailure f);

struct NewtonOptions {
  int max_iterations = 12;
  int max_backtracks = 5;
  /// Contraction rate above which the iteration is declared diverging.
  double divergence_rate = 0.9;
};

struct NewtonResult {
  bool converged = false;
  Vector y;
  int iterations = 0;
  NewtonFailure failure = NewtonFailure::none;
  std::string message;
  double rate = 0.0;  ///< last observed contraction rate
};

/// Damped Newton iteration for G(y) = 0.
///
/// `residual(y, g)` evaluates G and may throw chemomech::Error (reported as non_finite).
/// `solve(g)` returns the correction delta with J delta = -g for the current iterate;
/// the caller decides whether J is refreshed. Convergence is declared when the update
/// scaled by `scale` has max-norm <= 1, or when the rate-based error estimate is.
/// Steps that increase ||G|| are halved up to `max_backtracks` times.
NewtonResult newton_solve(const std::function<void(const Vector&, Vector&)>& residual,
                          const std::function<Vector(const Vector&, const Vector&)>& solve,
                          const Vector& y_guess, const Vector& scale,
                          const NewtonOptions& options = {});

// ---------------------------------------------------------------------------
// NDF integrator

struct NdfOptions {
  double rel_tol = 1e-5;
  double abs_tol = 1e-8;
  double initial_step = 1e-8;
  double max_step = 1e-3;
  double min_step = 1e-12;
  int max_order = 5;
  /// kappa = 0: backward differentiation formulas instead of NDFs.
  bool bdf = false;
  /// Keep the order fixed (no order selection).
  std::optional<int> fixed_order;
  /// Take steps of exactly `initial_step` without error control (convergence studies).
  bool fixed_step = false;
  /// Newton tolerance as a fraction of the local error tolerance.
  double newton_fraction = 0.05;
  NewtonOptions newton;
  /// Consecutive failures at the minimal step that abort the run.
  int abort_after_min_step_failures = 3;
  long max_steps = 5'000'000;
};

/// One attempted step, before acceptance.
struct StepAttempt {
  double t_new = 0.0;
  double tau = 0.0;
  int order = 1;
  NewtonResult newton;
  Vector y_new;
  Vector difference;  ///< y_new - predictor, the (k+1)-th backward difference
  double error = 0.0; ///< scaled local error, accept when <= 1
};

struct ControlDecision {
  enum class Kind { accept, retry, abort } kind = Kind::accept;
  double next_step = 0.0;
  int next_order = 1;
  bool refresh_jacobian = false;
  std::string reason;
};

struct StepRecord {
  double t = 0.0;
  double tau = 0.0;
  int order = 1;
  int newton_iterations = 0;
  double error = 0.0;
};

struct AdvanceResult {
  bool reached = false;
  double t = 0.0;
  std::string reason;  ///< set when aborted
};

struct IntegratorStats {
  long accepted = 0;
  long rejected_error = 0;
  long rejected_newton = 0;
  long jacobians = 0;
  long factorizations = 0;
  long rhs_evaluations = 0;
};

/// Variable-order (1..5) numerical differentiation formulas in backward-difference
/// form with quasi-constant step size, for M y' = f(t, y) with singular M.
class NdfIntegrator {
 public:
  NdfIntegrator(DaeSystem& system, NdfOptions options);

  /// Sets the state, projects the algebraic components onto the constraint manifold
  /// and starts at order 1 with the initial step. Throws std::runtime_error if the
  /// projection fails.
  void initialize(double t0, const Vector& y0, bool make_consistent = true);
  /// Restarts at order 1 with the initial step (after a discontinuity in the data).
  void restart();
  /// Starts from exact past values y(t0), y(t0 - h), ..., y(t0 - k h) at order k.
  void initialize_history(double t0, const std::vector<Vector>& past, double h);

  StepAttempt ndf_step();
  ControlDecision step_order_control(const StepAttempt& attempt);
  void accept(const StepAttempt& attempt, const ControlDecision& decision);

  /// Integrates to exactly `t_end`. `on_accept` runs after every accepted step.
  AdvanceResult advance_to(double t_end,
                           const std::function<void(const StepRecord&, const Vector&)>& on_accept = {});

  double time() const { return t_; }
  const Vector& state() const { return y_; }
  int order() const { return k_; }
  double step() const { return h_; }
  const IntegratorStats& stats() const { return stats_; }
  const NdfOptions& options() const { return opt_; }
  /// Slope y' at the current time consistent with the algebraic constraints.
  Vector consistent_slope();

 private:
  Vector weights(const Vector& a, const Vector& b) const;
  void rescale_differences(double ratio);
  void ensure_iteration_matrix(double tau, int order);
  double error_constant(int k) const;
  double alpha(int k) const;
  double inv_gamma(int k) const;

  DaeSystem& sys_;
  NdfOptions opt_;
  double t_ = 0.0;
  Vector y_;
  double h_ = 0.0;
  int k_ = 1;
  Eigen::MatrixXd dif_;  // columns: backward differences of order 1 .. max_order + 2
  int constant_steps_ = 0;
  int consecutive_failures_ = 0;
  int min_step_failures_ = 0;
  bool jacobian_current_ = false;  // evaluated at the current step start
  bool jacobian_valid_ = false;
  SparseMatrix jac_;
  std::unique_ptr<Eigen::SparseLU<SparseMatrix>> lu_;
  double lu_tau_ = -1.0;
  int lu_order_ = -1;
  bool pattern_analyzed_ = false;
  IntegratorStats stats_;
};

}  // namespace chemomech
