#include "chemomech/time_integrator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "chemomech/errors.hpp"

namespace chemomech {

const char* to_string(NewtonFailure f) {
  switch (f) {
    case NewtonFailure::none:
      return "none";
    case NewtonFailure::max_iterations:
      return "max-iterations";
    case NewtonFailure::non_finite:
      return "non-finite";
    case NewtonFailure::backtrack_exhausted:
      return "backtrack-exhausted";
    case NewtonFailure::diverging:
      return "diverging";
  }
  return "unknown";
}

NewtonResult newton_solve(const std::function<void(const Vector&, Vector&)>& residual,
                          const std::function<Vector(const Vector&, const Vector&)>& solve,
                          const Vector& y_guess, const Vector& scale,
                          const NewtonOptions& options) {
  NewtonResult out;
  out.y = y_guess;
  auto fail = [&out](NewtonFailure why, std::string msg) {
    out.failure = why;
    out.message = std::move(msg);
    return out;
  };
  Vector g;
  try {
    residual(out.y, g);
  } catch (const std::exception& ex) {
    return fail(NewtonFailure::non_finite, ex.what());
  }
  if (!g.allFinite()) return fail(NewtonFailure::non_finite, "non-finite residual");
  double g_norm = g.norm();
  double first_norm = 0.0;

  for (int it = 1; it <= options.max_iterations; ++it) {
    out.iterations = it;
    Vector delta;
    try {
      delta = solve(out.y, g);
    } catch (const std::exception& ex) {
      return fail(NewtonFailure::non_finite, ex.what());
    }
    if (!delta.allFinite()) return fail(NewtonFailure::non_finite, "non-finite update");
    const double eta = (delta.array() / scale.array()).abs().maxCoeff();
    if (it == 1) first_norm = eta;
    double rate = 0.0;
    if (it > 1 && first_norm > 0.0) {
      rate = std::pow(eta / first_norm, 1.0 / (it - 1));
      out.rate = rate;
    }
    if (eta <= 1.0 || (it > 1 && rate < 1.0 && eta * rate / (1.0 - rate) <= 1.0)) {
      out.y += delta;
      out.converged = true;
      return out;
    }
    if (it > 1 && rate > options.divergence_rate)
      return fail(NewtonFailure::diverging, "contraction rate " + std::to_string(rate));

    Vector trial, g_trial;
    bool ok = false;
    for (int b = 0; b <= options.max_backtracks; ++b) {
      trial = out.y + delta;
      try {
        residual(trial, g_trial);
        ok = g_trial.allFinite() && g_trial.norm() <= g_norm;
      } catch (const std::exception&) {
        ok = false;
      }
      if (ok) break;
      delta *= 0.5;
    }
    if (!ok) return fail(NewtonFailure::backtrack_exhausted, "residual did not decrease");
    out.y = std::move(trial);
    g = std::move(g_trial);
    g_norm = g.norm();
    if (g_norm == 0.0) {
      out.converged = true;
      return out;
    }
  }
  return fail(NewtonFailure::max_iterations, "no convergence");
}

namespace {

constexpr int kMaxOrder = 5;
constexpr std::array<double, kMaxOrder> kG = {1.0, 3.0 / 2.0, 11.0 / 6.0, 25.0 / 12.0, 137.0 / 60.0};
constexpr std::array<double, kMaxOrder> kKappa = {-0.1850, -1.0 / 9.0, -0.0823, -0.0415, 0.0};

// R(rho)_{ij} = prod_{m=1}^{i} (m - 1 - j rho) / m, i, j = 1..5.
Eigen::MatrixXd difference_rescale(double rho) {
  Eigen::MatrixXd r(kMaxOrder, kMaxOrder);
  for (int j = 1; j <= kMaxOrder; ++j) {
    double prod = 1.0;
    for (int i = 1; i <= kMaxOrder; ++i) {
      prod *= (i - 1.0 - j * rho) / i;
      r(i - 1, j - 1) = prod;
    }
  }
  return r;
}

}  // namespace

NdfIntegrator::NdfIntegrator(DaeSystem& system, NdfOptions options)
    : sys_(system), opt_(std::move(options)) {
  if (opt_.max_order < 1 || opt_.max_order > kMaxOrder)
    throw std::invalid_argument("NdfIntegrator: max_order must lie in [1, 5]");
  if (opt_.fixed_order && (*opt_.fixed_order < 1 || *opt_.fixed_order > kMaxOrder))
    throw std::invalid_argument("NdfIntegrator: fixed_order must lie in [1, 5]");
  if (!(opt_.rel_tol > 0.0) || !(opt_.abs_tol > 0.0))
    throw std::invalid_argument("NdfIntegrator: tolerances must be positive");
  if (!(opt_.min_step > 0.0) || !(opt_.initial_step >= opt_.min_step) ||
      !(opt_.max_step >= opt_.initial_step))
    throw std::invalid_argument("NdfIntegrator: need 0 < min_step <= initial_step <= max_step");
  dif_ = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(sys_.size()), kMaxOrder + 2);
}

double NdfIntegrator::alpha(int k) const { return opt_.bdf ? 0.0 : kKappa[k - 1]; }

double NdfIntegrator::inv_gamma(int k) const { return 1.0 / (kG[k - 1] * (1.0 - alpha(k))); }

double NdfIntegrator::error_constant(int k) const { return alpha(k) * kG[k - 1] + 1.0 / (k + 1); }

Vector NdfIntegrator::weights(const Vector& a, const Vector& b) const {
  return (opt_.rel_tol * a.cwiseAbs().cwiseMax(b.cwiseAbs())).cwiseMax(opt_.abs_tol);
}

Vector NdfIntegrator::consistent_slope() {
  const SparseMatrix& m = sys_.mass();
  const auto n = static_cast<Eigen::Index>(sys_.size());
  std::vector<bool> differential(n, false);
  for (int k = 0; k < m.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(m, k); it; ++it)
      if (it.value() != 0.0) differential[it.row()] = true;

  Vector f;
  sys_.rhs(t_, opt_.initial_step, y_, f);
  ++stats_.rhs_evaluations;
  const SparseMatrix j = sys_.jacobian(t_, opt_.initial_step, y_);
  ++stats_.jacobians;

  std::vector<Eigen::Triplet<double>> trip;
  for (int k = 0; k < m.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(m, k); it; ++it)
      if (differential[it.row()]) trip.emplace_back(it.row(), it.col(), it.value());
  for (int k = 0; k < j.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(j, k); it; ++it)
      if (!differential[it.row()]) trip.emplace_back(it.row(), it.col(), it.value());
  SparseMatrix a(n, n);
  a.setFromTriplets(trip.begin(), trip.end());
  a.makeCompressed();
  Vector b = Vector::Zero(n);
  for (Eigen::Index i = 0; i < n; ++i)
    if (differential[i]) b[i] = f[i];
  Eigen::SparseLU<SparseMatrix> lu;
  lu.compute(a);
  if (lu.info() != Eigen::Success) throw std::runtime_error("consistent slope: singular system");
  return lu.solve(b);
}

void NdfIntegrator::initialize(double t0, const Vector& y0, bool make_consistent) {
  if (static_cast<std::size_t>(y0.size()) != sys_.size())
    throw std::invalid_argument("NdfIntegrator::initialize: state size mismatch");
  t_ = t0;
  y_ = y0;
  if (make_consistent) {
    const SparseMatrix& m = sys_.mass();
    const auto n = static_cast<Eigen::Index>(sys_.size());
    std::vector<bool> differential(n, false);
    for (int k = 0; k < m.outerSize(); ++k)
      for (SparseMatrix::InnerIterator it(m, k); it; ++it)
        if (it.value() != 0.0) differential[it.row()] = true;
    std::vector<Eigen::Index> alg;
    for (Eigen::Index i = 0; i < n; ++i)
      if (!differential[i]) alg.push_back(i);
    if (!alg.empty()) {
      const auto na = static_cast<Eigen::Index>(alg.size());
      std::vector<Eigen::Index> where(n, -1);
      for (Eigen::Index i = 0; i < na; ++i) where[alg[i]] = i;
      auto embed = [&](const Vector& ya) {
        Vector y = y_;
        for (Eigen::Index i = 0; i < na; ++i) y[alg[i]] = ya[i];
        return y;
      };
      auto residual = [&](const Vector& ya, Vector& g) {
        Vector f;
        sys_.rhs(t_, opt_.initial_step, embed(ya), f);
        ++stats_.rhs_evaluations;
        g.resize(na);
        for (Eigen::Index i = 0; i < na; ++i) g[i] = f[alg[i]];
      };
      Eigen::SparseLU<SparseMatrix> lu;
      auto solve = [&](const Vector& ya, const Vector& g) -> Vector {
        const SparseMatrix j = sys_.jacobian(t_, opt_.initial_step, embed(ya));
        ++stats_.jacobians;
        std::vector<Eigen::Triplet<double>> trip;
        for (int k = 0; k < j.outerSize(); ++k)
          for (SparseMatrix::InnerIterator it(j, k); it; ++it)
            if (where[it.row()] >= 0 && where[it.col()] >= 0)
              trip.emplace_back(where[it.row()], where[it.col()], it.value());
        SparseMatrix jaa(na, na);
        jaa.setFromTriplets(trip.begin(), trip.end());
        lu.compute(jaa);
        if (lu.info() != Eigen::Success) throw std::runtime_error("singular algebraic block");
        return lu.solve(-g);
      };
      Vector ya(na);
      for (Eigen::Index i = 0; i < na; ++i) ya[i] = y_[alg[i]];
      Vector scale(na);
      for (Eigen::Index i = 0; i < na; ++i)
        scale[i] = opt_.newton_fraction * std::max(opt_.abs_tol, opt_.rel_tol * std::abs(ya[i]));
      NewtonOptions nopt = opt_.newton;
      nopt.max_iterations = std::max(nopt.max_iterations, 50);
      const NewtonResult res = newton_solve(residual, solve, ya, scale, nopt);
      if (!res.converged)
        throw std::runtime_error(std::string("consistent initialization failed: ") +
                                 to_string(res.failure) + " (" + res.message + ")");
      y_ = embed(res.y);
    }
  }
  restart();
}

void NdfIntegrator::restart() {
  h_ = opt_.initial_step;
  k_ = opt_.fixed_order.value_or(1);
  dif_.setZero();
  dif_.col(0) = h_ * consistent_slope();
  if (k_ > 1) throw std::logic_error("restart: a fixed order above 1 needs initialize_history");
  constant_steps_ = 0;
  consecutive_failures_ = 0;
  min_step_failures_ = 0;
  jacobian_current_ = false;
  jacobian_valid_ = false;
  lu_tau_ = -1.0;
}

void NdfIntegrator::initialize_history(double t0, const std::vector<Vector>& past, double h) {
  const int k = static_cast<int>(past.size()) - 1;
  if (k < 1 || k > kMaxOrder) throw std::invalid_argument("initialize_history: need 2..6 values");
  t_ = t0;
  y_ = past[0];
  h_ = h;
  k_ = k;
  dif_.setZero();
  std::vector<Vector> level = past;  // level[i] = nabla^j y_{n-i}
  for (int j = 1; j <= k; ++j) {
    for (int i = 0; i + j <= k; ++i) level[i] = level[i] - level[i + 1];
    dif_.col(j - 1) = level[0];
  }
  constant_steps_ = k + 2;
  consecutive_failures_ = 0;
  min_step_failures_ = 0;
  jacobian_current_ = false;
  jacobian_valid_ = false;
  lu_tau_ = -1.0;
}

void NdfIntegrator::rescale_differences(double ratio) {
  if (ratio == 1.0) return;
  const Eigen::MatrixXd ru = difference_rescale(ratio) * difference_rescale(1.0);
  dif_.leftCols(k_) = dif_.leftCols(k_) * ru.topLeftCorner(k_, k_);
}

void NdfIntegrator::ensure_iteration_matrix(double tau, int order) {
  if (!jacobian_valid_) {
    jac_ = sys_.jacobian(t_, tau, y_);
    jacobian_valid_ = true;
    ++stats_.jacobians;
    jacobian_current_ = true;
    lu_tau_ = -1.0;
  }
  const double hg = tau * inv_gamma(order);
  if (lu_ && lu_tau_ == hg) return;
  SparseMatrix miter = sys_.mass() - hg * jac_;
  miter.makeCompressed();
  if (!lu_) lu_ = std::make_unique<Eigen::SparseLU<SparseMatrix>>();
  if (!pattern_analyzed_) {
    lu_->analyzePattern(miter);
    pattern_analyzed_ = true;
  }
  lu_->factorize(miter);
  ++stats_.factorizations;
  if (lu_->info() != Eigen::Success) {
    lu_tau_ = -1.0;
    throw JacobianNonFinite("iteration matrix is singular");
  }
  lu_tau_ = hg;
  lu_order_ = order;
}

StepAttempt NdfIntegrator::ndf_step() {
  StepAttempt a;
  a.tau = h_;
  a.order = k_;
  a.t_new = t_ + h_;
  const int k = k_;
  const double hg = h_ * inv_gamma(k);

  const Vector pred = y_ + dif_.leftCols(k).rowwise().sum();
  Vector psi = Vector::Zero(y_.size());
  for (int j = 0; j < k; ++j) psi += dif_.col(j) * (kG[j] * inv_gamma(k));
  const SparseMatrix& m = sys_.mass();
  const Vector m_psi = m * psi;

  auto residual = [&](const Vector& y, Vector& g) {
    Vector f;
    sys_.rhs(a.t_new, a.tau, y, f);
    ++stats_.rhs_evaluations;
    g = m_psi + m * (y - pred) - hg * f;
  };
  auto solve = [&](const Vector&, const Vector& g) -> Vector {
    ensure_iteration_matrix(a.tau, k);
    return lu_->solve(-g);
  };
  const Vector scale = opt_.newton_fraction * weights(y_, pred);
  a.newton = newton_solve(residual, solve, pred, scale, opt_.newton);
  a.y_new = a.newton.y;
  if (a.newton.converged) {
    a.difference = a.y_new - pred;
    const Vector w = weights(y_, a.y_new);
    a.error = (a.difference.array() / w.array()).abs().maxCoeff() * error_constant(k);
  } else {
    a.error = std::numeric_limits<double>::infinity();
  }
  return a;
}

ControlDecision NdfIntegrator::step_order_control(const StepAttempt& a) {
  ControlDecision d;
  const int k = a.order;
  const double h = a.tau;
  const bool at_min = h <= opt_.min_step * (1.0 + 1e-12);

  auto reject = [&](const std::string& why, bool newton) {
    if (at_min && ++min_step_failures_ >= opt_.abort_after_min_step_failures) {
      d.kind = ControlDecision::Kind::abort;
      d.reason = why + " at the minimal step size";
      return d;
    }
    d.kind = ControlDecision::Kind::retry;
    d.reason = why;
    if (newton && !jacobian_current_ && a.newton.iterations > 0) {
      d.next_step = h;
      d.next_order = k;
      d.refresh_jacobian = true;
      return d;
    }
    ++consecutive_failures_;
    double next = 0.5 * h;
    int order = opt_.fixed_order.value_or(std::max(1, k - 1));
    if (!newton && consecutive_failures_ == 1) {
      const Vector w = weights(y_, a.y_new);
      const double temp = 1.2 * std::pow(a.error, 1.0 / (k + 1));
      double hopt = temp < 10.0 ? h / temp : 0.1 * h;
      order = k;
      if (k > 1 && !opt_.fixed_order) {
        const double errkm1 =
            ((dif_.col(k - 1) + a.difference).array() / w.array()).abs().maxCoeff() *
            error_constant(k - 1);
        const double temp1 = 1.3 * std::pow(errkm1, 1.0 / k);
        const double hkm1 = temp1 < 10.0 ? h / temp1 : 0.1 * h;
        if (hkm1 > hopt) {
          hopt = std::min(h, hkm1);
          order = k - 1;
        }
      }
      next = std::min(next, hopt);
    }
    d.next_step = opt_.fixed_step ? h : std::max(opt_.min_step, next);
    d.next_order = order;
    return d;
  };

  if (!a.newton.converged) return reject(std::string("newton ") + to_string(a.newton.failure), true);
  if (!opt_.fixed_step && a.error > 1.0) return reject("local error test", false);

  d.kind = ControlDecision::Kind::accept;
  d.next_step = h;
  d.next_order = k;
  if (opt_.fixed_step) return d;
  if (constant_steps_ + 1 >= k + 2) {
    const Vector w = weights(y_, a.y_new);
    const double temp = 1.2 * std::pow(a.error, 1.0 / (k + 1));
    double hopt = temp > 0.1 ? h / temp : 10.0 * h;
    int kopt = k;
    if (!opt_.fixed_order) {
      if (k > 1) {
        const double errkm1 =
            ((dif_.col(k - 1) + a.difference).array() / w.array()).abs().maxCoeff() *
            error_constant(k - 1);
        const double t1 = 1.3 * std::pow(errkm1, 1.0 / k);
        const double hkm1 = t1 > 0.1 ? h / t1 : 10.0 * h;
        if (hkm1 > hopt) {
          hopt = hkm1;
          kopt = k - 1;
        }
      }
      if (k < opt_.max_order) {
        const double errkp1 = ((a.difference - dif_.col(k)).array() / w.array()).abs().maxCoeff() *
                              error_constant(k + 1);
        const double t2 = 1.4 * std::pow(errkp1, 1.0 / (k + 2));
        const double hkp1 = t2 > 0.1 ? h / t2 : 10.0 * h;
        if (hkp1 > hopt) {
          hopt = hkp1;
          kopt = k + 1;
        }
      }
    }
    if (hopt > h) {
      d.next_step = std::min({hopt, 2.0 * h, opt_.max_step});
      d.next_order = kopt;
    }
  }
  return d;
}

void NdfIntegrator::accept(const StepAttempt& a, const ControlDecision& d) {
  const int k = a.order;
  // nabla^{k+2} y_{n+1} = nabla^{k+1} y_{n+1} - nabla^{k+1} y_n, then lower orders.
  dif_.col(k + 1) = a.difference - dif_.col(k);
  dif_.col(k) = a.difference;
  for (int j = k - 1; j >= 0; --j) dif_.col(j) += dif_.col(j + 1);

  t_ = a.t_new;
  y_ = a.y_new;
  sys_.commit(t_, a.tau, y_);
  ++stats_.accepted;
  consecutive_failures_ = 0;
  min_step_failures_ = 0;
  jacobian_current_ = false;
  // Slow contraction: evaluate a fresh Jacobian at the start of the next step.
  if (a.newton.iterations >= 5 || a.newton.rate > 0.5) jacobian_valid_ = false;

  if (d.next_step != a.tau || d.next_order != k) {
    constant_steps_ = 0;
  } else {
    ++constant_steps_;
  }
  h_ = a.tau;
  k_ = d.next_order;
  if (d.next_step != a.tau) {
    rescale_differences(d.next_step / a.tau);
    h_ = d.next_step;
  }
}

AdvanceResult NdfIntegrator::advance_to(
    double t_end, const std::function<void(const StepRecord&, const Vector&)>& on_accept) {
  AdvanceResult res;
  if (!(t_end >= t_)) throw std::invalid_argument("advance_to: target lies in the past");
  long steps = 0;
  while (t_ < t_end) {
    if (++steps > opt_.max_steps) {
      res.t = t_;
      res.reason = "step limit reached";
      return res;
    }
    // Clip (or stretch) the step to land exactly on the breakpoint.
    double target = h_;
    bool final_step = false;
    if (t_ + 1.1 * target >= t_end && !opt_.fixed_step) {
      target = t_end - t_;
      final_step = true;
    } else if (opt_.fixed_step && t_ + target >= t_end - 1e-12 * std::abs(t_end)) {
      target = t_end - t_;
      final_step = true;
    }
    if (target != h_) {
      rescale_differences(target / h_);
      h_ = target;
      constant_steps_ = 0;
    }

    StepAttempt attempt = ndf_step();
    if (final_step) attempt.t_new = t_end;
    if (!attempt.newton.converged) ++stats_.rejected_newton;
    ControlDecision decision = step_order_control(attempt);
    if (decision.kind == ControlDecision::Kind::abort) {
      res.t = t_;
      res.reason = decision.reason;
      return res;
    }
    if (decision.kind == ControlDecision::Kind::retry) {
      if (attempt.newton.converged) ++stats_.rejected_error;
      if (decision.refresh_jacobian) {
        jacobian_valid_ = false;
        continue;
      }
      k_ = decision.next_order;
      rescale_differences(decision.next_step / h_);
      h_ = decision.next_step;
      constant_steps_ = 0;
      continue;
    }
    accept(attempt, decision);
    if (final_step) t_ = t_end;
    if (on_accept)
      on_accept(StepRecord{t_, attempt.tau, attempt.order, attempt.newton.iterations, attempt.error},
                y_);
  }
  res.reached = true;
  res.t = t_;
  return res;
}

}  // namespace chemomech
