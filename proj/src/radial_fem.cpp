#include "chemomech/radial_fem.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <stdexcept>

#include "chemomech/errors.hpp"

namespace chemomech {

std::vector<int> DofMap::interleaved() const {
  std::vector<int> perm(size());
  int next = 0;
  for (int n = 0; n < particle_nodes; ++n) {
    perm[c(n)] = next++;
    perm[mu(n)] = next++;
    perm[u(n)] = next++;
  }
  for (int n = particle_nodes; n < particle_nodes + sei_nodes; ++n) perm[u(n)] = next++;
  return perm;
}

MeshAndDofs build_mesh(double sei_thickness, const MeshSpec& spec) {
  if (spec.degree < 1) throw ConfigError("mesh.degree", "must be at least 1");
  if (spec.particle_elements < 1) throw ConfigError("mesh.particle_elements", "must be positive");
  if (spec.sei_elements < 0) throw ConfigError("mesh.sei_elements", "must be non-negative");
  if (spec.sei_elements > 0 && !(sei_thickness > 0.0))
    throw ConfigError("sei.L0_S_over_L0_P", "must be positive when the shell is meshed");
  if (spec.quadrature_points < 1) throw ConfigError("mesh.quadrature_points", "must be positive");

  MeshAndDofs out;
  Mesh& m = out.mesh;
  const int p = spec.degree;
  m.degree = p;
  m.particle_elements = spec.particle_elements;
  m.particle_nodes = spec.particle_elements * p + 1;
  m.sei_nodes = spec.sei_elements * p;

  const double hp = 1.0 / spec.particle_elements;
  for (int e = 0; e < spec.particle_elements; ++e) {
    const double left = e * hp;
    const double right = e + 1 == spec.particle_elements ? 1.0 : (e + 1) * hp;
    m.elements.push_back({Subdomain::particle, left, right, e * p});
  }
  if (spec.sei_elements > 0) {
    const double hs = sei_thickness / spec.sei_elements;
    for (int e = 0; e < spec.sei_elements; ++e) {
      const double left = 1.0 + e * hs;
      const double right = e + 1 == spec.sei_elements ? 1.0 + sei_thickness : 1.0 + (e + 1) * hs;
      m.elements.push_back({Subdomain::sei, left, right, m.particle_nodes - 1 + e * p});
    }
  }
  m.nodes.assign(m.particle_nodes + m.sei_nodes, 0.0);
  for (const auto& el : m.elements)
    for (int i = 0; i <= p; ++i)
      m.nodes[el.first_node + i] = el.left + (el.right - el.left) * i / p;

  out.dofs.particle_nodes = m.particle_nodes;
  out.dofs.sei_nodes = m.sei_nodes;
  return out;
}

int bandwidth(const SparseMatrix& a, const std::vector<int>& perm) {
  int bw = 0;
  for (int k = 0; k < a.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(a, k); it; ++it)
      bw = std::max(bw, std::abs(perm[it.row()] - perm[it.col()]));
  return bw;
}

RadialProblem::RadialProblem(const ModelParams& params, OcvCurve ocv, StrainMeasure sei_strain,
                             PlasticityMode plasticity, const MeshSpec& spec)
    : params_(params),
      ocv_(std::move(ocv)),
      sei_strain_(sei_strain),
      plasticity_(plasticity),
      spec_(spec),
      basis_(spec.degree),
      rule_(gauss_legendre(spec.quadrature_points)) {
  if (sei_strain == StrainMeasure::gsv && plasticity != PlasticityMode::elastic)
    throw ConfigError("plasticity_mode", "plastic SEI models require the log strain");
  auto md = build_mesh(params.sei_thickness, spec);
  mesh_ = std::move(md.mesh);
  dofs_ = md.dofs;

  const int nq = static_cast<int>(rule_.points.size());
  shape_.resize(nq);
  dshape_.resize(nq);
  for (int q = 0; q < nq; ++q) {
    basis_.values(rule_.points[q], shape_[q]);
    basis_.derivatives(rule_.points[q], dshape_[q]);
  }

  std::vector<Eigen::Triplet<double>> triplets;
  const int nb = basis_.size();
  for (int e = 0; e < mesh_.particle_elements; ++e) {
    const auto& el = mesh_.elements[e];
    const double jac = 0.5 * (el.right - el.left);
    for (int q = 0; q < nq; ++q) {
      const double r = el.left + (rule_.points[q] + 1.0) * jac;
      const double w = rule_.weights[q] * jac * r * r;
      for (int i = 0; i < nb; ++i)
        for (int j = 0; j < nb; ++j)
          triplets.emplace_back(dofs_.c(el.first_node + i), dofs_.c(el.first_node + j),
                                w * shape_[q][i] * shape_[q][j]);
    }
  }
  mass_.resize(dofs_.size(), dofs_.size());
  mass_.setFromTriplets(triplets.begin(), triplets.end());
  mass_.makeCompressed();

  states_.assign(static_cast<std::size_t>(mesh_.elements.size() - mesh_.particle_elements) * nq,
                 InternalState{});
}

int RadialProblem::element_dof_count(int e) const {
  const int nb = basis_.size();
  return mesh_.elements[e].domain == Subdomain::particle ? 3 * nb : nb;
}

void RadialProblem::element_dofs(int e, std::vector<int>& out) const {
  const auto& el = mesh_.elements[e];
  const int nb = basis_.size();
  out.clear();
  if (el.domain == Subdomain::particle) {
    for (int i = 0; i < nb; ++i) out.push_back(dofs_.c(el.first_node + i));
    for (int i = 0; i < nb; ++i) out.push_back(dofs_.mu(el.first_node + i));
  }
  for (int i = 0; i < nb; ++i) out.push_back(dofs_.u(el.first_node + i));
}

void RadialProblem::gather(int e, const Vector& y, std::vector<double>& local) const {
  std::vector<int> idx;
  element_dofs(e, idx);
  local.resize(idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i) local[i] = y[idx[i]];
}

Tensor2 RadialProblem::sei_piola(int state_index, const Tensor2& f, double tau) const {
  const InternalState& s = states_[state_index];
  if (sei_strain_ == StrainMeasure::gsv || plasticity_ == PlasticityMode::elastic)
    return piola_sei(f, s.plastic, sei_strain_, params_);
  const ProjectorResult pr = projector(f, s, tau, plasticity_, params_);
  return piola_sei_from_mandel(f, pr.plastic_update, pr.mandel);
}

Tensor2 RadialProblem::sei_committed_piola(int state_index, const Tensor2& f) const {
  return piola_sei(f, states_[state_index].plastic, sei_strain_, params_);
}

void RadialProblem::element_residual(int e, double tau, const std::vector<double>& local,
                                     std::vector<double>& out) const {
  const auto& el = mesh_.elements[e];
  const int nb = basis_.size();
  const int nq = static_cast<int>(rule_.points.size());
  const double jac = 0.5 * (el.right - el.left);
  out.assign(local.size(), 0.0);
  const bool particle = el.domain == Subdomain::particle;
  const int u0 = particle ? 2 * nb : 0;

  for (int q = 0; q < nq; ++q) {
    const auto& phi = shape_[q];
    const auto& dphi = dshape_[q];
    const double r = el.left + (rule_.points[q] + 1.0) * jac;
    const double w = rule_.weights[q] * jac * r * r;
    double u = 0.0, du = 0.0;
    for (int i = 0; i < nb; ++i) {
      u += phi[i] * local[u0 + i];
      du += dphi[i] * local[u0 + i];
    }
    du /= jac;
    try {
      const Tensor2 f = radial_deformation_gradient({du, u / r, r});
      Tensor2 piola;
      if (particle) {
        double c = 0.0, mu = 0.0, dmu = 0.0;
        for (int i = 0; i < nb; ++i) {
          c += phi[i] * local[i];
          mu += phi[i] * local[nb + i];
          dmu += dphi[i] * local[nb + i];
        }
        dmu /= jac;
        const double flux = mobility(c, f, ocv_, params_) / params_.c_max * dmu;
        const double mu_eq = chemical_potential(c, f, ocv_, params_).total();
        for (int i = 0; i < nb; ++i) {
          out[i] -= w * flux * dphi[i] / jac;
          out[nb + i] -= w * (mu - mu_eq) * phi[i];
        }
        piola = piola_particle_gsv(c, f, params_);
      } else {
        const int state = (e - mesh_.particle_elements) * nq + q;
        piola = sei_piola(state, f, tau);
      }
      const double p_rr = piola(0, 0);
      const double p_tt = piola(1, 1);
      for (int i = 0; i < nb; ++i)
        out[u0 + i] -= w * (p_rr * dphi[i] / jac + 2.0 * p_tt * phi[i] / r);
    } catch (const AssemblyFailure&) {
      throw;
    } catch (const std::exception& ex) {
      throw AssemblyFailure(e, q, ex.what());
    }
  }
  for (double v : out)
    if (!std::isfinite(v)) throw AssemblyFailure(e, -1, "non-finite residual");
}

void RadialProblem::rhs(double /*t*/, double tau, const Vector& y, Vector& f) {
  f.setZero(dofs_.size());
  std::vector<double> local, out;
  std::vector<int> idx;
  for (int e = 0; e < static_cast<int>(mesh_.elements.size()); ++e) {
    gather(e, y, local);
    element_residual(e, tau, local, out);
    element_dofs(e, idx);
    for (std::size_t i = 0; i < idx.size(); ++i) f[idx[i]] += out[i];
  }
  f[dofs_.c(dofs_.particle_nodes - 1)] += surface_flux_;
  f[dofs_.u(0)] = -y[dofs_.u(0)];
}

SparseMatrix RadialProblem::jacobian(double /*t*/, double tau, const Vector& y) {
  static const double kStep = std::sqrt(std::numeric_limits<double>::epsilon());
  std::vector<Eigen::Triplet<double>> triplets;
  std::vector<double> local, plus, minus;
  std::vector<int> idx;
  const int pinned = dofs_.u(0);
  for (int e = 0; e < static_cast<int>(mesh_.elements.size()); ++e) {
    gather(e, y, local);
    element_dofs(e, idx);
    const int n = static_cast<int>(idx.size());
    for (int j = 0; j < n; ++j) {
      const double saved = local[j];
      const double h = kStep * (1.0 + std::abs(saved));
      local[j] = saved + h;
      element_residual(e, tau, local, plus);
      local[j] = saved - h;
      element_residual(e, tau, local, minus);
      local[j] = saved;
      for (int i = 0; i < n; ++i) {
        if (idx[i] == pinned) continue;
        const double d = (plus[i] - minus[i]) / (2.0 * h);
        if (!std::isfinite(d)) throw JacobianNonFinite("jacobian: non-finite entry in element " +
                                                       std::to_string(e));
        triplets.emplace_back(idx[i], idx[j], d);
      }
    }
  }
  triplets.emplace_back(pinned, pinned, -1.0);
  SparseMatrix jac(dofs_.size(), dofs_.size());
  jac.setFromTriplets(triplets.begin(), triplets.end());
  jac.makeCompressed();
  return jac;
}

Tensor2 RadialProblem::deformation_at(int e, double xi, const std::vector<double>& local,
                                      double& r) const {
  const auto& el = mesh_.elements[e];
  const int nb = basis_.size();
  const int u0 = el.domain == Subdomain::particle ? 2 * nb : 0;
  const double jac = 0.5 * (el.right - el.left);
  std::vector<double> phi, dphi;
  basis_.values(xi, phi);
  basis_.derivatives(xi, dphi);
  double u = 0.0, du = 0.0;
  for (int i = 0; i < nb; ++i) {
    u += phi[i] * local[u0 + i];
    du += dphi[i] * local[u0 + i];
  }
  du /= jac;
  r = el.left + (xi + 1.0) * jac;
  return radial_deformation_gradient({du, r > 0.0 ? u / r : du, r});
}

void RadialProblem::commit(double /*t*/, double tau, const Vector& y) {
  if (sei_strain_ == StrainMeasure::gsv || plasticity_ == PlasticityMode::elastic) return;
  const int nq = static_cast<int>(rule_.points.size());
  std::vector<double> local;
  for (int e = mesh_.particle_elements; e < static_cast<int>(mesh_.elements.size()); ++e) {
    gather(e, y, local);
    for (int q = 0; q < nq; ++q) {
      double r = 0.0;
      const Tensor2 f = deformation_at(e, rule_.points[q], local, r);
      InternalState& s = states_[(e - mesh_.particle_elements) * nq + q];
      const ProjectorResult pr = projector(f, s, tau, plasticity_, params_);
      if (pr.map.yielded && pr.map.delta_eps > 0.0)
        s = InternalState{pr.plastic_update, s.eps_pl_eq + pr.map.delta_eps};
    }
  }
}

Vector RadialProblem::initial_state(double c0) const {
  Vector y = Vector::Zero(dofs_.size());
  const double stretch = chemical_stretch(c0, params_.swelling);
  const double mu0 = -params_.faraday * ocv_.value(c0);
  for (int n = 0; n < dofs_.particle_nodes; ++n) {
    y[dofs_.c(n)] = c0;
    y[dofs_.mu(n)] = mu0;
    y[dofs_.u(n)] = mesh_.nodes[n] * (stretch - 1.0);
  }
  for (int n = dofs_.particle_nodes; n < dofs_.particle_nodes + dofs_.sei_nodes; ++n)
    y[dofs_.u(n)] = stretch - 1.0;
  return y;
}

double RadialProblem::mean_concentration(const Vector& y) const {
  return 3.0 * (mass_ * y).head(dofs_.particle_nodes).sum();
}

double RadialProblem::surface_chemical_potential(const Vector& y) const {
  return y[dofs_.mu(dofs_.particle_nodes - 1)];
}

int RadialProblem::locate(double r, Subdomain domain) const {
  if (domain == Subdomain::particle) {
    if (!(r >= 0.0 && r <= 1.0)) throw SampleOutOfDomain("sample radius outside the particle");
    const int n = mesh_.particle_elements;
    return std::clamp(static_cast<int>(r * n), 0, n - 1);
  }
  const int first = mesh_.particle_elements;
  const int n = static_cast<int>(mesh_.elements.size()) - first;
  const double outer = mesh_.elements.back().right;
  if (n == 0 || !(r >= 1.0 && r <= outer)) throw SampleOutOfDomain("sample radius outside the SEI");
  return first + std::clamp(static_cast<int>((r - 1.0) / (outer - 1.0) * n), 0, n - 1);
}

std::vector<FieldSample> RadialProblem::sample_fields(const Vector& y,
                                                      const std::vector<double>& radii) const {
  const bool has_sei = mesh_.elements.size() > static_cast<std::size_t>(mesh_.particle_elements);
  const double outer = mesh_.elements.back().right;
  const int nb = basis_.size();
  const int nq = static_cast<int>(rule_.points.size());
  std::vector<FieldSample> out;
  std::vector<double> local, phi;
  for (double r : radii) {
    if (!(r >= 0.0 && r <= outer)) throw SampleOutOfDomain("sample radius " + std::to_string(r));
    std::vector<Subdomain> sides;
    if (r <= 1.0) sides.push_back(Subdomain::particle);
    if (has_sei && r >= 1.0) sides.push_back(Subdomain::sei);
    for (Subdomain side : sides) {
      const int e = locate(r, side);
      const auto& el = mesh_.elements[e];
      const double xi = std::clamp(2.0 * (r - el.left) / (el.right - el.left) - 1.0, -1.0, 1.0);
      gather(e, y, local);
      double rr = 0.0;
      const Tensor2 f = deformation_at(e, xi, local, rr);
      basis_.values(xi, phi);
      FieldSample s;
      s.r = r;
      s.domain = side;
      const int u0 = side == Subdomain::particle ? 2 * nb : 0;
      for (int i = 0; i < nb; ++i) s.u += phi[i] * local[u0 + i];
      Tensor2 piola;
      if (side == Subdomain::particle) {
        for (int i = 0; i < nb; ++i) {
          s.c += phi[i] * local[i];
          s.mu += phi[i] * local[nb + i];
        }
        piola = piola_particle_gsv(s.c, f, params_);
      } else {
        s.c = s.mu = std::numeric_limits<double>::quiet_NaN();
        int nearest = 0;
        for (int q = 1; q < nq; ++q)
          if (std::abs(rule_.points[q] - xi) < std::abs(rule_.points[nearest] - xi)) nearest = q;
        piola = sei_committed_piola((e - mesh_.particle_elements) * nq + nearest, f);
      }
      const Tensor2 sigma = cauchy_from_piola(piola, f);
      s.sigma_rr = sigma(0, 0);
      s.sigma_tt = sigma(1, 1);
      out.push_back(s);
    }
  }
  return out;
}

double RadialProblem::interface_hoop_stress(const Vector& y) const {
  return sample_fields(y, {1.0}).back().sigma_tt;
}

double RadialProblem::max_yield_excess(const Vector& y) const {
  double worst = -std::numeric_limits<double>::infinity();
  const int nq = static_cast<int>(rule_.points.size());
  std::vector<double> local;
  for (int e = mesh_.particle_elements; e < static_cast<int>(mesh_.elements.size()); ++e) {
    gather(e, y, local);
    for (int q = 0; q < nq; ++q) {
      double r = 0.0;
      const Tensor2 f = deformation_at(e, rule_.points[q], local, r);
      const InternalState& s = states_[(e - mesh_.particle_elements) * nq + q];
      const Tensor2 m = mandel_stress(hencky_strain(elastic_part(f, SeiSplit{s.plastic})), params_);
      worst = std::max(worst, yield_function(m, params_));
    }
  }
  return worst;
}

void RadialProblem::set_internal_states(std::vector<InternalState> states) {
  if (states.size() != states_.size())
    throw std::invalid_argument("set_internal_states: size mismatch");
  states_ = std::move(states);
}

std::uint64_t RadialProblem::internal_state_hash() const {
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&h](double v) {
    unsigned char bytes[sizeof(double)];
    std::memcpy(bytes, &v, sizeof v);
    for (unsigned char b : bytes) {
      h ^= b;
      h *= 1099511628211ull;
    }
  };
  for (const auto& s : states_) {
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) mix(s.plastic(i, j));
    mix(s.eps_pl_eq);
  }
  return h;
}

}  // namespace chemomech
