#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "chemomech/constitutive.hpp"
#include "chemomech/dae_system.hpp"
#include "chemomech/plasticity.hpp"
#include "chemomech/quadrature.hpp"

namespace chemomech {

enum class Subdomain { particle, sei };

struct MeshSpec {
  int degree = 4;
  int particle_elements = 120;
  int sei_elements = 12;  ///< 0 gives a bare particle
  int quadrature_points = 6;
};

/// Uniform Lagrange mesh of [0, 1] (particle) and [1, 1 + L_S] (SEI).
/// Global nodes are numbered outward; the interface node is shared.
struct Mesh {
  struct Element {
    Subdomain domain;
    double left;
    double right;
    int first_node;  ///< nodes first_node .. first_node + degree
  };

  int degree = 4;
  int particle_nodes = 0;  ///< including the interface node
  int sei_nodes = 0;       ///< excluding the interface node
  std::vector<double> nodes;
  std::vector<Element> elements;
  int particle_elements = 0;
};

/// Block layout [c | mu | u_P | u_S]; the u_S block excludes the shared interface node.
struct DofMap {
  int particle_nodes = 0;
  int sei_nodes = 0;

  int c(int node) const { return node; }
  int mu(int node) const { return particle_nodes + node; }
  int u(int node) const { return 2 * particle_nodes + node; }
  int size() const { return 3 * particle_nodes + sei_nodes; }
  bool is_differential(int dof) const { return dof < particle_nodes; }

  /// Permutation to node-interleaved ordering: new index of each dof.
  std::vector<int> interleaved() const;
};

struct MeshAndDofs {
  Mesh mesh;
  DofMap dofs;
};

MeshAndDofs build_mesh(double sei_thickness, const MeshSpec& spec);

/// Half-bandwidth of `a` after renumbering rows and columns with `perm`.
int bandwidth(const SparseMatrix& a, const std::vector<int>& perm);

struct FieldSample {
  double r = 0.0;
  Subdomain domain = Subdomain::particle;
  double c = 0.0;   ///< NaN in the SEI
  double mu = 0.0;  ///< NaN in the SEI
  double u = 0.0;
  double sigma_rr = 0.0;
  double sigma_tt = 0.0;
};

/// Finite-element semi-discretization of the coupled particle/SEI problem in
/// dimensionless units. `surface_flux` is the inward lithium flux at r = 1 in units of
/// c_bar per hour per unit area; the mean concentration changes at 3 * surface_flux.
class RadialProblem : public DaeSystem {
 public:
  RadialProblem(const ModelParams& params, OcvCurve ocv, StrainMeasure sei_strain,
                PlasticityMode plasticity, const MeshSpec& spec);

  std::size_t size() const override { return static_cast<std::size_t>(dofs_.size()); }
  const SparseMatrix& mass() const override { return mass_; }
  void rhs(double t, double tau, const Vector& y, Vector& f) override;
  SparseMatrix jacobian(double t, double tau, const Vector& y) override;
  void commit(double t, double tau, const Vector& y) override;

  void set_surface_flux(double q) { surface_flux_ = q; }
  double surface_flux() const { return surface_flux_; }

  const Mesh& mesh() const { return mesh_; }
  const DofMap& dofs() const { return dofs_; }
  const ModelParams& params() const { return params_; }
  const OcvCurve& ocv_curve() const { return ocv_; }
  StrainMeasure sei_strain() const { return sei_strain_; }
  PlasticityMode plasticity() const { return plasticity_; }

  /// Uniform concentration c0, mu consistent with it, zero displacement.
  Vector initial_state(double c0) const;

  /// Integral of c_bar over the unit ball divided by its volume.
  double mean_concentration(const Vector& y) const;
  double surface_chemical_potential(const Vector& y) const;

  /// Fields at the requested radii. r = 1 yields the particle side, and also the SEI
  /// side when a shell is present. SEI stresses use the committed state of the nearest
  /// quadrature point.
  std::vector<FieldSample> sample_fields(const Vector& y, const std::vector<double>& radii) const;
  /// Cauchy hoop stress on the SEI side of the interface (particle side without a shell).
  double interface_hoop_stress(const Vector& y) const;

  /// max over SEI quadrature points of ||dev M|| - sqrt(2/3) sigma_Y for the committed state.
  double max_yield_excess(const Vector& y) const;

  const std::vector<InternalState>& internal_states() const { return states_; }
  void set_internal_states(std::vector<InternalState> states);
  /// FNV-1a hash of the committed internal variables.
  std::uint64_t internal_state_hash() const;

 private:
  struct PointKinematics {
    double r;
    double weight;  // quadrature weight * jacobian * r^2
    Tensor2 f;
  };

  int element_dof_count(int e) const;
  void gather(int e, const Vector& y, std::vector<double>& local) const;
  void element_dofs(int e, std::vector<int>& out) const;
  void element_residual(int e, double tau, const std::vector<double>& local,
                        std::vector<double>& out) const;
  Tensor2 sei_piola(int state_index, const Tensor2& f, double tau) const;
  Tensor2 sei_committed_piola(int state_index, const Tensor2& f) const;
  Tensor2 deformation_at(int e, double xi, const std::vector<double>& local, double& r) const;
  int locate(double r, Subdomain domain) const;

  ModelParams params_;
  OcvCurve ocv_;
  StrainMeasure sei_strain_;
  PlasticityMode plasticity_;
  MeshSpec spec_;
  Mesh mesh_;
  DofMap dofs_;
  LagrangeBasis basis_;
  QuadratureRule rule_;
  std::vector<std::vector<double>> shape_;   // [qp][i]
  std::vector<std::vector<double>> dshape_;  // [qp][i], d/dxi
  SparseMatrix mass_;
  std::vector<InternalState> states_;  // SEI element e_s, point q -> e_s * nq + q
  double surface_flux_ = 0.0;
};

}  // namespace chemomech
