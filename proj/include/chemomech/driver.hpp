#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "chemomech/constitutive.hpp"
#include "chemomech/plasticity.hpp"
#include "chemomech/radial_fem.hpp"
#include "chemomech/time_integrator.hpp"

namespace chemomech {

enum class MeshProfile { ci, paper };

struct Tolerances {
  double rel_tol = 1e-5;
  double abs_tol = 1e-8;
  double initial_step_h = 1e-8;
  double max_step_h = 1e-3;
  double min_step_h = 1e-12;
};

struct ScenarioConfig {
  std::string name = "scenario";
  StrainMeasure strain_mode = StrainMeasure::log;
  PlasticityMode plasticity_mode = PlasticityMode::elastic;
  double c_rate_per_h = 1.0;
  int half_cycles = 3;
  double half_cycle_duration_h = 0.9;
  double c0 = 0.02;
  MeshProfile mesh_profile = MeshProfile::ci;
  /// Explicit element counts override the profile.
  std::optional<MeshSpec> mesh;
  Tolerances tolerances;
  MaterialParams material;
  /// Two-column OCV table; empty selects the built-in silicon curve.
  std::string ocv_table;
  ButlerVolmerParams butler_volmer;
  std::string output_dir = "out";
  int profile_points_particle = 201;
  int profile_points_sei = 41;

  /// Throws ConfigError naming the offending field.
  void validate() const;
};

MeshSpec mesh_for(const ScenarioConfig& config);

ScenarioConfig parse_config(const nlohmann::json& doc, const std::filesystem::path& base_dir = {});
ScenarioConfig load_config(const std::filesystem::path& path);
nlohmann::json to_json(const ScenarioConfig& config);

std::string to_string(StrainMeasure m);
std::string to_string(PlasticityMode m);

std::unique_ptr<RadialProblem> make_problem(const ScenarioConfig& config);

struct InitialState {
  Vector y;
  std::vector<InternalState> internal;
};

/// c = c0, mu = -Fa U(c0), u_P = r (lambda(c0) - 1), u_S = lambda(c0) - 1, F_pl = Id.
InitialState initialize_state(const ScenarioConfig& config, const RadialProblem& problem);

/// State of charge prescribed by the protocol at time t [h].
double protocol_soc(const ScenarioConfig& config, double t_h);
/// Signed C-rate [1/h] of the half cycle containing t (left-open intervals).
double protocol_rate(const ScenarioConfig& config, double t_h);

struct TimeSeriesRow {
  double t_h = 0.0;
  double soc = 0.0;
  double voltage_V = 0.0;
  double sigma_tt_interface_MPa = 0.0;
  double tau = 0.0;
  int order = 0;
  int newton_iters = 0;
  // Diagnostics, not part of timeseries.csv.
  double mean_concentration = 0.0;
  double mu_surface_V = 0.0;
  double max_yield_excess_MPa = 0.0;
};

struct ProfileRow {
  double r = 0.0;
  double c = 0.0;
  double sigma_rr_MPa = 0.0;
  double sigma_tt_MPa = 0.0;
};

struct Profile {
  std::string tag;
  double t_h = 0.0;
  double soc = 0.0;
  std::vector<ProfileRow> rows;
};

struct Event {
  std::string type;
  double t_h = 0.0;
  double soc = 0.0;
  std::string message;
};

struct RunOutputs {
  ScenarioConfig config;
  std::vector<TimeSeriesRow> series;
  std::vector<Profile> profiles;
  std::vector<Event> events;
  bool aborted = false;
  double abort_soc = 0.0;
  IntegratorStats stats;
  std::uint64_t internal_state_hash = 0;
  int dofs = 0;
  double wall_seconds = 0.0;
};

struct RunHooks {
  /// Called at every accepted step with the dimensionless state.
  std::function<void(const RadialProblem&, const TimeSeriesRow&, const Vector&)> on_step;
};

RunOutputs run_scenario(const ScenarioConfig& config, const RunHooks& hooks = {});

/// timeseries.csv, diagnostics.csv, profile_<tag>.csv, events.jsonl, plot.gp.
/// Throws std::runtime_error naming the path on I/O failure.
void write_outputs(const RunOutputs& outputs, const std::filesystem::path& dir);

std::vector<TimeSeriesRow> read_timeseries(const std::filesystem::path& path);

/// gsv-elastic, log-elastic, log-plastic, log-viscoplastic (1e-3 / s and 1e-4 / s).
std::vector<ScenarioConfig> paper_matrix(const ScenarioConfig& base);

/// Gnuplot script comparing the runs of a matrix stored in sub-directories of `dir`.
void write_matrix_plot(const std::vector<RunOutputs>& runs, const std::filesystem::path& dir);

/// Formats with 17 significant digits.
std::string format_double(double v);

}  // namespace chemomech
