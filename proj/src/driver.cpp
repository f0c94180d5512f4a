#include "chemomech/driver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "chemomech/errors.hpp"

namespace chemomech {

using nlohmann::json;

std::string to_string(StrainMeasure m) { return m == StrainMeasure::gsv ? "gsv" : "log"; }

std::string to_string(PlasticityMode m) {
  switch (m) {
    case PlasticityMode::elastic:
      return "elastic";
    case PlasticityMode::rate_independent:
      return "rate_independent";
    case PlasticityMode::viscoplastic:
      return "viscoplastic";
  }
  return "unknown";
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// ---------------------------------------------------------------------------
// Configuration

void ScenarioConfig::validate() const {
  material.validate();
  auto require = [](bool ok, const char* field, const char* what) {
    if (!ok) throw ConfigError(field, what);
  };
  require(c_rate_per_h > 0.0, "c_rate_per_h", "must be positive");
  require(half_cycles >= 1, "half_cycles", "must be at least 1");
  require(half_cycle_duration_h > 0.0, "half_cycle_duration_h", "must be positive");
  require(c0 >= 0.0 && c0 < 1.0, "c0", "must lie in [0, 1)");
  require(half_cycle_duration_h * c_rate_per_h <= 1.0 - c0, "half_cycle_duration_h",
          "charge per half cycle exceeds the remaining capacity 1 - c0");
  require(tolerances.rel_tol > 0.0, "tolerances.rel_tol", "must be positive");
  require(tolerances.abs_tol > 0.0, "tolerances.abs_tol", "must be positive");
  require(tolerances.min_step_h > 0.0, "tolerances.min_step_h", "must be positive");
  require(tolerances.initial_step_h >= tolerances.min_step_h, "tolerances.initial_step_h",
          "must not be below min_step_h");
  require(tolerances.max_step_h >= tolerances.initial_step_h, "tolerances.max_step_h",
          "must not be below initial_step_h");
  require(!(strain_mode == StrainMeasure::gsv && plasticity_mode != PlasticityMode::elastic),
          "plasticity_mode", "plastic SEI models require strain_mode = log");
  require(profile_points_particle >= 2, "output.profile_points_particle", "must be at least 2");
  require(profile_points_sei >= 2, "output.profile_points_sei", "must be at least 2");
  if (mesh) {
    require(mesh->degree >= 1, "mesh.degree", "must be at least 1");
    require(mesh->particle_elements >= 1, "mesh.particle_elements", "must be positive");
    require(mesh->sei_elements >= 0, "mesh.sei_elements", "must be non-negative");
    require(mesh->quadrature_points >= 1, "mesh.quadrature_points", "must be positive");
  }
}

MeshSpec mesh_for(const ScenarioConfig& config) {
  if (config.mesh) return *config.mesh;
  MeshSpec spec;
  if (config.mesh_profile == MeshProfile::paper) {
    spec.particle_elements = 1200;
    spec.sei_elements = 120;
  }
  if (config.material.L0_S_over_L0_P == 0.0) spec.sei_elements = 0;
  return spec;
}

namespace {

class Section {
 public:
  Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(path_.empty() ? "<root>" : path_, "must be an object");
  }

  std::string field(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  bool has(const std::string& key) const {
    used_.insert(key);
    return j_.contains(key);
  }

  template <class T>
  void read(const std::string& key, T& out) const {
    if (!has(key)) return;
    try {
      out = j_.at(key).get<T>();
    } catch (const json::exception&) {
      throw ConfigError(field(key), "has the wrong type");
    }
  }

  double number(const std::string& key, double fallback) const {
    double v = fallback;
    read(key, v);
    if (!std::isfinite(v)) throw ConfigError(field(key), "must be finite");
    return v;
  }

  Section child(const std::string& key) const {
    used_.insert(key);
    return Section(j_.at(key), field(key));
  }

  void reject_unknown() const {
    for (const auto& [key, value] : j_.items())
      if (!used_.count(key)) throw ConfigError(field(key), "unknown field");
  }

 private:
  const json& j_;
  std::string path_;
  mutable std::set<std::string> used_;
};

}  // namespace

ScenarioConfig parse_config(const json& doc, const std::filesystem::path& base_dir) {
  ScenarioConfig c;
  const Section root(doc, "");
  root.read("name", c.name);

  std::string strain = "log";
  root.read("strain_mode", strain);
  if (strain == "gsv")
    c.strain_mode = StrainMeasure::gsv;
  else if (strain == "log")
    c.strain_mode = StrainMeasure::log;
  else
    throw ConfigError("strain_mode", "must be 'gsv' or 'log'");

  std::string plastic = "elastic";
  root.read("plasticity_mode", plastic);
  if (plastic == "elastic")
    c.plasticity_mode = PlasticityMode::elastic;
  else if (plastic == "rate_independent")
    c.plasticity_mode = PlasticityMode::rate_independent;
  else if (plastic == "viscoplastic")
    c.plasticity_mode = PlasticityMode::viscoplastic;
  else
    throw ConfigError("plasticity_mode", "must be 'elastic', 'rate_independent' or 'viscoplastic'");

  c.c_rate_per_h = root.number("c_rate_per_h", c.c_rate_per_h);
  root.read("half_cycles", c.half_cycles);
  c.half_cycle_duration_h = root.number("half_cycle_duration_h", c.half_cycle_duration_h);
  c.c0 = root.number("c0", c.c0);
  root.read("output_dir", c.output_dir);

  if (root.has("mesh")) {
    const Section m = root.child("mesh");
    std::string profile = "ci";
    m.read("profile", profile);
    if (profile == "ci")
      c.mesh_profile = MeshProfile::ci;
    else if (profile == "paper")
      c.mesh_profile = MeshProfile::paper;
    else
      throw ConfigError("mesh.profile", "must be 'ci' or 'paper'");
    if (m.has("particle_elements") || m.has("sei_elements") || m.has("degree") ||
        m.has("quadrature_points")) {
      MeshSpec spec = mesh_for(c);
      m.read("particle_elements", spec.particle_elements);
      m.read("sei_elements", spec.sei_elements);
      m.read("degree", spec.degree);
      m.read("quadrature_points", spec.quadrature_points);
      c.mesh = spec;
    }
    m.reject_unknown();
  }

  if (root.has("tolerances")) {
    const Section t = root.child("tolerances");
    auto& tol = c.tolerances;
    tol.rel_tol = t.number("rel_tol", tol.rel_tol);
    tol.abs_tol = t.number("abs_tol", tol.abs_tol);
    tol.initial_step_h = t.number("initial_step_h", tol.initial_step_h);
    tol.max_step_h = t.number("max_step_h", tol.max_step_h);
    tol.min_step_h = t.number("min_step_h", tol.min_step_h);
    t.reject_unknown();
  }

  MaterialParams& mat = c.material;
  if (root.has("particle")) {
    const Section p = root.child("particle");
    mat.E_P = p.number("E_P_Pa", mat.E_P);
    mat.nu_P = p.number("nu_P", mat.nu_P);
    double v_pmv = mat.v_pmv_cmax / mat.c_max;
    v_pmv = p.number("v_pmv_m3_per_mol", v_pmv);
    mat.c_max = p.number("c_max_mol_per_m3", mat.c_max);
    mat.v_pmv_cmax = v_pmv * mat.c_max;
    mat.D = p.number("D_m2_per_s", mat.D);
    mat.rho0 = p.number("rho0_kg_per_m3", mat.rho0);
    mat.particle_radius = p.number("radius_m", mat.particle_radius);
    p.reject_unknown();
  }
  bool has_rate = false, has_beta = false, has_rate_stress = false;
  if (root.has("sei")) {
    const Section s = root.child("sei");
    mat.E_S = s.number("E_S_Pa", mat.E_S);
    mat.nu_S = s.number("nu_S", mat.nu_S);
    mat.L0_S_over_L0_P = s.number("thickness_rel", mat.L0_S_over_L0_P);
    mat.sigma_Y = s.number("sigma_Y_Pa", mat.sigma_Y);
    has_rate = s.has("eps_dot_0_per_s");
    mat.eps_dot_0 = s.number("eps_dot_0_per_s", mat.eps_dot_0);
    has_beta = s.has("beta");
    mat.beta = s.number("beta", mat.beta);
    has_rate_stress = s.has("sigma_Y_star_Pa");
    mat.sigma_Y_star = s.number("sigma_Y_star_Pa", mat.sigma_Y_star);
    s.read("rescale_rate_stress", mat.rescale_rate_stress);
    s.reject_unknown();
  }
  if (!has_rate_stress) mat.sigma_Y_star = mat.sigma_Y;
  if (c.plasticity_mode == PlasticityMode::viscoplastic) {
    if (!has_rate) throw ConfigError("sei.eps_dot_0_per_s", "required in viscoplastic mode");
    if (!has_beta) throw ConfigError("sei.beta", "required in viscoplastic mode");
    if (!has_rate_stress) throw ConfigError("sei.sigma_Y_star_Pa", "required in viscoplastic mode");
  }

  if (root.has("ocv")) {
    const Section o = root.child("ocv");
    o.read("table", c.ocv_table);
    if (!c.ocv_table.empty() && std::filesystem::path(c.ocv_table).is_relative() && !base_dir.empty())
      c.ocv_table = (base_dir / c.ocv_table).string();
    o.reject_unknown();
  }
  if (root.has("butler_volmer")) {
    const Section b = root.child("butler_volmer");
    c.butler_volmer.temperature = b.number("temperature_K", c.butler_volmer.temperature);
    c.butler_volmer.exchange_current =
        b.number("exchange_current_A_per_m2", c.butler_volmer.exchange_current);
    b.reject_unknown();
  }
  if (root.has("output")) {
    const Section o = root.child("output");
    o.read("profile_points_particle", c.profile_points_particle);
    o.read("profile_points_sei", c.profile_points_sei);
    o.reject_unknown();
  }
  root.reject_unknown();
  c.validate();
  return c;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("<file>", "cannot open '" + path.string() + "'");
  json doc;
  try {
    doc = json::parse(in, nullptr, true, true);
  } catch (const json::parse_error& ex) {
    throw ConfigError("<file>", std::string("parse error: ") + ex.what());
  }
  return parse_config(doc, path.parent_path());
}

json to_json(const ScenarioConfig& c) {
  const MaterialParams& m = c.material;
  json j;
  j["name"] = c.name;
  j["strain_mode"] = to_string(c.strain_mode);
  j["plasticity_mode"] = to_string(c.plasticity_mode);
  j["c_rate_per_h"] = c.c_rate_per_h;
  j["half_cycles"] = c.half_cycles;
  j["half_cycle_duration_h"] = c.half_cycle_duration_h;
  j["c0"] = c.c0;
  const MeshSpec spec = mesh_for(c);
  j["mesh"] = {{"profile", c.mesh_profile == MeshProfile::ci ? "ci" : "paper"},
               {"particle_elements", spec.particle_elements},
               {"sei_elements", spec.sei_elements},
               {"degree", spec.degree},
               {"quadrature_points", spec.quadrature_points}};
  j["tolerances"] = {{"rel_tol", c.tolerances.rel_tol},
                     {"abs_tol", c.tolerances.abs_tol},
                     {"initial_step_h", c.tolerances.initial_step_h},
                     {"max_step_h", c.tolerances.max_step_h},
                     {"min_step_h", c.tolerances.min_step_h}};
  j["particle"] = {{"E_P_Pa", m.E_P},
                   {"nu_P", m.nu_P},
                   {"v_pmv_m3_per_mol", m.v_pmv_cmax / m.c_max},
                   {"c_max_mol_per_m3", m.c_max},
                   {"D_m2_per_s", m.D},
                   {"rho0_kg_per_m3", m.rho0},
                   {"radius_m", m.particle_radius}};
  j["sei"] = {{"E_S_Pa", m.E_S},
              {"nu_S", m.nu_S},
              {"thickness_rel", m.L0_S_over_L0_P},
              {"sigma_Y_Pa", m.sigma_Y},
              {"eps_dot_0_per_s", m.eps_dot_0},
              {"sigma_Y_star_Pa", m.sigma_Y_star},
              {"beta", m.beta},
              {"rescale_rate_stress", m.rescale_rate_stress}};
  j["ocv"] = {{"table", c.ocv_table}};
  j["butler_volmer"] = {{"temperature_K", c.butler_volmer.temperature},
                        {"exchange_current_A_per_m2", c.butler_volmer.exchange_current}};
  j["output"] = {{"profile_points_particle", c.profile_points_particle},
                 {"profile_points_sei", c.profile_points_sei}};
  j["output_dir"] = c.output_dir;
  return j;
}

// ---------------------------------------------------------------------------
// Setup

std::unique_ptr<RadialProblem> make_problem(const ScenarioConfig& config) {
  config.validate();
  OcvCurve curve = config.ocv_table.empty() ? OcvCurve::silicon_default()
                                            : OcvCurve::from_csv(config.ocv_table);
  return std::make_unique<RadialProblem>(nondimensionalize(config.material), std::move(curve),
                                         config.strain_mode, config.plasticity_mode,
                                         mesh_for(config));
}

InitialState initialize_state(const ScenarioConfig& config, const RadialProblem& problem) {
  return InitialState{problem.initial_state(config.c0),
                      std::vector<InternalState>(problem.internal_states().size())};
}

double protocol_rate(const ScenarioConfig& config, double t_h) {
  const double d = config.half_cycle_duration_h;
  int k = t_h <= 0.0 ? 0 : static_cast<int>(std::ceil(t_h / d)) - 1;
  k = std::clamp(k, 0, config.half_cycles - 1);
  return (k % 2 == 0 ? 1.0 : -1.0) * config.c_rate_per_h;
}

double protocol_soc(const ScenarioConfig& config, double t_h) {
  const double d = config.half_cycle_duration_h;
  double soc = config.c0;
  double start = 0.0;
  for (int k = 0; k < config.half_cycles && start < t_h; ++k) {
    const double rate = (k % 2 == 0 ? 1.0 : -1.0) * config.c_rate_per_h;
    const double span = std::min(t_h, start + d) - start;
    soc += rate * span;
    start += d;
  }
  return soc;
}

// ---------------------------------------------------------------------------
// Run

namespace {

std::vector<double> profile_radii(const ScenarioConfig& config, const RadialProblem& problem) {
  std::vector<double> radii;
  const int np = config.profile_points_particle;
  for (int i = 0; i < np; ++i) radii.push_back(i + 1 == np ? 1.0 : static_cast<double>(i) / (np - 1));
  if (problem.mesh().sei_nodes > 0) {
    const double outer = problem.mesh().elements.back().right;
    const int ns = config.profile_points_sei;
    for (int i = 1; i < ns; ++i)
      radii.push_back(i + 1 == ns ? outer : 1.0 + (outer - 1.0) * i / (ns - 1));
  }
  return radii;
}

Profile make_profile(const std::string& tag, double t_h, const ScenarioConfig& config,
                     const RadialProblem& problem, const Vector& y) {
  Profile p;
  p.tag = tag;
  p.t_h = t_h;
  p.soc = protocol_soc(config, t_h);
  const double mpa = config.material.E_P / 1e6;
  for (const FieldSample& s : problem.sample_fields(y, profile_radii(config, problem)))
    p.rows.push_back(ProfileRow{s.r, s.c, s.sigma_rr * mpa, s.sigma_tt * mpa});
  return p;
}

}  // namespace

RunOutputs run_scenario(const ScenarioConfig& config, const RunHooks& hooks) {
  const auto wall_start = std::chrono::steady_clock::now();
  RunOutputs out;
  out.config = config;
  auto problem = make_problem(config);
  out.dofs = static_cast<int>(problem->size());
  const MaterialParams& mat = config.material;
  const double mpa = mat.E_P / 1e6;
  const double flux_si_per_rate = mat.c_max * mat.particle_radius / 3.0 / 3600.0;
  const bool has_sei = problem->mesh().sei_nodes > 0;

  NdfOptions opt;
  opt.rel_tol = config.tolerances.rel_tol;
  opt.abs_tol = config.tolerances.abs_tol;
  opt.initial_step = config.tolerances.initial_step_h;
  opt.max_step = config.tolerances.max_step_h;
  opt.min_step = config.tolerances.min_step_h;
  NdfIntegrator integrator(*problem, opt);

  auto make_row = [&](double t, double tau, int order, int iters, const Vector& y) {
    TimeSeriesRow row;
    row.t_h = t;
    row.soc = protocol_soc(config, t);
    const double rate = protocol_rate(config, t);
    row.mu_surface_V = problem->surface_chemical_potential(y);
    row.voltage_V = voltage_postprocess(row.mu_surface_V * mat.Fa, rate * flux_si_per_rate,
                                        config.butler_volmer);
    row.sigma_tt_interface_MPa = problem->interface_hoop_stress(y) * mpa;
    row.tau = tau;
    row.order = order;
    row.newton_iters = iters;
    row.mean_concentration = problem->mean_concentration(y);
    row.max_yield_excess_MPa = has_sei ? problem->max_yield_excess(y) * mpa : 0.0;
    return row;
  };
  auto push_row = [&](const TimeSeriesRow& row, const Vector& y) {
    out.series.push_back(row);
    if (hooks.on_step) hooks.on_step(*problem, row, y);
  };
  auto abort_run = [&](double t, const std::string& why, const Vector& y) {
    out.aborted = true;
    out.abort_soc = protocol_soc(config, t);
    out.events.push_back(Event{"abort", t, out.abort_soc, why});
    try {
      out.profiles.push_back(make_profile("abort", t, config, *problem, y));
    } catch (const std::exception&) {
    }
  };

  const InitialState init = initialize_state(config, *problem);
  problem->set_internal_states(init.internal);
  problem->set_surface_flux(protocol_rate(config, 0.0) / 3.0);
  out.events.push_back(Event{"start", 0.0, config.c0, config.name});
  try {
    integrator.initialize(0.0, init.y);
  } catch (const std::exception& ex) {
    abort_run(0.0, std::string("initialization: ") + ex.what(), init.y);
    out.stats = integrator.stats();
    return out;
  }
  push_row(make_row(0.0, 0.0, 1, 0, integrator.state()), integrator.state());
  out.profiles.push_back(make_profile("initial", 0.0, config, *problem, integrator.state()));

  for (int k = 0; k < config.half_cycles; ++k) {
    const double t_end = (k + 1) * config.half_cycle_duration_h;
    if (k > 0) {
      problem->set_surface_flux((k % 2 == 0 ? 1.0 : -1.0) * config.c_rate_per_h / 3.0);
      try {
        integrator.restart();
      } catch (const std::exception& ex) {
        abort_run(integrator.time(), std::string("restart: ") + ex.what(), integrator.state());
        break;
      }
    }
    AdvanceResult res;
    try {
      res = integrator.advance_to(t_end, [&](const StepRecord& rec, const Vector& y) {
        push_row(make_row(rec.t, rec.tau, rec.order, rec.newton_iterations, y), y);
      });
    } catch (const std::exception& ex) {
      res.reached = false;
      res.reason = ex.what();
    }
    if (!res.reached) {
      abort_run(integrator.time(), res.reason, integrator.state());
      break;
    }
    const std::string tag = "hc" + std::to_string(k + 1);
    out.events.push_back(Event{"half_cycle_end", t_end, protocol_soc(config, t_end), tag});
    out.profiles.push_back(make_profile(tag, t_end, config, *problem, integrator.state()));
  }
  if (!out.aborted) {
    const double t = integrator.time();
    out.profiles.push_back(make_profile("final", t, config, *problem, integrator.state()));
    out.events.push_back(Event{"finish", t, protocol_soc(config, t), ""});
  }
  out.stats = integrator.stats();
  out.internal_state_hash = problem->internal_state_hash();
  out.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - wall_start).count();
  return out;
}

// ---------------------------------------------------------------------------
// Output

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write '" + path.string() + "'");
  return f;
}

void close_out(std::ofstream& f, const std::filesystem::path& path) {
  f.close();
  if (!f) throw std::runtime_error("write failed for '" + path.string() + "'");
}

std::string plot_script(const RunOutputs& o) {
  std::ostringstream s;
  s << "# gnuplot script: gnuplot plot.gp\n"
    << "set datafile separator ','\n"
    << "set terminal pngcairo size 1400,900\n"
    << "set output 'profiles.png'\n"
    << "set multiplot layout 1,3 title '" << o.config.name << ": radial profiles'\n"
    << "set key top left\n";
  const char* columns[] = {"c", "sigma_rr_MPa", "sigma_tt_MPa"};
  const int index[] = {2, 3, 4};
  for (int c = 0; c < 3; ++c) {
    s << "set xlabel 'r [-]'\nset ylabel '" << columns[c] << "'\nplot ";
    for (std::size_t i = 0; i < o.profiles.size(); ++i) {
      s << (i ? ", " : "") << "'profile_" << o.profiles[i].tag << ".csv' using 1:" << index[c]
        << " skip 1 with lines title '" << o.profiles[i].tag << "'";
    }
    s << "\n";
  }
  s << "unset multiplot\n"
    << "set output 'interface.png'\n"
    << "set multiplot layout 1,2 title '" << o.config.name << ": interface and voltage'\n"
    << "set xlabel 'SOC [-]'\nset ylabel 'sigma_tt at r = 1 [MPa]'\n"
    << "plot 'timeseries.csv' using 2:4 skip 1 with lines notitle\n"
    << "set ylabel 'voltage [V]'\n"
    << "plot 'timeseries.csv' using 2:3 skip 1 with lines notitle\n"
    << "unset multiplot\n";
  return s.str();
}

}  // namespace

void write_outputs(const RunOutputs& o, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create '" + dir.string() + "': " + ec.message());

  {
    const auto path = dir / "timeseries.csv";
    auto f = open_out(path);
    f << "t_h,soc,voltage_V,sigma_tt_interface_MPa,tau,order,newton_iters\n";
    for (const auto& r : o.series)
      f << format_double(r.t_h) << ',' << format_double(r.soc) << ',' << format_double(r.voltage_V)
        << ',' << format_double(r.sigma_tt_interface_MPa) << ',' << format_double(r.tau) << ','
        << r.order << ',' << r.newton_iters << '\n';
    close_out(f, path);
  }
  {
    const auto path = dir / "diagnostics.csv";
    auto f = open_out(path);
    f << "t_h,mean_concentration,mu_surface_V,max_yield_excess_MPa\n";
    for (const auto& r : o.series)
      f << format_double(r.t_h) << ',' << format_double(r.mean_concentration) << ','
        << format_double(r.mu_surface_V) << ',' << format_double(r.max_yield_excess_MPa) << '\n';
    close_out(f, path);
  }
  for (const auto& p : o.profiles) {
    const auto path = dir / ("profile_" + p.tag + ".csv");
    auto f = open_out(path);
    f << "r,c,sigma_rr_MPa,sigma_tt_MPa\n";
    for (const auto& r : p.rows)
      f << format_double(r.r) << ',' << format_double(r.c) << ',' << format_double(r.sigma_rr_MPa)
        << ',' << format_double(r.sigma_tt_MPa) << '\n';
    close_out(f, path);
  }
  {
    const auto path = dir / "events.jsonl";
    auto f = open_out(path);
    for (const auto& e : o.events) {
      json j = {{"type", e.type}, {"t_h", e.t_h}, {"soc", e.soc}};
      if (!e.message.empty()) j["message"] = e.message;
      f << j.dump() << '\n';
    }
    close_out(f, path);
  }
  {
    const auto path = dir / "config.json";
    auto f = open_out(path);
    f << to_json(o.config).dump(2) << '\n';
    close_out(f, path);
  }
  {
    const auto path = dir / "plot.gp";
    auto f = open_out(path);
    f << plot_script(o);
    close_out(f, path);
  }
}

std::vector<TimeSeriesRow> read_timeseries(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read '" + path.string() + "'");
  std::string line;
  std::getline(in, line);
  std::vector<TimeSeriesRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() != 7) throw std::runtime_error("malformed row in '" + path.string() + "'");
    TimeSeriesRow r;
    r.t_h = std::strtod(cells[0].c_str(), nullptr);
    r.soc = std::strtod(cells[1].c_str(), nullptr);
    r.voltage_V = std::strtod(cells[2].c_str(), nullptr);
    r.sigma_tt_interface_MPa = std::strtod(cells[3].c_str(), nullptr);
    r.tau = std::strtod(cells[4].c_str(), nullptr);
    r.order = std::stoi(cells[5]);
    r.newton_iters = std::stoi(cells[6]);
    rows.push_back(r);
  }
  return rows;
}

std::vector<ScenarioConfig> paper_matrix(const ScenarioConfig& base) {
  std::vector<ScenarioConfig> runs;
  auto add = [&](const std::string& name, StrainMeasure s, PlasticityMode m, double rate) {
    ScenarioConfig c = base;
    c.name = name;
    c.strain_mode = s;
    c.plasticity_mode = m;
    if (rate > 0.0) c.material.eps_dot_0 = rate;
    c.output_dir = (std::filesystem::path(base.output_dir) / name).string();
    runs.push_back(c);
  };
  add("gsv_elastic", StrainMeasure::gsv, PlasticityMode::elastic, 0.0);
  add("log_elastic", StrainMeasure::log, PlasticityMode::elastic, 0.0);
  add("log_plastic", StrainMeasure::log, PlasticityMode::rate_independent, 0.0);
  add("log_viscoplastic_1e-3", StrainMeasure::log, PlasticityMode::viscoplastic, 1e-3);
  add("log_viscoplastic_1e-4", StrainMeasure::log, PlasticityMode::viscoplastic, 1e-4);
  return runs;
}

void write_matrix_plot(const std::vector<RunOutputs>& runs, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  const auto path = dir / "plot.gp";
  auto f = open_out(path);
  f << "# gnuplot script: gnuplot plot.gp\n"
    << "set datafile separator ','\n"
    << "set terminal pngcairo size 1400,600\n"
    << "set output 'comparison.png'\n"
    << "set multiplot layout 1,2\n"
    << "set xlabel 'SOC [-]'\nset ylabel 'sigma_tt at r = 1 [MPa]'\nset key bottom left\nplot ";
  for (std::size_t i = 0; i < runs.size(); ++i)
    f << (i ? ", " : "") << "'" << runs[i].config.name << "/timeseries.csv' using 2:4 skip 1 with lines title '"
      << runs[i].config.name << "'";
  f << "\nset ylabel 'voltage [V]'\nplot ";
  for (std::size_t i = 0; i < runs.size(); ++i)
    f << (i ? ", " : "") << "'" << runs[i].config.name << "/timeseries.csv' using 2:3 skip 1 with lines title '"
      << runs[i].config.name << "'";
  f << "\nunset multiplot\n";
  close_out(f, path);
}

}  // namespace chemomech
