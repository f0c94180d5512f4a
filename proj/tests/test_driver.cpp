#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "chemomech/driver.hpp"
#include "chemomech/errors.hpp"

using namespace chemomech;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("chemomech_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string config_error_path(const json& doc) {
  try {
    parse_config(doc);
  } catch (const ConfigError& e) {
    return e.path();
  }
  return "";
}

ScenarioConfig short_run(PlasticityMode mode, double duration) {
  ScenarioConfig c;
  c.plasticity_mode = mode;
  c.half_cycle_duration_h = duration;
  c.half_cycles = 1;
  return c;
}

}  // namespace

TEST(Config, MinimalFileGivesDefaults) {
  const ScenarioConfig c = parse_config(json::object());
  EXPECT_EQ(c.strain_mode, StrainMeasure::log);
  EXPECT_EQ(c.plasticity_mode, PlasticityMode::elastic);
  EXPECT_EQ(c.c_rate_per_h, 1.0);
  EXPECT_EQ(c.half_cycles, 3);
  EXPECT_EQ(c.half_cycle_duration_h, 0.9);
  EXPECT_EQ(c.c0, 0.02);
  EXPECT_EQ(c.material.E_S, 900e6);
  EXPECT_EQ(c.material.sigma_Y, 49.5e6);
  EXPECT_EQ(mesh_for(c).particle_elements, 120);
}

TEST(Config, Errors) {
  EXPECT_EQ(config_error_path({{"plasticity_mode", "viscoplastic"},
                               {"sei", {{"eps_dot_0_per_s", 1e-3}, {"sigma_Y_star_Pa", 49.5e6}}}}),
            "sei.beta");
  EXPECT_EQ(config_error_path({{"c_rate_per_h", 2.0}}), "half_cycle_duration_h");
  EXPECT_EQ(config_error_path({{"sei", {{"E_S_Pa", 1e9}, {"colour", "red"}}}}), "sei.colour");
  EXPECT_EQ(config_error_path({{"strain_mode", "gsv"}, {"plasticity_mode", "rate_independent"}}),
            "plasticity_mode");
  EXPECT_EQ(config_error_path({{"strain_mode", "green"}}), "strain_mode");
  EXPECT_EQ(config_error_path({{"c0", "low"}}), "c0");
}

TEST(Config, RoundTrip) {
  const fs::path dir = scratch("config");
  json doc = {{"name", "vp"},
              {"plasticity_mode", "viscoplastic"},
              {"sei", {{"eps_dot_0_per_s", 1e-4}, {"beta", 2.94}, {"sigma_Y_star_Pa", 49.5e6}}},
              {"mesh", {{"particle_elements", 30}, {"sei_elements", 3}}}};
  std::ofstream(dir / "c.json") << doc.dump(2);
  const ScenarioConfig c = load_config(dir / "c.json");
  EXPECT_EQ(c.material.eps_dot_0, 1e-4);
  EXPECT_EQ(mesh_for(c).particle_elements, 30);
  const ScenarioConfig again = parse_config(to_json(c));
  EXPECT_EQ(to_json(again), to_json(c));
  EXPECT_THROW(load_config(dir / "missing.json"), ConfigError);
}

TEST(Initialization, EmptyParticle) {
  ScenarioConfig c;
  c.c0 = 0.0;
  c.mesh = MeshSpec{4, 10, 1, 6};
  const auto problem = make_problem(c);
  const InitialState s = initialize_state(c, *problem);
  const DofMap& d = problem->dofs();
  for (int i = 0; i < d.particle_nodes + d.sei_nodes; ++i) EXPECT_EQ(s.y[d.u(i)], 0.0);
  const double mu0 = -problem->params().faraday * ocv(problem->ocv_curve(), 0.0);
  for (int i = 0; i < d.particle_nodes; ++i) EXPECT_DOUBLE_EQ(s.y[d.mu(i)], mu0);
}

TEST(Initialization, InterfaceConsistent) {
  ScenarioConfig c;
  c.mesh = MeshSpec{4, 10, 2, 6};
  const auto problem = make_problem(c);
  const InitialState s = initialize_state(c, *problem);
  const DofMap& d = problem->dofs();
  const double stretch = chemical_stretch(0.02, problem->params().swelling) - 1.0;
  EXPECT_NEAR(s.y[d.u(d.particle_nodes - 1)], stretch, 1e-15);
  EXPECT_NEAR(s.y[d.u(d.particle_nodes)], stretch, 1e-15);
  for (const InternalState& q : s.internal) EXPECT_EQ(q, InternalState{});
}

TEST(Protocol, PiecewiseLinearSoc) {
  const ScenarioConfig c;
  EXPECT_DOUBLE_EQ(protocol_soc(c, 0.0), 0.02);
  EXPECT_DOUBLE_EQ(protocol_soc(c, 0.9), 0.92);
  EXPECT_NEAR(protocol_soc(c, 1.35), 0.47, 1e-15);
  EXPECT_NEAR(protocol_soc(c, 2.7), 0.92, 1e-15);
  EXPECT_EQ(protocol_rate(c, 0.5), 1.0);
  EXPECT_EQ(protocol_rate(c, 0.9), 1.0);
  EXPECT_EQ(protocol_rate(c, 0.91), -1.0);
}

TEST(Run, ShortCycleConservesLithium) {
  ScenarioConfig c = short_run(PlasticityMode::elastic, 0.05);
  c.half_cycles = 3;
  const RunOutputs out = run_scenario(c);
  ASSERT_FALSE(out.aborted);
  ASSERT_FALSE(out.series.empty());
  EXPECT_NEAR(out.series.back().t_h, 0.15, 1e-15);
  EXPECT_NEAR(out.series.back().soc, 0.07, 1e-12);
  for (const TimeSeriesRow& r : out.series) {
    EXPECT_NEAR(r.soc, protocol_soc(c, r.t_h), 1e-15);
    EXPECT_LE(std::abs(r.mean_concentration - r.soc), 10 * c.tolerances.abs_tol);
  }
  EXPECT_EQ(out.events.front().type, "start");
  EXPECT_EQ(out.events.back().type, "finish");
  EXPECT_EQ(out.profiles.front().tag, "initial");
  EXPECT_EQ(out.profiles.back().tag, "final");
}

TEST(Run, Deterministic) {
  const ScenarioConfig c = short_run(PlasticityMode::elastic, 0.02);
  const RunOutputs a = run_scenario(c), b = run_scenario(c);
  ASSERT_EQ(a.series.size(), b.series.size());
  for (std::size_t i = 0; i < a.series.size(); ++i) {
    EXPECT_EQ(a.series[i].t_h, b.series[i].t_h);
    EXPECT_EQ(a.series[i].sigma_tt_interface_MPa, b.series[i].sigma_tt_interface_MPa);
  }
}

TEST(Run, PlasticAndViscoplasticDiffer) {
  ScenarioConfig ri = short_run(PlasticityMode::rate_independent, 0.4);
  ScenarioConfig vp = short_run(PlasticityMode::viscoplastic, 0.4);
  const RunOutputs a = run_scenario(ri), b = run_scenario(vp);
  ASSERT_FALSE(a.aborted);
  ASSERT_FALSE(b.aborted);
  for (const RunOutputs* o : {&a, &b})
    for (const TimeSeriesRow& r : o->series) EXPECT_NEAR(r.soc, protocol_soc(ri, r.t_h), 1e-15);
  EXPECT_GT(b.series.back().sigma_tt_interface_MPa, a.series.back().sigma_tt_interface_MPa + 1.0);
  for (const TimeSeriesRow& r : a.series) EXPECT_LE(r.max_yield_excess_MPa, 1e-8 * 49.5);

  const RunOutputs elastic = run_scenario(short_run(PlasticityMode::elastic, 0.02));
  const auto identity = make_problem(ri)->internal_state_hash();
  EXPECT_EQ(elastic.internal_state_hash, identity);
  EXPECT_NE(a.internal_state_hash, identity);
}

TEST(Run, GsvElasticAborts) {
  ScenarioConfig c;
  c.strain_mode = StrainMeasure::gsv;
  const RunOutputs out = run_scenario(c);
  ASSERT_TRUE(out.aborted);
  EXPECT_GE(out.abort_soc, 0.2);
  EXPECT_LE(out.abort_soc, 0.5);
  EXPECT_EQ(out.profiles.back().tag, "abort");

  const fs::path dir = scratch("abort");
  write_outputs(out, dir);
  bool found = false;
  std::ifstream in(dir / "events.jsonl");
  for (std::string line; std::getline(in, line);) {
    const json e = json::parse(line);
    if (e.at("type") == "abort") {
      found = true;
      EXPECT_NEAR(e.at("soc").get<double>(), out.abort_soc, 1e-15);
    }
  }
  EXPECT_TRUE(found);
}

TEST(Output, EmptyRunWritesHeadersOnly) {
  const fs::path dir = scratch("empty");
  RunOutputs out;
  out.profiles.push_back(Profile{"initial", 0.0, 0.02, {}});
  write_outputs(out, dir);
  EXPECT_EQ(slurp(dir / "timeseries.csv"), "t_h,soc,voltage_V,sigma_tt_interface_MPa,tau,order,newton_iters\n");
  EXPECT_EQ(slurp(dir / "profile_initial.csv"), "r,c,sigma_rr_MPa,sigma_tt_MPa\n");
  EXPECT_EQ(slurp(dir / "events.jsonl"), "");
  EXPECT_TRUE(fs::exists(dir / "plot.gp"));
  EXPECT_TRUE(read_timeseries(dir / "timeseries.csv").empty());
}

TEST(Output, TimeSeriesRoundTripIsBitwise) {
  const fs::path dir = scratch("roundtrip");
  RunOutputs out;
  out.series.push_back(TimeSeriesRow{0.1, 0.12, 0.4123456789012345, -1.0 / 3.0, 1e-7, 3, 2});
  out.series.push_back(TimeSeriesRow{std::nextafter(0.2, 1.0), 0.22, 0.39, 123.456e-9, 2.5e-4, 5, 1});
  write_outputs(out, dir);
  const auto back = read_timeseries(dir / "timeseries.csv");
  ASSERT_EQ(back.size(), 2u);
  for (std::size_t i = 0; i < 2; ++i) {
    EXPECT_EQ(back[i].t_h, out.series[i].t_h);
    EXPECT_EQ(back[i].soc, out.series[i].soc);
    EXPECT_EQ(back[i].voltage_V, out.series[i].voltage_V);
    EXPECT_EQ(back[i].sigma_tt_interface_MPa, out.series[i].sigma_tt_interface_MPa);
    EXPECT_EQ(back[i].tau, out.series[i].tau);
    EXPECT_EQ(back[i].order, out.series[i].order);
    EXPECT_EQ(back[i].newton_iters, out.series[i].newton_iters);
  }
}

TEST(Output, UnwritableDirectoryNamesPath) {
  RunOutputs out;
  try {
    write_outputs(out, "/proc/chemomech_cannot_write");
    FAIL();
  } catch (const std::runtime_error& e) {
    EXPECT_NE(std::string(e.what()).find("/proc/chemomech_cannot_write"), std::string::npos);
  }
}

TEST(Matrix, FiveRuns) {
  const auto runs = paper_matrix(ScenarioConfig{});
  ASSERT_EQ(runs.size(), 5u);
  EXPECT_EQ(runs[0].name, "gsv_elastic");
  EXPECT_EQ(runs[0].strain_mode, StrainMeasure::gsv);
  EXPECT_EQ(runs[3].material.eps_dot_0, 1e-3);
  EXPECT_EQ(runs[4].material.eps_dot_0, 1e-4);
}
