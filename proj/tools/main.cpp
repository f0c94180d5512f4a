#include <cstdio>
#include <exception>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "chemomech/driver.hpp"
#include "chemomech/errors.hpp"
#include "chemomech/verification.hpp"

namespace cm = chemomech;

namespace {

cm::ScenarioConfig resolve(const std::string& config_path, const std::string& profile,
                           const std::string& out) {
  cm::ScenarioConfig cfg = config_path.empty() ? cm::ScenarioConfig{} : cm::load_config(config_path);
  if (!profile.empty()) {
    cfg.mesh_profile = profile == "paper" ? cm::MeshProfile::paper : cm::MeshProfile::ci;
    cfg.mesh.reset();
  }
  if (!out.empty()) cfg.output_dir = out;
  cfg.validate();
  return cfg;
}

void summarize(const cm::RunOutputs& o) {
  std::printf("%-24s dofs %6d  steps %6ld  rejected %4ld/%4ld  jac %5ld  lu %5ld  %.1fs  %s\n",
              o.config.name.c_str(), o.dofs, o.stats.accepted, o.stats.rejected_error,
              o.stats.rejected_newton, o.stats.jacobians, o.stats.factorizations, o.wall_seconds,
              o.aborted ? ("aborted at SOC " + std::to_string(o.abort_soc)).c_str() : "completed");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Chemo-mechanical particle/SEI simulator"};
  app.require_subcommand(1);
  std::string config_path, out, profile;
  unsigned seed = 0;
  bool expect_abort = false;

  auto* run = app.add_subcommand("run", "Run one scenario");
  run->add_option("--config", config_path, "Scenario file (JSON)")->check(CLI::ExistingFile);
  run->add_option("--out", out, "Output directory");
  run->add_option("--profile", profile, "Mesh profile")->check(CLI::IsMember({"ci", "paper"}));
  run->add_flag("--expect-abort", expect_abort, "Exit with status 0 only if the run aborts");

  auto* matrix = app.add_subcommand("matrix", "Run the five-model comparison");
  matrix->add_option("--config", config_path, "Base scenario file (JSON)")->check(CLI::ExistingFile);
  matrix->add_option("--out", out, "Output directory");
  matrix->add_option("--profile", profile, "Mesh profile")->check(CLI::IsMember({"ci", "paper"}));

  auto* check = app.add_subcommand("check", "Run the oracle and property checks");
  check->add_option("--seed", seed, "Seed for randomized checks");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      const cm::ScenarioConfig cfg = resolve(config_path, profile, out);
      const cm::RunOutputs o = cm::run_scenario(cfg);
      cm::write_outputs(o, cfg.output_dir);
      summarize(o);
      if (expect_abort) return o.aborted ? 0 : 1;
      return o.aborted ? 2 : 0;
    }
    if (matrix->parsed()) {
      const cm::ScenarioConfig base = resolve(config_path, profile, out.empty() ? "matrix" : out);
      std::vector<cm::RunOutputs> runs;
      for (const auto& cfg : cm::paper_matrix(base)) {
        runs.push_back(cm::run_scenario(cfg));
        cm::write_outputs(runs.back(), cfg.output_dir);
        summarize(runs.back());
      }
      cm::write_matrix_plot(runs, base.output_dir);
      return 0;
    }
    if (check->parsed()) {
      const auto results = cm::run_checks(seed);
      int failed = 0;
      for (const auto& r : results) {
        std::printf("[%s] %s: %s\n", r.passed ? "PASS" : "FAIL", r.name.c_str(), r.detail.c_str());
        failed += r.passed ? 0 : 1;
      }
      return failed == 0 ? 0 : 1;
    }
  } catch (const cm::ConfigError& ex) {
    std::cerr << "config error: " << ex.what() << '\n';
    return 3;
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << '\n';
    return 4;
  }
  return 0;
}
