// Acceptance suite: one PASS/FAIL line per criterion.
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <string>
#include <vector>

#include "chemomech/driver.hpp"
#include "chemomech/verification.hpp"

using namespace chemomech;

namespace {

int failures = 0;

void report(int id, bool pass, const std::string& title, const std::string& detail) {
  std::printf("%s [%d] %s: %s\n", pass ? "PASS" : "FAIL", id, title.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0, double d = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

struct Curve {
  std::vector<double> soc, stress;
};

// Interface hoop stress against SOC on half cycle `hc` (1-based).
Curve half_cycle(const RunOutputs& run, int hc) {
  const double t0 = (hc - 1) * run.config.half_cycle_duration_h;
  const double t1 = hc * run.config.half_cycle_duration_h;
  Curve c;
  for (const TimeSeriesRow& r : run.series)
    if (r.t_h >= t0 - 1e-12 && r.t_h <= t1 + 1e-12) {
      c.soc.push_back(r.soc);
      c.stress.push_back(r.sigma_tt_interface_MPa);
    }
  return c;
}

// Linear interpolation on a curve with increasing SOC.
double at_soc(const Curve& c, double soc) {
  const auto it = std::lower_bound(c.soc.begin(), c.soc.end(), soc);
  if (it == c.soc.begin()) return c.stress.front();
  if (it == c.soc.end()) return c.stress.back();
  const std::size_t i = static_cast<std::size_t>(it - c.soc.begin());
  const double w = (soc - c.soc[i - 1]) / (c.soc[i] - c.soc[i - 1]);
  return (1 - w) * c.stress[i - 1] + w * c.stress[i];
}

double peak(const Curve& c) { return *std::max_element(c.stress.begin(), c.stress.end()); }

double conservation_error(const RunOutputs& run) {
  double worst = 0.0;
  for (const TimeSeriesRow& r : run.series) worst = std::max(worst, std::abs(r.mean_concentration - r.soc));
  return worst;
}

std::map<std::string, RunOutputs> run_matrix(MeshProfile profile, bool include_gsv) {
  ScenarioConfig base;
  base.mesh_profile = profile;
  std::map<std::string, RunOutputs> out;
  for (const ScenarioConfig& c : paper_matrix(base)) {
    if (!include_gsv && c.strain_mode == StrainMeasure::gsv) continue;
    RunOutputs r = run_scenario(c);
    std::printf("  ran %-22s %-5s dofs %6d steps %6ld  %6.1fs  %s\n", c.name.c_str(),
                profile == MeshProfile::ci ? "ci" : "paper", r.dofs, r.stats.accepted,
                r.wall_seconds, r.aborted ? ("aborted at SOC " + format_double(r.abort_soc)).c_str()
                                          : "completed");
    std::fflush(stdout);
    out.emplace(c.name, std::move(r));
  }
  return out;
}

}  // namespace

int main() {
  const bool skip_paper = std::getenv("CHEMOMECH_SKIP_FINE_MESH") != nullptr;
  std::printf("running the five-scenario matrix at CI resolution\n");
  const auto ci = run_matrix(MeshProfile::ci, true);
  std::map<std::string, RunOutputs> paper_runs;
  if (!skip_paper) {
    std::printf("running the log-strain scenarios on the fine mesh\n");
    paper_runs = run_matrix(MeshProfile::paper, false);
  }
  const auto& paper = paper_runs;

  const RunOutputs& gsv = ci.at("gsv_elastic");
  const RunOutputs& elastic = ci.at("log_elastic");
  const RunOutputs& plastic = ci.at("log_plastic");
  const RunOutputs& vp3 = ci.at("log_viscoplastic_1e-3");
  const RunOutputs& vp4 = ci.at("log_viscoplastic_1e-4");

  // 1
  {
    double sei_interface = NAN;
    for (const ProfileRow& row : gsv.profiles.back().rows)
      if (row.r == 1.0) sei_interface = row.sigma_tt_MPa;  // last r = 1 row is the SEI side
    const double reference = at_soc(half_cycle(elastic, 1), gsv.abort_soc);
    const double ratio = sei_interface / reference;
    const bool pass = gsv.aborted && gsv.abort_soc >= 0.2 && gsv.abort_soc <= 0.5 && ratio > 3.0 &&
                      gsv.profiles.back().tag == "abort" && gsv.wall_seconds <= 600.0;
    report(1, pass, "gsv-elastic SEI fails",
           fmt("abort SOC %.4f in [0.2, 0.5], interface sigma_tt %.1f MPa vs log %.1f MPa (ratio %.2f > 3)",
               gsv.abort_soc, sei_interface, reference, ratio) +
               fmt(", runtime %.1f s <= 600 s", gsv.wall_seconds));
  }
  // 2
  {
    bool pass = true;
    std::string detail;
    for (const auto* set : {&ci, &paper}) {
      if (set == &paper && skip_paper) {
        pass = false;
        detail += "fine mesh skipped; ";
        continue;
      }
      for (const auto& [name, run] : *set) {
        if (name == "gsv_elastic") continue;
        const bool ok = !run.aborted && std::abs(run.series.back().t_h - 2.7) < 1e-12;
        pass = pass && ok;
        detail += name + (set == &ci ? "/ci " : "/paper ") + (ok ? "ok" : "FAILED") +
                  " (" + std::to_string(run.dofs) + " dofs); ";
      }
    }
    report(2, pass, "log-strain runs complete three half cycles", detail);
  }
  // 3
  {
    const Curve hc1 = half_cycle(elastic, 1), hc3 = half_cycle(elastic, 3);
    const double lo = std::max(hc1.soc.front(), hc3.soc.front());
    const double hi = std::min(hc1.soc.back(), hc3.soc.back());
    double diff = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < hc1.soc.size(); ++i) {
      scale = std::max(scale, std::abs(hc1.stress[i]));
      if (hc1.soc[i] < lo || hc1.soc[i] > hi) continue;
      diff = std::max(diff, std::abs(hc1.stress[i] - at_soc(hc3, hc1.soc[i])));
    }
    report(3, diff <= 0.01 * scale, "elastic reversibility",
           fmt("max |dsigma| %.4g MPa over SOC [%.3f, %.3f], relative %.3g <= 0.01", diff, lo, hi,
               diff / scale));
  }
  // 4
  {
    double worst = -INFINITY;
    for (const TimeSeriesRow& r : plastic.series) worst = std::max(worst, r.max_yield_excess_MPa);
    const double bound = 1e-8 * plastic.config.material.sigma_Y * 1e-6;
    report(4, worst <= bound, "yield-surface compliance",
           fmt("max ||dev M|| - sqrt(2/3) sigma_Y = %.3g MPa <= %.3g MPa", worst, bound));
  }
  // 5
  {
    const Curve ri = half_cycle(plastic, 1), a = half_cycle(vp3, 1), b = half_cycle(vp4, 1);
    const double plateau = ri.stress.back();
    const double pa = peak(a), pb = peak(b);
    const bool ordered = pb > pa && pa > peak(ri);
    const double ra = std::abs(a.stress.back() - plateau) / std::abs(plateau);
    const double rb = std::abs(b.stress.back() - plateau) / std::abs(plateau);
    report(5, ordered && ra <= 0.05 && rb <= 0.05, "stress-overrelaxation",
           fmt("peaks 1e-4: %.2f > 1e-3: %.2f > plastic %.2f MPa ", pb, pa, peak(ri)) +
               (ordered ? "(ordering holds)" : "(ordering violated)") +
               fmt("; end of first lithiation: plateau %.2f MPa, 1e-3 off by %.1f%%, 1e-4 off by %.1f%% (bound 5%%)",
                   plateau, 100 * ra, 100 * rb));
  }
  // 6
  {
    double worst = 0.0;
    bool pass = true;
    for (const auto* set : {&ci, &paper})
      for (const auto& [name, run] : *set) {
        const double e = conservation_error(run);
        worst = std::max(worst, e);
        pass = pass && e <= 10 * run.config.tolerances.abs_tol;
      }
    report(6, pass, "lithium conservation",
           fmt("max |mean c - (c0 + N t)| = %.3g <= 10 AbsTol = %.3g", worst,
               10 * elastic.config.tolerances.abs_tol));
  }

  const std::vector<CheckResult> checks = run_checks(1);
  auto group = [&](int id, const std::string& title, const std::vector<std::string>& prefixes) {
    bool pass = true;
    std::string detail;
    for (const CheckResult& r : checks) {
      const bool member = std::any_of(prefixes.begin(), prefixes.end(),
                                      [&](const std::string& p) { return r.name.rfind(p, 0) == 0; });
      if (!member) continue;
      pass = pass && r.passed;
      detail += r.name + fmt(" %.3g/%.3g; ", r.value, r.tolerance);
    }
    report(id, pass && !detail.empty(), title, detail);
  };
  group(7, "thermodynamic consistency", {"particle stress", "chemical potential", "SEI stress"});
  group(8, "plasticity oracles", {"KKT", "viscoplastic", "det F_pl"});
  group(9, "integrator verification", {"NDF order", "order-1 BDF"});
  group(10, "exact solutions", {"stress-free", "stationary"});

  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
