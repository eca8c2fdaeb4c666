// Command-line front end: ground states, runs, decompositions, diagnostics
// and reports.  Exit codes: 0 success (a blowup is a result), 1 runtime
// failure, 2 configuration error, 3 missing artifact.

#include <CLI11.hpp>
#include <cmath>
#include <iostream>
#include <json.hpp>
#include <optional>

#include "rnl/checkpoint.hpp"
#include "rnl/ground_state.hpp"
#include "rnl/harness.hpp"
#include "rnl/inout.hpp"
#include "rnl/scattering.hpp"
#include "rnl/spectral.hpp"
#include "rnl/virial.hpp"

using namespace rnl;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr int kConfigExit = 2;
constexpr int kArtifactExit = 3;

json number(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

void print(const json& j) { std::cout << j.dump(2) << '\n'; }

int ground_state_cmd(double omega, int nodes, std::size_t n, double L, const std::string& out) {
  const RadialGrid g(n, L);
  const auto p = nodes == 0 ? solve_ground_state(g, omega) : solve_excited(g, omega, nodes);
  if (!out.empty()) {
    write_field_csv(out, p.Q);
    write_checkpoint(fs::path(out).replace_extension(".ckpt"), p.Q);
  }
  print({{"omega", p.omega},
         {"nodes", p.node_count},
         {"Q0", number(p.shoot_value)},
         {"mass", number(p.mass)},
         {"kinetic", number(p.kinetic)},
         {"quartic", number(p.quartic)},
         {"energy", number(p.energy)},
         {"pohozaev_residual", number(p.pohozaev_residual)},
         {"ode_residual", number(p.ode_residual)},
         {"tail_radius", number(p.tail_radius)}});
  return 0;
}

int run_cmd(ScenarioConfig c, const std::vector<std::string>& sets) {
  for (const auto& s : sets) apply_override(c, s);
  const auto res = run_scenario(c);
  print({{"directory", res.directory.string()}, {"status", to_string(res.status)}, {"status_time", res.status_time}});
  return 0;
}

int decompose_cmd(const std::string& input, double R, double delta, const std::string& out) {
  const auto f = read_checkpoint(input);
  const auto split = split_inout(f, R, delta);
  if (!out.empty()) {
    fs::create_directories(out);
    write_field_csv(fs::path(out) / "f_plus.csv", split.f_plus);
    write_field_csv(fs::path(out) / "f_minus.csv", split.f_minus);
    write_field_csv(fs::path(out) / "f_smooth.csv", split.f_smooth);
  }
  print({{"R", R},
         {"delta", delta},
         {"bands", split.bands},
         {"reconstruction_residual", number(split.reconstruction_residual)},
         {"plus_bound", number(split.plus_bound)},
         {"minus_bound", number(split.minus_bound)},
         {"smooth_bound", number(split.smooth_bound)},
         {"smooth_gradient_bound", number(split.smooth_gradient_bound)}});
  return 0;
}

// Recomputes the radiation extraction from the stored checkpoints.
int scatter_cmd(const fs::path& run) {
  const auto traj = load_checkpoints(run);
  std::vector<double> times;
  for (std::size_t i = 1; i < traj.snapshots.size(); ++i) times.push_back(traj.snapshots[i].t);
  const auto rep = extract_radiation(traj, times);
  print({{"T_last", rep.T_last},
         {"checkpoints", traj.snapshots.size()},
         {"cauchy_gaps", rep.cauchy_gaps},
         {"gap_trend", number(rep.gap_trend())},
         {"u_plus_h1", number(rep.u_plus_h1)},
         {"mass_decoupling_residual", number(rep.mass_decoupling_residual)},
         {"energy_decoupling_residual", number(rep.energy_decoupling_residual)},
         {"smallness_flag", rep.smallness_flag}});
  return 0;
}

int virial_cmd(const fs::path& run, std::optional<double> tau) {
  const auto traj = load_checkpoints(run);
  json out;
  double worst = 0.0;
  if (traj.snapshots.size() >= 3) {
    for (const auto& row : virial_series(traj)) {
      if (row.rhs != 0.0) worst = std::max(worst, std::abs(row.residual / row.rhs));
    }
    out["virial_worst_relative_residual"] = number(worst);
  }
  const double horizon = traj.snapshots.back().t - traj.snapshots.front().t;
  const double window = tau.value_or(horizon);
  const auto p = pohozaev_average(traj, BoundStateConfig{}, traj.snapshots.front().t, window);
  out["pohozaev"] = {{"tau", window},
                     {"average", number(p.value)},
                     {"scale", number(p.scale)},
                     {"ratio", number(p.scale > 0.0 ? p.value / p.scale : 0.0)},
                     {"samples", p.samples}};
  print(out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Radial cubic NLS experiments"};
  app.require_subcommand(1);

  double omega = 1.0;
  int nodes = 0;
  std::size_t gs_n = 4096;
  double gs_L = 40.0;
  std::string gs_out;
  auto* gs = app.add_subcommand("ground-state", "Solve for a ground or excited state");
  gs->add_option("--omega", omega, "Frequency")->check(CLI::PositiveNumber);
  gs->add_option("--nodes", nodes, "Number of sign changes")->check(CLI::NonNegativeNumber);
  gs->add_option("--n", gs_n, "Grid size (power of two)");
  gs->add_option("--L", gs_L, "Grid radius");
  gs->add_option("--out", gs_out, "Write the profile as CSV (and a .ckpt next to it)");

  std::string config_path;
  std::vector<std::string> evolve_sets;
  auto* ev = app.add_subcommand("evolve", "Run a configuration file");
  ev->add_option("--config", config_path, "Config file")->required();
  ev->add_option("--set", evolve_sets, "Override key=value");

  std::string input, dec_out;
  double R = 8.0, delta = 0.1;
  auto* dec = app.add_subcommand("decompose", "Incoming/outgoing split of a checkpointed field");
  dec->add_option("--input", input, "Checkpoint file")->required();
  dec->add_option("--R", R, "Exterior radius")->check(CLI::PositiveNumber);
  dec->add_option("--delta", delta, "Smoothing exponent")->check(CLI::PositiveNumber);
  dec->add_option("--out", dec_out, "Directory for f_plus/f_minus/f_smooth CSVs");

  std::string scatter_run;
  auto* sc = app.add_subcommand("scatter", "Radiation extraction from a run's checkpoints");
  sc->add_option("--run", scatter_run, "Run directory")->required();

  std::string virial_run;
  std::optional<double> tau;
  auto* vir = app.add_subcommand("virial", "Virial and Pohozaev diagnostics from a run's checkpoints");
  vir->add_option("--run", virial_run, "Run directory")->required();
  vir->add_option("--tau", tau, "Averaging window")->check(CLI::PositiveNumber);

  auto* scen = app.add_subcommand("scenario", "Built-in scenarios");
  scen->require_subcommand(1);
  auto* list = scen->add_subcommand("list", "Print the catalog");
  std::string scenario_name;
  std::vector<std::string> scenario_sets;
  auto* run = scen->add_subcommand("run", "Run a built-in scenario");
  run->add_option("name", scenario_name, "Scenario name")->required();
  run->add_option("--set", scenario_sets, "Override key=value");

  std::string report_dir;
  auto* rep = app.add_subcommand("report", "Plot-ready CSVs and a text summary for a run");
  rep->add_option("dir", report_dir, "Run directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigExit;
  }

  try {
    if (*gs) return ground_state_cmd(omega, nodes, gs_n, gs_L, gs_out);
    if (*ev) return run_cmd(load_config(config_path), evolve_sets);
    if (*dec) return decompose_cmd(input, R, delta, dec_out);
    if (*sc) return scatter_cmd(scatter_run);
    if (*vir) return virial_cmd(virial_run, tau);
    if (*list) {
      for (const auto& c : list_scenarios()) {
        validate(c);
        std::cout << "[" << c.name << "]\n" << to_text(c) << '\n';
      }
      return 0;
    }
    if (*run) return run_cmd(builtin_scenario(scenario_name), scenario_sets);
    if (*rep) {
      const auto out = write_report(report_dir);
      std::cout << out.string() << '\n';
      return 0;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigExit;
  } catch (const MissingArtifactError& e) {
    std::cerr << e.what() << '\n';
    return kArtifactExit;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
