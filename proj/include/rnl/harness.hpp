#pragma once

// Scenario configuration, the built-in catalog, run directories and reports.
//
// Config text is flat `key = value` lines; `#` starts a comment.  Keys:
//   name
//   data.kind             gaussian | soliton | soliton_plus_radiation | ring
//   data.amplitude        gaussian amplitude; ring amplitude
//   data.width            gaussian width
//   data.omega            soliton frequency
//   data.scale            soliton multiplier
//   data.bump_amplitude   soliton_plus_radiation bump (signed)
//   data.bump_width
//   data.bump_center
//   data.ring_center      ring
//   data.ring_width
//   data.ring_frequency
//   data.noise            amplitude of a seeded smooth random perturbation
//   grid.n  grid.L
//   integrator.dt  integrator.T  integrator.cadence  integrator.sponge
//   diagnostics.scatter  diagnostics.virial  diagnostics.pohozaev
//   diagnostics.checkpoint_stride
//   output.dir
//   seed

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "rnl/errors.hpp"
#include "rnl/field.hpp"
#include "rnl/integrator.hpp"

namespace rnl {

/// Invalid configuration; `field` names the offending key.
class ConfigError : public InvalidArgument {
 public:
  ConfigError(const std::string& field, const std::string& message)
      : InvalidArgument(field + ": " + message), field_(field) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// A run directory lacks files the report needs, or they were altered.
class MissingArtifactError : public std::runtime_error {
 public:
  explicit MissingArtifactError(std::vector<std::string> files);
  const std::vector<std::string>& files() const noexcept { return files_; }

 private:
  std::vector<std::string> files_;
};

struct ScenarioConfig {
  std::string name = "custom";

  std::string kind = "gaussian";
  double amplitude = 0.05;
  double width = 1.0;
  double omega = 1.0;
  double scale = 1.0;
  double bump_amplitude = 0.1;
  double bump_width = 1.0;
  double bump_center = 0.0;
  double ring_center = 20.0;
  double ring_width = 2.0;
  double ring_frequency = 2.0;
  double noise = 0.0;

  std::size_t n = 2048;
  double L = 40.0;

  double dt = 1e-3;
  double T = 1.0;
  double cadence = 0.05;
  bool sponge = false;

  bool scatter = true;
  bool virial = true;
  bool pohozaev = true;
  int checkpoint_stride = 8;

  std::filesystem::path output = "runs/custom";
  std::uint64_t seed = 0;
};

/// Keys in canonical order.
const std::vector<std::string>& config_keys();

/// Set one key from its text value.  ConfigError on unknown keys or values
/// that do not parse.
void set_config_value(ScenarioConfig& c, const std::string& key, const std::string& value);

/// Apply "key=value".
void apply_override(ScenarioConfig& c, const std::string& assignment);

/// Parse config text on top of `base`.  Later lines override earlier ones.
ScenarioConfig parse_config(const std::string& text, ScenarioConfig base = {});
ScenarioConfig load_config(const std::filesystem::path& path);

/// Every field checked; throws ConfigError naming the first bad field.
void validate(const ScenarioConfig& c);

/// Canonical text form; parse_config(to_text(c)) == c.
std::string to_text(const ScenarioConfig& c);

/// small_data, soliton, perturbed_soliton, negative_energy, soliton_plus_radiation.
std::vector<ScenarioConfig> list_scenarios();
/// ConfigError (field "name") for an unknown scenario.
ScenarioConfig builtin_scenario(const std::string& name);

RadialField initial_data(const ScenarioConfig& c);
EvolveOptions evolve_options(const ScenarioConfig& c);

struct RunResult {
  std::filesystem::path directory;
  RunStatus status = RunStatus::completed;
  double status_time = 0.0;
};

/// Integrate, run the enabled diagnostics and write the run directory:
/// config.txt, ledger.csv, checkpoints/, scatter.json, u_plus.ckpt,
/// virial.csv, weighted_virial.csv, pohozaev.csv and summary.json (which
/// also lists the SHA-256 of every other artifact).  Blowup is a result and
/// does not throw.
RunResult run_scenario(const ScenarioConfig& c);

/// Files the report depends on, relative to the run directory.
std::vector<std::string> required_artifacts();

/// Reads a run directory and writes report/conserved.csv, report/pairing.csv,
/// report/exterior_energy.csv, report/pohozaev.csv and report/summary.txt.
/// MissingArtifactError lists absent or altered files.  Returns the
/// report directory.
std::filesystem::path write_report(const std::filesystem::path& run_dir);

/// Checkpoints of a run directory as a trajectory (time order).
Trajectory load_checkpoints(const std::filesystem::path& run_dir);

/// Lower-case hex SHA-256 of a file's bytes.
std::string file_sha256(const std::filesystem::path& path);

}  // namespace rnl
