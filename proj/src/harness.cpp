#include "rnl/harness.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <json.hpp>
#include <random>
#include <sstream>

#include "rnl/checkpoint.hpp"
#include "rnl/ground_state.hpp"
#include "rnl/inout.hpp"
#include "rnl/propagator.hpp"
#include "rnl/scattering.hpp"
#include "rnl/spectral.hpp"
#include "rnl/virial.hpp"

namespace rnl {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const std::vector<std::string> kKinds{"gaussian", "soliton", "soliton_plus_radiation", "ring"};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& v) {
  double out = 0.0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc() || res.ptr != v.data() + v.size()) throw ConfigError(key, "not a number: '" + v + "'");
  return out;
}

template <typename Int>
Int parse_int(const std::string& key, const std::string& v) {
  Int out = 0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc() || res.ptr != v.data() + v.size()) throw ConfigError(key, "not an integer: '" + v + "'");
  return out;
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "on" || v == "1") return true;
  if (v == "false" || v == "off" || v == "0") return false;
  throw ConfigError(key, "expected true/false, got '" + v + "'");
}

std::string show(bool b) { return b ? "true" : "false"; }

struct Field {
  std::string key;
  std::function<void(ScenarioConfig&, const std::string&)> set;
  std::function<std::string(const ScenarioConfig&)> get;
};

Field real_field(std::string key, double ScenarioConfig::*m) {
  return {key, [key, m](ScenarioConfig& c, const std::string& v) { c.*m = parse_double(key, v); },
          [m](const ScenarioConfig& c) { return format_double(c.*m); }};
}

Field bool_field(std::string key, bool ScenarioConfig::*m) {
  return {key, [key, m](ScenarioConfig& c, const std::string& v) { c.*m = parse_bool(key, v); },
          [m](const ScenarioConfig& c) { return show(c.*m); }};
}

const std::vector<Field>& fields() {
  static const std::vector<Field> table{
      {"name", [](ScenarioConfig& c, const std::string& v) { c.name = v; },
       [](const ScenarioConfig& c) { return c.name; }},
      {"data.kind", [](ScenarioConfig& c, const std::string& v) { c.kind = v; },
       [](const ScenarioConfig& c) { return c.kind; }},
      real_field("data.amplitude", &ScenarioConfig::amplitude),
      real_field("data.width", &ScenarioConfig::width),
      real_field("data.omega", &ScenarioConfig::omega),
      real_field("data.scale", &ScenarioConfig::scale),
      real_field("data.bump_amplitude", &ScenarioConfig::bump_amplitude),
      real_field("data.bump_width", &ScenarioConfig::bump_width),
      real_field("data.bump_center", &ScenarioConfig::bump_center),
      real_field("data.ring_center", &ScenarioConfig::ring_center),
      real_field("data.ring_width", &ScenarioConfig::ring_width),
      real_field("data.ring_frequency", &ScenarioConfig::ring_frequency),
      real_field("data.noise", &ScenarioConfig::noise),
      {"grid.n", [](ScenarioConfig& c, const std::string& v) { c.n = parse_int<std::size_t>("grid.n", v); },
       [](const ScenarioConfig& c) { return std::to_string(c.n); }},
      real_field("grid.L", &ScenarioConfig::L),
      real_field("integrator.dt", &ScenarioConfig::dt),
      real_field("integrator.T", &ScenarioConfig::T),
      real_field("integrator.cadence", &ScenarioConfig::cadence),
      bool_field("integrator.sponge", &ScenarioConfig::sponge),
      bool_field("diagnostics.scatter", &ScenarioConfig::scatter),
      bool_field("diagnostics.virial", &ScenarioConfig::virial),
      bool_field("diagnostics.pohozaev", &ScenarioConfig::pohozaev),
      {"diagnostics.checkpoint_stride",
       [](ScenarioConfig& c, const std::string& v) {
         c.checkpoint_stride = parse_int<int>("diagnostics.checkpoint_stride", v);
       },
       [](const ScenarioConfig& c) { return std::to_string(c.checkpoint_stride); }},
      {"output.dir", [](ScenarioConfig& c, const std::string& v) { c.output = v; },
       [](const ScenarioConfig& c) { return c.output.string(); }},
      {"seed", [](ScenarioConfig& c, const std::string& v) { c.seed = parse_int<std::uint64_t>("seed", v); },
       [](const ScenarioConfig& c) { return std::to_string(c.seed); }},
  };
  return table;
}

bool multiple_of(double x, double step) {
  const double q = x / step;
  return std::abs(q - std::round(q)) < 1e-9 * std::max(1.0, q);
}

double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1p-53; }

// Four Gaussian shells with random centres, widths and phases inside L / 4.
RadialField seeded_noise(const RadialGrid& g, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::array<double, 4> amp{}, ctr{}, wid{}, phase{};
  for (int b = 0; b < 4; ++b) {
    amp[b] = 0.25 + 0.75 * unit(rng);
    ctr[b] = 0.25 * g.L() * unit(rng);
    wid[b] = 0.7 + 1.5 * unit(rng);
    phase[b] = 2.0 * kPi * unit(rng);
  }
  return RadialField::sample(g, [&](double r) {
    cplx v = 0.0;
    for (int b = 0; b < 4; ++b) {
      const double s = (r - ctr[b]) / wid[b];
      v += amp[b] * std::exp(-s * s) * std::polar(1.0, phase[b]);
    }
    return v;
  });
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  os << text;
}

std::string read_text(const fs::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

json number(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

json numbers(const std::vector<double>& xs) {
  json out = json::array();
  for (double x : xs) out.push_back(number(x));
  return out;
}

std::vector<double> ledger_radii(double L) {
  std::vector<double> out;
  for (double R : {4.0, 8.0, 16.0}) {
    if (R < L) out.push_back(R);
  }
  return out;
}

std::string ledger_csv(const ConservedLedger& ledger) {
  std::ostringstream os;
  os << "t,mass,energy,kinetic,quartic,sup_amplitude,h1_norm,sponge_loss";
  for (double R : ledger.radii) os << ",local_mass_" << format_double(R);
  for (double R : ledger.radii) os << ",exterior_energy_" << format_double(R);
  os << '\n';
  for (const auto& row : ledger.rows) {
    os << format_double(row.t) << ',' << format_double(row.mass) << ',' << format_double(row.energy) << ','
       << format_double(row.kinetic) << ',' << format_double(row.quartic) << ','
       << format_double(row.sup_amplitude) << ',' << format_double(row.h1_norm) << ','
       << format_double(row.sponge_loss);
    for (double v : row.local_mass) os << ',' << format_double(v);
    for (double v : row.exterior_energy) os << ',' << format_double(v);
    os << '\n';
  }
  return os.str();
}

// Snapshot indices at roughly tenths of the run, ending at the last one.
std::vector<double> scatter_times(const Trajectory& traj) {
  const std::size_t last = traj.snapshots.size() - 1;
  std::vector<double> out;
  for (std::size_t k = 1; k <= 10; ++k) {
    const std::size_t i = (k * last + 5) / 10;
    if (i == 0) continue;
    const double t = traj.snapshots[i].t;
    if (out.empty() || t > out.back()) out.push_back(t);
  }
  return out;
}

constexpr double kProbeWidth = 2.0;
constexpr double kExteriorDelta = 0.1;

json scatter_section(const ScenarioConfig& c, const Trajectory& traj, const fs::path& dir) {
  if (!c.scatter) return json{{"skipped", "disabled"}};
  if (traj.status != RunStatus::completed) return json{{"skipped", "run status " + to_string(traj.status)}};
  const auto times = scatter_times(traj);
  ScatterReport rep{RadialField::zeros(traj.grid())};
  try {
    rep = extract_radiation(traj, times);
  } catch (const NumericalError& e) {
    return json{{"skipped", e.what()}};
  }
  write_checkpoint(dir / "u_plus.ckpt", rep.u_plus);

  json out;
  out["T_last"] = rep.T_last;
  out["sample_times"] = numbers(rep.sample_times);
  out["cauchy_gaps"] = numbers(rep.cauchy_gaps);
  out["gap_trend"] = number(rep.gap_trend());
  out["wb_h1_norms"] = numbers(rep.wb_h1_norms);
  out["u_plus_h1"] = number(rep.u_plus_h1);
  out["mass_decoupling_residual"] = number(rep.mass_decoupling_residual);
  out["energy_decoupling_residual"] = number(rep.energy_decoupling_residual);
  out["smallness_flag"] = rep.smallness_flag;
  out["smallness"] = {{"times", numbers(rep.smallness.times)},
                      {"ball_mass", numbers(rep.smallness.ball_mass)},
                      {"flux_rate", numbers(rep.smallness.flux_rate)},
                      {"trailing_min", number(rep.smallness.trailing_min)},
                      {"trailing_max", number(rep.smallness.trailing_max)},
                      {"drift_bound", number(rep.smallness.drift_bound)}};

  const auto probe = RadialField::sample(traj.grid(), [](double r) {
    const double s = r / kProbeWidth;
    return cplx(std::exp(-s * s));
  });
  const auto orth = asymptotic_orthogonality(traj, rep.u_plus, probe, times);
  std::vector<double> re, im, mag;
  for (const auto& v : orth.values) {
    re.push_back(v.real());
    im.push_back(v.imag());
    mag.push_back(std::abs(v));
  }
  out["pairing"] = {{"probe_width", kProbeWidth}, {"times", numbers(orth.times)}, {"abs", numbers(mag)},
                    {"re", numbers(re)},           {"im", numbers(im)},          {"wall_flag", orth.wall_flag}};

  const auto wb = weakly_bound(traj, rep.u_plus, rep.T_last);
  std::vector<double> radii, values, scaled;
  for (double R : {2.0, 4.0, 8.0, 16.0}) {
    if (R >= c.L) continue;
    const double e = exterior_energy(wb, R);
    radii.push_back(R);
    values.push_back(e);
    scaled.push_back(e * std::pow(R, 2.0 - 2.0 * kExteriorDelta));
  }
  out["exterior_energy"] = {{"t", rep.T_last}, {"delta", kExteriorDelta}, {"R", numbers(radii)},
                            {"value", numbers(values)}, {"scaled", numbers(scaled)}};
  return out;
}

std::string virial_csv(const Trajectory& traj) {
  std::ostringstream os;
  os << "t,lhs,rhs,residual,lhs_rate,tail_flagged\n";
  for (const auto& row : virial_series(traj)) {
    os << format_double(row.t) << ',' << format_double(row.lhs) << ',' << format_double(row.rhs) << ','
       << format_double(row.residual) << ',' << format_double(row.lhs_rate) << ',' << (row.tail_flagged ? 1 : 0)
       << '\n';
  }
  return os.str();
}

std::string weighted_virial_csv(const Trajectory& traj) {
  const auto w = make_virial_weight(traj.grid());
  std::vector<WeightedVirial> rows(traj.snapshots.size());
  for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = weighted_virial(traj.snapshots[i].u, w);
  std::ostringstream os;
  os << "t,lhs,rhs,exact_rhs,error_term,envelope\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& v = rows[i];
    os << format_double(traj.snapshots[i].t) << ',' << format_double(v.lhs) << ',' << format_double(v.rhs) << ','
       << format_double(v.exact_rhs) << ',' << format_double(v.error_term) << ',' << format_double(v.envelope)
       << '\n';
  }
  return os.str();
}

// Averages over [0, tau] for tau = T/4, T/2, T of the available horizon.
json pohozaev_section(const Trajectory& traj, std::string& csv) {
  std::ostringstream os;
  os << "tau,average,scale,ratio\n";
  json out = json::array();
  const double horizon = traj.snapshots.back().t;
  for (double frac : {0.25, 0.5, 1.0}) {
    const double tau = frac * horizon;
    json entry{{"T", 0.0}, {"tau", tau}};
    if (!(tau > 0.0)) {
      entry["skipped"] = "empty window";
      out.push_back(entry);
      continue;
    }
    try {
      const auto p = pohozaev_average(traj, BoundStateConfig{}, 0.0, tau);
      const double ratio = p.scale > 0.0 ? p.value / p.scale : 0.0;
      entry["average"] = number(p.value);
      entry["scale"] = number(p.scale);
      entry["ratio"] = number(ratio);
      entry["samples"] = p.samples;
      os << format_double(tau) << ',' << format_double(p.value) << ',' << format_double(p.scale) << ','
         << format_double(ratio) << '\n';
    } catch (const NumericalError& e) {
      entry["skipped"] = e.what();
    }
    out.push_back(entry);
  }
  csv = os.str();
  return out;
}

// For the unperturbed soliton the weakly bound state is known in closed form;
// its diagnostics are reported next to those of the computed run.
json exact_rotation_section(const ScenarioConfig& c) {
  const RadialGrid g(c.n, c.L);
  const auto gs = solve_ground_state(g, c.omega);
  const double period = 2.0 * kPi / c.omega;
  std::vector<Snapshot> snaps;
  for (int i = 0; i <= 64; ++i) {
    const double t = period * i / 64.0;
    snaps.push_back({t, gs.Q * std::polar(1.0, c.omega * t)});
  }
  const auto traj = trajectory_from_snapshots(std::move(snaps));
  const auto p = pohozaev_average(traj, BoundStateConfig{}, 0.0, period);
  const double four_k = 4.0 * gs.kinetic;
  return {{"period", period}, {"pohozaev_average", number(p.value)}, {"four_kinetic", number(four_k)},
          {"ratio", number(p.value / four_k)}};
}

}  // namespace

MissingArtifactError::MissingArtifactError(std::vector<std::string> files)
    : std::runtime_error([&] {
        std::string msg = "missing or altered artifacts:";
        for (const auto& f : files) msg += " " + f;
        return msg;
      }()),
      files_(std::move(files)) {}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> out;
    for (const auto& f : fields()) out.push_back(f.key);
    return out;
  }();
  return keys;
}

void set_config_value(ScenarioConfig& c, const std::string& key, const std::string& value) {
  for (const auto& f : fields()) {
    if (f.key == key) {
      f.set(c, value);
      return;
    }
  }
  throw ConfigError(key, "unknown key");
}

void apply_override(ScenarioConfig& c, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) throw ConfigError(trim(assignment), "expected key=value");
  set_config_value(c, trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)));
}

ScenarioConfig parse_config(const std::string& text, ScenarioConfig base) {
  std::istringstream is(text);
  std::string line;
  int number = 0;
  while (std::getline(is, line)) {
    ++number;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.find('=') == std::string::npos) {
      throw ConfigError("line " + std::to_string(number), "expected key = value");
    }
    apply_override(base, line);
  }
  return base;
}

ScenarioConfig load_config(const fs::path& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("config", "cannot read " + path.string());
  std::ostringstream ss;
  ss << is.rdbuf();
  return parse_config(ss.str());
}

void validate(const ScenarioConfig& c) {
  const auto positive = [](const char* key, double v) {
    if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError(key, "must be positive and finite");
  };
  const auto finite = [](const char* key, double v) {
    if (!std::isfinite(v)) throw ConfigError(key, "must be finite");
  };
  if (c.name.empty()) throw ConfigError("name", "must not be empty");
  for (char ch : c.name) {
    if (!(std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' || ch == '-')) {
      throw ConfigError("name", "only letters, digits, '_' and '-' are allowed");
    }
  }
  if (std::find(kKinds.begin(), kKinds.end(), c.kind) == kKinds.end()) {
    throw ConfigError("data.kind", "must be one of gaussian, soliton, soliton_plus_radiation, ring");
  }
  finite("data.amplitude", c.amplitude);
  positive("data.width", c.width);
  positive("data.omega", c.omega);
  positive("data.scale", c.scale);
  finite("data.bump_amplitude", c.bump_amplitude);
  positive("data.bump_width", c.bump_width);
  finite("data.bump_center", c.bump_center);
  if (c.bump_center < 0.0) throw ConfigError("data.bump_center", "must be non-negative");
  positive("data.ring_width", c.ring_width);
  finite("data.ring_frequency", c.ring_frequency);
  finite("data.noise", c.noise);
  if (c.noise < 0.0) throw ConfigError("data.noise", "must be non-negative");
  if (c.n < 8 || !std::has_single_bit(c.n)) throw ConfigError("grid.n", "must be a power of two >= 8");
  if (c.n > (std::size_t{1} << 22)) throw ConfigError("grid.n", "must not exceed 2^22");
  positive("grid.L", c.L);
  if (c.kind == "ring" && !(c.ring_center > 0.0 && c.ring_center < c.L)) {
    throw ConfigError("data.ring_center", "must lie inside (0, grid.L)");
  }
  if (c.bump_center >= c.L) throw ConfigError("data.bump_center", "must lie inside the grid");
  positive("integrator.dt", c.dt);
  positive("integrator.T", c.T);
  positive("integrator.cadence", c.cadence);
  if (c.cadence < c.dt || !multiple_of(c.cadence, c.dt)) {
    throw ConfigError("integrator.cadence", "must be a multiple of integrator.dt");
  }
  if (c.T < c.cadence || !multiple_of(c.T, c.cadence)) {
    throw ConfigError("integrator.T", "must be a multiple of integrator.cadence");
  }
  if (c.T / c.cadence < 2.0) throw ConfigError("integrator.T", "must hold at least two cadence intervals");
  if (c.checkpoint_stride < 1) throw ConfigError("diagnostics.checkpoint_stride", "must be at least 1");
  if (c.output.empty()) throw ConfigError("output.dir", "must not be empty");
}

std::string to_text(const ScenarioConfig& c) {
  std::ostringstream os;
  for (const auto& f : fields()) os << f.key << " = " << f.get(c) << '\n';
  return os.str();
}

std::vector<ScenarioConfig> list_scenarios() {
  std::vector<ScenarioConfig> out;

  ScenarioConfig small;
  small.name = "small_data";
  small.kind = "gaussian";
  small.amplitude = 0.05;
  small.width = 1.0;
  small.n = 4096;
  small.L = 800.0;
  small.dt = 0.005;
  small.T = 50.0;
  small.cadence = 0.125;
  out.push_back(small);

  ScenarioConfig soliton;
  soliton.name = "soliton";
  soliton.kind = "soliton";
  soliton.n = 2048;
  soliton.L = 40.0;
  soliton.dt = 1e-3;
  soliton.T = 20.0;
  soliton.cadence = 0.05;
  soliton.sponge = true;
  out.push_back(soliton);

  ScenarioConfig perturbed = soliton;
  perturbed.name = "perturbed_soliton";
  perturbed.kind = "soliton_plus_radiation";
  perturbed.bump_amplitude = -0.05;
  perturbed.bump_width = 1.0;
  perturbed.bump_center = 0.0;
  perturbed.L = 80.0;
  perturbed.dt = 2e-3;
  out.push_back(perturbed);

  ScenarioConfig negative;
  negative.name = "negative_energy";
  negative.kind = "soliton";
  negative.scale = 1.5;
  negative.n = 2048;
  negative.L = 40.0;
  negative.dt = 1e-3;
  negative.T = 2.0;
  negative.cadence = 0.01;
  out.push_back(negative);

  ScenarioConfig radiating = soliton;
  radiating.name = "soliton_plus_radiation";
  radiating.kind = "soliton_plus_radiation";
  radiating.bump_amplitude = 0.02;
  radiating.bump_width = 1.0;
  radiating.bump_center = 15.0;
  radiating.n = 4096;
  radiating.L = 100.0;
  out.push_back(radiating);

  for (auto& c : out) c.output = fs::path("runs") / c.name;
  return out;
}

ScenarioConfig builtin_scenario(const std::string& name) {
  for (const auto& c : list_scenarios()) {
    if (c.name == name) return c;
  }
  throw ConfigError("name", "unknown scenario '" + name + "'");
}

RadialField initial_data(const ScenarioConfig& c) {
  validate(c);
  const RadialGrid g(c.n, c.L);
  RadialField u = RadialField::zeros(g);
  if (c.kind == "gaussian") {
    u = RadialField::sample(g, [&](double r) {
      const double s = r / c.width;
      return cplx(c.amplitude * std::exp(-s * s));
    });
  } else if (c.kind == "ring") {
    u = ring_profile(g, c.ring_center, c.ring_width, c.ring_frequency, c.amplitude);
  } else {
    u = solve_ground_state(g, c.omega).Q * c.scale;
    if (c.kind == "soliton_plus_radiation") {
      u = u + RadialField::sample(g, [&](double r) {
            const double s = (r - c.bump_center) / c.bump_width;
            return cplx(c.bump_amplitude * std::exp(-s * s));
          });
    }
  }
  if (c.noise > 0.0) u = u + seeded_noise(g, c.seed) * c.noise;
  return u;
}

EvolveOptions evolve_options(const ScenarioConfig& c) {
  EvolveOptions o;
  o.dt = c.dt;
  o.T = c.T;
  o.cadence = c.cadence;
  o.sponge = c.sponge;
  o.ledger_radii = ledger_radii(c.L);
  return o;
}

RunResult run_scenario(const ScenarioConfig& c) {
  validate(c);
  const fs::path dir = c.output;
  fs::create_directories(dir / "checkpoints");
  write_text(dir / "config.txt", to_text(c));

  const auto u0 = initial_data(c);
  const auto traj = evolve(u0, evolve_options(c));
  write_text(dir / "ledger.csv", ledger_csv(traj.ledger));

  std::vector<std::string> artifacts{"config.txt", "ledger.csv"};
  {
    std::ostringstream index;
    index << "file,t\n";
    const std::size_t count = traj.snapshots.size();
    for (std::size_t i = 0; i < count; ++i) {
      if (i % static_cast<std::size_t>(c.checkpoint_stride) != 0 && i + 1 != count) continue;
      std::ostringstream name;
      name << "u_" << std::setw(6) << std::setfill('0') << i << ".ckpt";
      write_checkpoint(dir / "checkpoints" / name.str(), traj.snapshots[i].u);
      index << name.str() << ',' << format_double(traj.snapshots[i].t) << '\n';
      artifacts.push_back("checkpoints/" + name.str());
    }
    write_text(dir / "checkpoints" / "index.csv", index.str());
    artifacts.push_back("checkpoints/index.csv");
  }

  const json scatter = scatter_section(c, traj, dir);
  write_text(dir / "scatter.json", scatter.dump(2) + "\n");
  artifacts.push_back("scatter.json");
  if (fs::exists(dir / "u_plus.ckpt") && !scatter.contains("skipped")) artifacts.push_back("u_plus.ckpt");

  const bool enough = traj.snapshots.size() >= 3;
  write_text(dir / "virial.csv", c.virial && enough ? virial_csv(traj) : "t,lhs,rhs,residual,lhs_rate,tail_flagged\n");
  write_text(dir / "weighted_virial.csv",
             c.virial && enough ? weighted_virial_csv(traj) : "t,lhs,rhs,exact_rhs,error_term,envelope\n");
  artifacts.push_back("virial.csv");
  artifacts.push_back("weighted_virial.csv");

  std::string pohozaev_csv = "tau,average,scale,ratio\n";
  json pohozaev = json::array();
  if (c.pohozaev) pohozaev = pohozaev_section(traj, pohozaev_csv);
  write_text(dir / "pohozaev.csv", pohozaev_csv);
  artifacts.push_back("pohozaev.csv");

  json summary;
  summary["name"] = c.name;
  summary["kind"] = c.kind;
  summary["status"] = to_string(traj.status);
  summary["status_time"] = number(traj.status_time);
  summary["status_reason"] = traj.status_reason;
  summary["steps"] = traj.steps;
  summary["halvings"] = traj.halvings;
  summary["final_dt"] = number(traj.final_dt);
  summary["snapshots"] = traj.snapshots.size();
  summary["t_end"] = traj.snapshots.back().t;
  summary["mass_drift"] = number(traj.ledger.mass_drift());
  summary["energy_drift"] = number(traj.ledger.energy_drift());
  summary["mass_flagged"] = traj.ledger.mass_flagged();
  summary["energy_flagged"] = traj.ledger.energy_flagged();
  summary["initial"] = {{"mass", number(mass(u0))}, {"energy", number(energy(u0))}};
  if (scatter.contains("skipped")) {
    summary["scatter"] = {{"skipped", scatter["skipped"]}};
  } else {
    summary["scatter"] = {{"gap_trend", scatter["gap_trend"]},
                          {"mass_decoupling_residual", scatter["mass_decoupling_residual"]},
                          {"energy_decoupling_residual", scatter["energy_decoupling_residual"]},
                          {"smallness_flag", scatter["smallness_flag"]},
                          {"u_plus_h1", scatter["u_plus_h1"]}};
  }
  summary["pohozaev"] = pohozaev;
  if (c.pohozaev && c.kind == "soliton" && c.scale == 1.0 && c.noise == 0.0) {
    summary["exact_rotation"] = exact_rotation_section(c);
  }
  json hashes = json::object();
  for (const auto& a : artifacts) hashes[a] = file_sha256(dir / a);
  summary["artifacts"] = hashes;
  write_text(dir / "summary.json", summary.dump(2) + "\n");

  return {dir, traj.status, traj.status_time};
}

std::vector<std::string> required_artifacts() {
  return {"summary.json", "config.txt", "ledger.csv", "scatter.json", "virial.csv", "pohozaev.csv"};
}

Trajectory load_checkpoints(const fs::path& run_dir) {
  const auto index_path = run_dir / "checkpoints" / "index.csv";
  if (!fs::exists(index_path)) throw MissingArtifactError({"checkpoints/index.csv"});
  std::istringstream is(read_text(index_path));
  std::string line;
  std::getline(is, line);
  std::vector<Snapshot> snaps;
  std::vector<std::string> missing;
  while (std::getline(is, line)) {
    const auto comma = line.find(',');
    if (comma == std::string::npos) continue;
    const auto file = line.substr(0, comma);
    const auto path = run_dir / "checkpoints" / file;
    if (!fs::exists(path)) {
      missing.push_back("checkpoints/" + file);
      continue;
    }
    snaps.push_back({parse_double("checkpoints/index.csv", line.substr(comma + 1)), read_checkpoint(path)});
  }
  if (!missing.empty()) throw MissingArtifactError(missing);
  if (snaps.empty()) throw MissingArtifactError({"checkpoints/*.ckpt"});
  return trajectory_from_snapshots(std::move(snaps));
}

std::string file_sha256(const fs::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot read " + path.string());
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
  std::array<char, 1 << 16> buf{};
  while (is) {
    is.read(buf.data(), buf.size());
    EVP_DigestUpdate(ctx, buf.data(), static_cast<std::size_t>(is.gcount()));
  }
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx, md.data(), &len);
  EVP_MD_CTX_free(ctx);
  std::ostringstream hex;
  for (unsigned int i = 0; i < len; ++i) hex << std::hex << std::setw(2) << std::setfill('0') << int(md[i]);
  return hex.str();
}

fs::path write_report(const fs::path& run_dir) {
  std::vector<std::string> bad;
  for (const auto& a : required_artifacts()) {
    if (!fs::exists(run_dir / a)) bad.push_back(a);
  }
  json summary;
  if (fs::exists(run_dir / "summary.json")) {
    try {
      summary = json::parse(read_text(run_dir / "summary.json"));
    } catch (const json::parse_error&) {
      bad.push_back("summary.json (unreadable)");
    }
  }
  if (summary.contains("artifacts")) {
    for (const auto& [file, hash] : summary["artifacts"].items()) {
      const auto path = run_dir / file;
      if (!fs::exists(path)) {
        if (std::find(bad.begin(), bad.end(), file) == bad.end()) bad.push_back(file);
      } else if (file_sha256(path) != hash.get<std::string>()) {
        bad.push_back(file + " (modified)");
      }
    }
  } else if (bad.empty()) {
    bad.push_back("summary.json (no artifact list)");
  }
  if (!bad.empty()) throw MissingArtifactError(bad);

  const auto out = run_dir / "report";
  fs::create_directories(out);

  // conserved quantities
  {
    std::istringstream is(read_text(run_dir / "ledger.csv"));
    std::string line;
    std::getline(is, line);
    std::vector<std::string> header;
    for (std::istringstream hs(line); std::getline(hs, line, ',');) header.push_back(line);
    const auto col = [&](const std::string& name) {
      return static_cast<std::size_t>(std::find(header.begin(), header.end(), name) - header.begin());
    };
    const std::size_t ct = col("t"), cm = col("mass"), ce = col("energy"), cs = col("sponge_loss");
    std::ostringstream os;
    os << "t,mass,energy,sponge_loss,mass_change,energy_change\n";
    double m0 = 0.0, e0 = 0.0;
    bool first = true;
    while (std::getline(is, line)) {
      std::vector<std::string> cells;
      for (std::istringstream ls(line); std::getline(ls, line, ',');) cells.push_back(line);
      const double t = parse_double("ledger.csv", cells.at(ct));
      const double m = parse_double("ledger.csv", cells.at(cm));
      const double e = parse_double("ledger.csv", cells.at(ce));
      const double s = parse_double("ledger.csv", cells.at(cs));
      if (first) {
        m0 = m;
        e0 = e;
        first = false;
      }
      os << format_double(t) << ',' << format_double(m) << ',' << format_double(e) << ',' << format_double(s) << ','
         << format_double(m + s - m0) << ',' << format_double(e - e0) << '\n';
    }
    write_text(out / "conserved.csv", os.str());
  }

  const json scatter = json::parse(read_text(run_dir / "scatter.json"));
  {
    std::ostringstream os;
    os << "t,abs,re,im\n";
    if (scatter.contains("pairing")) {
      const auto& p = scatter["pairing"];
      for (std::size_t i = 0; i < p["times"].size(); ++i) {
        os << format_double(p["times"][i].get<double>()) << ',' << format_double(p["abs"][i].get<double>()) << ','
           << format_double(p["re"][i].get<double>()) << ',' << format_double(p["im"][i].get<double>()) << '\n';
      }
    }
    write_text(out / "pairing.csv", os.str());
  }
  {
    std::ostringstream os;
    os << "R,exterior_energy,scaled\n";
    if (scatter.contains("exterior_energy")) {
      const auto& x = scatter["exterior_energy"];
      for (std::size_t i = 0; i < x["R"].size(); ++i) {
        os << format_double(x["R"][i].get<double>()) << ',' << format_double(x["value"][i].get<double>()) << ','
           << format_double(x["scaled"][i].get<double>()) << '\n';
      }
    }
    write_text(out / "exterior_energy.csv", os.str());
  }
  write_text(out / "pohozaev.csv", read_text(run_dir / "pohozaev.csv"));

  std::ostringstream txt;
  const auto value = [](const json& j) {
    if (j.is_number()) return format_double(j.get<double>());
    if (j.is_boolean()) return std::string(j.get<bool>() ? "true" : "false");
    if (j.is_string()) return j.get<std::string>();
    return std::string("n/a");
  };
  txt << "scenario        " << value(summary["name"]) << " (" << value(summary["kind"]) << ")\n";
  txt << "status          " << value(summary["status"]);
  if (summary["status"] != "completed") txt << " at t = " << value(summary["status_time"]);
  txt << '\n';
  txt << "t_end           " << value(summary["t_end"]) << "  steps " << value(summary["steps"]) << "  halvings "
      << value(summary["halvings"]) << '\n';
  txt << "mass drift      " << value(summary["mass_drift"]) << (summary["mass_flagged"].get<bool>() ? "  FLAGGED" : "")
      << '\n';
  txt << "energy drift    " << value(summary["energy_drift"])
      << (summary["energy_flagged"].get<bool>() ? "  FLAGGED" : "") << '\n';
  const auto& sc = summary["scatter"];
  if (sc.contains("skipped")) {
    txt << "scattering      skipped: " << value(sc["skipped"]) << '\n';
  } else {
    txt << "gap trend       " << value(sc["gap_trend"]) << '\n';
    txt << "mass decoupling " << value(sc["mass_decoupling_residual"]) << '\n';
    txt << "energy decoupl. " << value(sc["energy_decoupling_residual"]) << '\n';
    txt << "smallness flag  " << value(sc["smallness_flag"]) << '\n';
    txt << "||u+||_H1       " << value(sc["u_plus_h1"]) << '\n';
  }
  for (const auto& p : summary["pohozaev"]) {
    txt << "pohozaev tau=" << value(p["tau"]) << "  ";
    if (p.contains("skipped")) {
      txt << "skipped\n";
    } else {
      txt << "average " << value(p["average"]) << "  ratio " << value(p["ratio"]) << '\n';
    }
  }
  if (summary.contains("exact_rotation")) {
    const auto& x = summary["exact_rotation"];
    txt << "exact rotation  pohozaev average over one period " << value(x["pohozaev_average"]) << "  ratio to 4K "
        << value(x["ratio"]) << '\n';
  }
  write_text(out / "summary.txt", txt.str());
  return out;
}

}  // namespace rnl
