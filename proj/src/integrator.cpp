#include "rnl/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "rnl/errors.hpp"
#include "rnl/sine_transform.hpp"
#include "rnl/spectral.hpp"

namespace rnl {

namespace {

constexpr int kUnitBits = 12;  // time bookkeeping in units of dt / 2^12

// In-place Strang stepping on raw samples.
class Stepper {
 public:
  Stepper(const RadialGrid& g, double dt)
      : g_(g), tr_(SineTransform::get(g.n())), v_(g.size()), b_(g.size()), lin_(g.size()) {
    set_dt(dt);
  }

  void set_dt(double dt) {
    dt_ = dt;
    for (std::size_t i = 0; i < lin_.size(); ++i) {
      const double k = g_.wavenumber(i);
      lin_[i] = std::polar(1.0, -k * k * dt);
    }
  }

  double dt() const { return dt_; }

  void step(std::vector<cplx>& u) {
    half_phase(u);
    for (std::size_t i = 0; i < u.size(); ++i) v_[i] = u[i] * g_.r(i);
    tr_.forward(v_, b_);
    for (std::size_t i = 0; i < b_.size(); ++i) b_[i] *= lin_[i];
    tr_.inverse(b_, v_);
    for (std::size_t i = 0; i < u.size(); ++i) u[i] = v_[i] / g_.r(i);
    half_phase(u);
  }

  // Energy, kinetic part and max |grad u| of raw samples.
  struct Probe {
    double energy, kinetic, quartic, grad_sup;
  };

  Probe probe(const std::vector<cplx>& u) {
    for (std::size_t i = 0; i < u.size(); ++i) v_[i] = u[i] * g_.r(i);
    tr_.forward(v_, b_);
    double kin = 0.0;
    for (std::size_t i = 0; i < b_.size(); ++i) {
      const double k = g_.wavenumber(i);
      kin += k * k * std::norm(b_[i]);
    }
    kin *= 2.0 * kPi * g_.L();
    double quart = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
      const double a = std::norm(u[i]);
      const double r = g_.r(i);
      quart += a * a * r * r;
    }
    quart *= 4.0 * kPi * g_.dr();
    dv_.resize(g_.n());
    tr_.derivative(b_, g_.L(), dv_);
    double gsup = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
      gsup = std::max(gsup, std::abs((dv_[i + 1] - u[i]) / g_.r(i)));
    }
    return {0.5 * kin - 0.25 * quart, kin, quart, gsup};
  }

 private:
  void half_phase(std::vector<cplx>& u) const {
    const double h = 0.5 * dt_;
    for (auto& z : u) z *= std::polar(1.0, h * std::norm(z));
  }

  const RadialGrid& g_;
  const SineTransform& tr_;
  std::vector<cplx> v_, b_, lin_, dv_;
  double dt_ = 0.0;
};

double raw_sup(const std::vector<cplx>& u) {
  double m = 0.0;
  for (const auto& z : u) m = std::max(m, std::abs(z));
  return m;
}

bool all_finite(const std::vector<cplx>& u, std::size_t& bad) {
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (!std::isfinite(u[i].real()) || !std::isfinite(u[i].imag())) {
      bad = i;
      return false;
    }
  }
  return true;
}

double raw_mass(const RadialGrid& g, const std::vector<cplx>& u) {
  double acc = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double r = g.r(i);
    acc += std::norm(u[i]) * r * r;
  }
  return 4.0 * kPi * g.dr() * acc;
}

double edge_mass_fraction(const RadialGrid& g, const std::vector<cplx>& u) {
  double edge = 0.0, total = 0.0;
  const double r0 = 0.95 * g.L();
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double r = g.r(i);
    const double w = std::norm(u[i]) * r * r;
    total += w;
    if (r >= r0) edge += w;
  }
  return total > 0.0 ? edge / total : 0.0;
}

std::vector<double> sponge_profile(const RadialGrid& g, double strength) {
  std::vector<double> gamma(g.size());
  const double start = 0.9 * g.L();
  const double width = 0.1 * g.L();
  for (std::size_t i = 0; i < gamma.size(); ++i) {
    const double r = g.r(i);
    if (r > start) {
      const double s = (r - start) / width;
      gamma[i] = strength * s * s;
    }
  }
  return gamma;
}

bool is_multiple(double a, double b, long& count) {
  const double q = a / b;
  count = std::lround(q);
  return count >= 1 && std::abs(q - static_cast<double>(count)) < 1e-9 * std::max(1.0, q);
}

}  // namespace

RadialField strang_step(const RadialField& f, double dt) {
  if (dt == 0.0 || !std::isfinite(dt)) throw InvalidArgument("strang_step: dt must be finite and non-zero");
  Stepper s(f.grid(), dt);
  std::vector<cplx> u(f.values().begin(), f.values().end());
  s.step(u);
  std::size_t bad = 0;
  if (!all_finite(u, bad)) throw NonFiniteError("strang_step: non-finite output", bad);
  return RadialField(f.grid(), std::move(u));
}

double ConservedLedger::mass_drift() const {
  if (rows.empty() || rows.front().mass == 0.0) return 0.0;
  const double m0 = rows.front().mass;
  double worst = 0.0;
  for (const auto& r : rows) worst = std::max(worst, std::abs(r.mass + r.sponge_loss - m0) / m0);
  return worst;
}

double ConservedLedger::energy_drift() const {
  if (rows.empty()) return 0.0;
  const double e0 = std::abs(rows.front().energy);
  const double scale = e0 > 0.0 ? e0 : rows.front().kinetic;
  if (scale == 0.0) return 0.0;
  double worst = 0.0;
  for (const auto& r : rows) worst = std::max(worst, std::abs(r.energy - rows.front().energy) / scale);
  return worst;
}

double ConservedLedger::h1_sup() const {
  double m = 0.0;
  for (const auto& r : rows) m = std::max(m, r.h1_norm);
  return m;
}

std::string to_string(RunStatus s) {
  switch (s) {
    case RunStatus::completed:
      return "completed";
    case RunStatus::blowup:
      return "blowup";
    case RunStatus::wall_contaminated:
      return "wall-contaminated";
  }
  return "unknown";
}

std::size_t Trajectory::index_of(double t) const {
  for (std::size_t i = 0; i < snapshots.size(); ++i) {
    if (std::abs(snapshots[i].t - t) <= 1e-9 * std::max(1.0, std::abs(t))) return i;
  }
  throw InvalidArgument("trajectory has no snapshot at t = " + std::to_string(t));
}

const Snapshot& Trajectory::at(double t) const { return snapshots[index_of(t)]; }

LedgerRow ledger_row(const RadialField& u, double t, const std::vector<double>& radii) {
  LedgerRow row;
  row.t = t;
  const auto parts = energy_parts(u);
  row.mass = mass(u);
  row.kinetic = parts.kinetic;
  row.quartic = parts.quartic;
  row.energy = parts.energy();
  row.sup_amplitude = sup_norm(u);
  row.h1_norm = std::sqrt(row.mass + row.kinetic);
  if (!radii.empty()) {
    const auto& g = u.grid();
    const auto dens = modulus_squared(u);
    const auto grad = modulus_squared(radial_derivative(u));
    for (double R : radii) {
      row.local_mass.push_back(ball_integral(g, dens, R));
      row.exterior_energy.push_back(exterior_integral(g, grad, R));
    }
  }
  return row;
}

Trajectory evolve(const RadialField& f0, const EvolveOptions& opt) {
  if (!(opt.dt > 0.0) || !(opt.T > 0.0) || !(opt.cadence >= opt.dt)) {
    throw InvalidArgument("evolve: need T > 0 and 0 < dt <= cadence");
  }
  long steps_per_sample = 0, samples = 0;
  if (!is_multiple(opt.cadence, opt.dt, steps_per_sample)) {
    throw InvalidArgument("evolve: cadence must be a multiple of dt");
  }
  if (!is_multiple(opt.T, opt.cadence, samples)) {
    throw InvalidArgument("evolve: T must be a multiple of cadence");
  }

  const auto& g = f0.grid();
  Trajectory traj;
  traj.ledger.radii = opt.ledger_radii;
  traj.ledger.mass_tolerance = opt.mass_tolerance;
  traj.ledger.energy_tolerance = opt.energy_tolerance;
  traj.snapshots.push_back({0.0, f0});
  traj.ledger.rows.push_back(ledger_row(f0, 0.0, opt.ledger_radii));

  Stepper stepper(g, opt.dt);
  std::vector<cplx> u(f0.values().begin(), f0.values().end());
  std::vector<cplx> saved;
  const double sup0 = std::max(raw_sup(u), 1e-300);
  auto p0 = stepper.probe(u);
  const double scale = raw_mass(g, u) + p0.kinetic;
  double e_prev = p0.energy;
  const auto gamma = opt.sponge ? sponge_profile(g, opt.sponge_strength) : std::vector<double>{};
  std::vector<double> damp;
  double damp_dt = 0.0;
  double sponge_loss = 0.0;
  int halvings = 0;

  const std::int64_t units_per_sample = static_cast<std::int64_t>(steps_per_sample) << kUnitBits;
  auto stop = [&](RunStatus status, double t, std::string reason) {
    traj.status = status;
    traj.status_time = t;
    traj.status_reason = std::move(reason);
  };

  bool running = true;
  for (long s = 0; s < samples && running; ++s) {
    std::int64_t done = 0;
    while (done < units_per_sample) {
      const double t_now =
          (static_cast<double>(s) + static_cast<double>(done) / static_cast<double>(units_per_sample)) *
          opt.cadence;
      saved = u;
      stepper.step(u);
      ++traj.steps;
      std::size_t bad = 0;
      const double t_next = t_now + stepper.dt();
      if (!all_finite(u, bad)) {
        stop(RunStatus::blowup, t_next, "non-finite sample at node " + std::to_string(bad));
        running = false;
        break;
      }
      const auto pr = stepper.probe(u);
      const double jump = std::abs(pr.energy - e_prev) / scale;
      if (jump > opt.step_energy_tolerance) {
        if (halvings >= opt.max_halvings) {
          stop(RunStatus::blowup, t_next, "energy jump persists after " + std::to_string(halvings) + " halvings");
          running = false;
          break;
        }
        u = saved;
        --traj.steps;
        ++halvings;
        stepper.set_dt(0.5 * stepper.dt());
        continue;
      }
      if (raw_sup(u) > opt.amplitude_ceiling * sup0) {
        stop(RunStatus::blowup, t_next, "amplitude ceiling exceeded");
        running = false;
        break;
      }
      if (g.dr() * pr.grad_sup > 1.0) {
        stop(RunStatus::blowup, t_next, "gradient unresolved on the grid");
        running = false;
        break;
      }
      if (opt.sponge) {
        if (damp_dt != stepper.dt()) {
          damp.resize(gamma.size());
          for (std::size_t i = 0; i < gamma.size(); ++i) damp[i] = std::exp(-stepper.dt() * gamma[i]);
          damp_dt = stepper.dt();
        }
        const double before = raw_mass(g, u);
        for (std::size_t i = 0; i < u.size(); ++i) u[i] *= damp[i];
        sponge_loss += before - raw_mass(g, u);
        e_prev = stepper.probe(u).energy;
      } else {
        e_prev = pr.energy;
      }
      done += std::int64_t{1} << (kUnitBits - halvings);
    }
    if (!running) break;
    const double t = static_cast<double>(s + 1) * opt.cadence;
    RadialField snap(g, u);
    auto row = ledger_row(snap, t, opt.ledger_radii);
    row.sponge_loss = sponge_loss;
    traj.ledger.rows.push_back(std::move(row));
    traj.snapshots.push_back({t, std::move(snap)});
    if (!opt.sponge && edge_mass_fraction(g, u) > opt.wall_mass_fraction) {
      stop(RunStatus::wall_contaminated, t, "mass reached the outer wall");
      running = false;
    }
  }
  traj.final_dt = stepper.dt();
  traj.halvings = halvings;
  return traj;
}

Trajectory evolve(const RadialField& f0, double dt, double T, double cadence) {
  EvolveOptions opt;
  opt.dt = dt;
  opt.T = T;
  opt.cadence = cadence;
  return evolve(f0, opt);
}

double spacetime_norm(const Trajectory& traj, double q, double p, double T0, double T1) {
  const bool p_ok = p == 2 || p == 3 || p == 4 || p == 6 || std::isinf(p);
  const bool q_ok = q == 1 || q == 2 || q == 4 || std::isinf(q);
  if (!p_ok || !q_ok) throw InvalidArgument("spacetime_norm: unsupported exponent");
  if (!(T1 > T0)) throw InvalidArgument("spacetime_norm: empty window");
  const double slack = 1e-9 * std::max(1.0, std::abs(T1));
  std::vector<double> ts, vals;
  for (const auto& s : traj.snapshots) {
    if (s.t >= T0 - slack && s.t <= T1 + slack) {
      ts.push_back(s.t);
      vals.push_back(lp_norm(s.u, p));
    }
  }
  if (ts.size() < 8) {
    throw NumericalError("spacetime_norm: window holds " + std::to_string(ts.size()) +
                         " snapshots, need at least 8");
  }
  if (std::isinf(q)) return *std::max_element(vals.begin(), vals.end());
  double acc = 0.0;
  for (std::size_t i = 1; i < ts.size(); ++i) {
    acc += 0.5 * (ts[i] - ts[i - 1]) * (std::pow(vals[i], q) + std::pow(vals[i - 1], q));
  }
  return std::pow(acc, 1.0 / q);
}

std::optional<double> detect_blowup(const Trajectory& traj) {
  if (traj.status == RunStatus::blowup) return traj.status_time;
  return std::nullopt;
}

Trajectory trajectory_from_snapshots(std::vector<Snapshot> snaps, const std::vector<double>& radii) {
  if (snaps.empty()) throw InvalidArgument("trajectory_from_snapshots: no snapshots");
  Trajectory traj;
  traj.ledger.radii = radii;
  for (std::size_t i = 0; i < snaps.size(); ++i) {
    if (i > 0 && !(snaps[i].t > snaps[i - 1].t)) {
      throw InvalidArgument("trajectory_from_snapshots: times must increase");
    }
    if (!(snaps[i].u.grid() == snaps.front().u.grid())) {
      throw InvalidArgument("trajectory_from_snapshots: grid mismatch");
    }
    traj.ledger.rows.push_back(ledger_row(snaps[i].u, snaps[i].t, radii));
  }
  traj.snapshots = std::move(snaps);
  return traj;
}

}  // namespace rnl
