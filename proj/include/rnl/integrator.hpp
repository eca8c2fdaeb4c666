#pragma once

// Time integration of i u_t + Laplacian u = -|u|^2 u by Strang splitting,
// with a conservation ledger, blowup detection and spacetime norms.

#include <optional>
#include <string>
#include <vector>

#include "rnl/field.hpp"

namespace rnl {

/// One second-order step: half nonlinear phase, free flow, half phase.  The
/// step is time-reversible, so dt may be negative.
/// Throws NonFiniteError (carrying the node index) if the result overflows.
RadialField strang_step(const RadialField& f, double dt);

struct EvolveOptions {
  double dt = 1e-3;
  double T = 1.0;
  double cadence = 0.1;  // ledger and snapshot spacing; a multiple of dt

  bool sponge = false;
  double sponge_strength = 5.0;  // peak damping rate at r = L

  std::vector<double> ledger_radii;  // local mass and exterior energy radii

  double mass_tolerance = 1e-12;
  double energy_tolerance = 1e-8;

  /// A step is retried at dt/2 when |E_after - E_before| exceeds this
  /// fraction of the initial H^1 scale (mass + kinetic).
  double step_energy_tolerance = 1e-5;
  int max_halvings = 12;
  double amplitude_ceiling = 1e3;  // relative to the initial sup

  /// Mass fraction in [0.95 L, L] that marks wall contamination (sponge off only).
  double wall_mass_fraction = 1e-6;
};

struct LedgerRow {
  double t = 0.0;
  double mass = 0.0;
  double energy = 0.0;
  double kinetic = 0.0;
  double quartic = 0.0;
  double sup_amplitude = 0.0;
  double h1_norm = 0.0;
  double sponge_loss = 0.0;  // cumulative mass removed by the sponge
  std::vector<double> local_mass;
  std::vector<double> exterior_energy;
};

struct ConservedLedger {
  std::vector<double> radii;
  std::vector<LedgerRow> rows;
  double mass_tolerance = 1e-12;
  double energy_tolerance = 1e-8;

  /// max_t |M(t) - M(0)| / M(0), sponge losses added back.
  double mass_drift() const;
  /// max_t |E(t) - E(0)| / |E(0)| (kinetic(0) replaces a vanishing E(0)).
  double energy_drift() const;
  bool mass_flagged() const { return mass_drift() > mass_tolerance; }
  bool energy_flagged() const { return energy_drift() > energy_tolerance; }
  /// Running supremum of the H^1 norm.
  double h1_sup() const;
};

enum class RunStatus { completed, blowup, wall_contaminated };

std::string to_string(RunStatus s);

struct Snapshot {
  double t;
  RadialField u;
};

struct Trajectory {
  std::vector<Snapshot> snapshots;
  ConservedLedger ledger;
  RunStatus status = RunStatus::completed;
  double status_time = 0.0;  // t* for blowup, detection time for wall contamination
  std::string status_reason;
  double final_dt = 0.0;
  int halvings = 0;
  long steps = 0;

  const RadialGrid& grid() const { return snapshots.front().u.grid(); }
  /// Snapshot whose time is within 1e-9 of t; throws InvalidArgument otherwise.
  const Snapshot& at(double t) const;
  std::size_t index_of(double t) const;
};

/// Integrate to T.  Stops early on blowup or wall contamination; the status
/// records which.
Trajectory evolve(const RadialField& f0, const EvolveOptions& options);
Trajectory evolve(const RadialField& f0, double dt, double T, double cadence);

/// Row of a ledger for a single state.
LedgerRow ledger_row(const RadialField& u, double t, const std::vector<double>& radii);

/// (int_T0^T1 ||u(t)||_{L^p}^q dt)^{1/q} by trapezoid over the snapshots in
/// the window.  p in {2,3,4,6,inf}, q in {1,2,4,inf}.  Needs at least 8
/// snapshots in the window.
double spacetime_norm(const Trajectory& traj, double q, double p, double T0, double T1);

std::optional<double> detect_blowup(const Trajectory& traj);

/// Build a trajectory from externally supplied snapshots (e.g. an exact
/// rotating profile).  Ledger rows are computed for every snapshot.
Trajectory trajectory_from_snapshots(std::vector<Snapshot> snaps, const std::vector<double>& radii = {});

}  // namespace rnl
