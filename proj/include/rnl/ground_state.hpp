#pragma once

// Radial solutions of Q'' + (2/r) Q' = omega Q - Q^3 by shooting on Q(0).

#include <string>

#include "rnl/field.hpp"

namespace rnl {

enum class ShootKind { decays, crosses_zero, diverges };

std::string to_string(ShootKind k);

struct ShootResult {
  ShootKind kind;
  double r;  // radius of the deciding event
};

struct ShootOptions {
  double max_step = 2.5e-4;  // RK4 step ceiling
  double r_max = 0.0;      // 0: 40 / sqrt(omega)
  double decay_floor = 1e-8;  // relative to q0
};

/// Integrate from Q(0) = q0, Q'(0) = 0 and classify by the first event:
/// sign change (crosses_zero), |Q| > 2 q0 or a turn away from zero without a
/// crossing (diverges), or reaching r_max (decays if |Q| is below the floor,
/// diverges otherwise).
ShootResult shoot(double omega, double q0, const ShootOptions& opt = {});

/// Sign changes before the trajectory turns away from zero for good.
int count_nodes(double omega, double q0, const ShootOptions& opt = {});

struct GroundStateProfile {
  double omega = 0.0;
  RadialField Q;
  double shoot_value = 0.0;  // Q(0)
  int node_count = 0;
  double mass = 0.0;
  double kinetic = 0.0;
  double quartic = 0.0;
  double energy = 0.0;
  double pohozaev_residual = 0.0;  // |4K - 3P| / (4K)
  double ode_residual = 0.0;       // max |Q'' + 2Q'/r - omega Q + Q^3| on the grid
  double tail_radius = 0.0;        // beyond this the profile is the fitted exponential tail
};

/// Positive, decreasing solution on the given grid.  Bisection stops when the
/// q0 bracket is narrower than tol (absolute).  Throws NumericalError if no
/// bracket exists in [1e-3, 1e3].
GroundStateProfile solve_ground_state(const RadialGrid& grid, double omega, double tol = 1e-13,
                                      const ShootOptions& opt = {});

/// Solution with exactly `nodes` sign changes.  nodes = 0 delegates to
/// solve_ground_state.
GroundStateProfile solve_excited(const RadialGrid& grid, double omega, int nodes, double tol = 1e-13,
                                 const ShootOptions& opt = {});

/// Q_new(r) = s Q(s r) with s = sqrt(omega_new / omega), resampled spectrally.
GroundStateProfile rescale(const GroundStateProfile& profile, double omega_new);

/// Fill in mass, energy, Pohozaev and ODE residuals from the sampled profile.
void measure_profile(GroundStateProfile& p);

}  // namespace rnl
