#pragma once

// Virial functionals, the truncated virial weight and the local
// conservation-law residuals of the mass and momentum fluxes.

#include <vector>

#include "rnl/field.hpp"
#include "rnl/integrator.hpp"

namespace rnl {

/// a(r) = r^2 <r>^{-delta} eta_R(r) and its radial derivatives on the grid's
/// interior nodes.  Derivatives are exact (forward-mode autodiff).
struct VirialWeight {
  RadialGrid grid;
  double delta = 0.1;
  double R = 0.0;
  std::vector<double> a;
  std::vector<double> da;       // a'
  std::vector<double> d2a;      // a''
  std::vector<double> lap_a;    // a'' + 2 a' / r
  std::vector<double> bilap_a;  // a'''' + 4 a''' / r
};

/// R = 0 selects half the grid radius.  Requires delta > 0 and 0 < R <= L.
VirialWeight make_virial_weight(const RadialGrid& grid, double delta = 0.1, double R = 0.0);

/// int 4 |grad u|^2 - 3 |u|^4 dx.
double virial_rhs(const RadialField& f);

/// |u(r_{n-1})| r_{n-1}^2 above this means the virial integrand is not
/// reliably finite on the grid.
inline constexpr double kVirialTailTolerance = 1e-8;

struct VirialLhs {
  double value = 0.0;  // int 2 r Im(u_r conj u) dx
  bool tail_flagged = false;
};

VirialLhs virial_lhs(const RadialField& f);

struct WeightedVirial {
  double lhs = 0.0;        // int a' Im(u_r conj u) dx
  double rhs = 0.0;        // int_{B(0,R)} 4 <x>^-delta |grad u|^2 - 3 <x>^-delta |u|^4 dx
  double exact_rhs = 0.0;  // d lhs / dt: int 2 a'' |u_r|^2 - (1/2) bilap a |u|^2 - (1/2) lap a |u|^4 dx
  double error_term = 0.0;  // exact_rhs - rhs
  double envelope = 0.0;    // (delta + R^-delta) (1 + ||u||_{H^1}^2)^2
};

/// Throws InvalidArgument if the weight was built on a different grid.
WeightedVirial weighted_virial(const RadialField& f, const VirialWeight& w);

struct VirialRow {
  double t = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  double lhs_rate = 0.0;  // d lhs / dt by centred differences (second-order one-sided at the ends)
  double residual = 0.0;  // lhs_rate - rhs
  bool tail_flagged = false;
};

/// Needs at least three snapshots.
std::vector<VirialRow> virial_series(const Trajectory& traj);

struct BoundStateConfig {
  double R_b = 16.0;
  int j_cut = 3;
  double delta = 0.1;
};

struct PohozaevAverage {
  double value = 0.0;  // (1/tau) int_T^{T+tau} int 4 |grad u_b|^2 - 3 |u_b|^4 dx dt
  double scale = 0.0;  // (1/tau) int_T^{T+tau} 4 ||grad u_b||^2 dt
  std::size_t samples = 0;
};

/// u_b from extract_bound_state on each snapshot of u_wb = u - e^{it Laplacian} u_plus
/// (u_wb = u without u_plus).  The trapezoid runs over the snapshots inside
/// [T, T + tau].  NumericalError if the trajectory does not cover the window
/// or fewer than 8 snapshots fall inside it.
PohozaevAverage pohozaev_average(const Trajectory& traj, const BoundStateConfig& config, double T, double tau);
PohozaevAverage pohozaev_average(const Trajectory& traj, const RadialField& u_plus, const BoundStateConfig& config,
                                 double T, double tau);

struct FluxResidual {
  double residual = 0.0;  // grid max of |time derivative - flux side|
  double scale = 0.0;     // grid max of the largest individual term
};

/// |d_t |u|^2 + 2 div Im(grad u conj u)| at snapshot t, centred in time.
/// InvalidArgument at the first or last snapshot; NumericalError when the
/// neighbouring snapshots are unevenly spaced.
FluxResidual mass_flux_residual(const Trajectory& traj, double t);

/// Radial momentum flux:
/// d_t Im(conj u u_r) = (1/2) d_r Lap |u|^2 - 2 r^-2 d_r (r^2 |u_r|^2) + (1/2) d_r |u|^4.
FluxResidual momentum_flux_residual(const Trajectory& traj, double t);

}  // namespace rnl
