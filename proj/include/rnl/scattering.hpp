#pragma once

// Radiation / weakly bound decomposition of a computed trajectory:
// u(t) = u_wb(t) + e^{it Laplacian} u_plus.

#include <vector>

#include "rnl/field.hpp"
#include "rnl/integrator.hpp"

namespace rnl {

struct SmallnessSeries {
  std::vector<double> times;
  std::vector<double> ball_mass;   // int_{B(0,R)} |u|^2
  std::vector<double> flux_rate;   // d/dt int eta_R |u|^2 from the mass flux
  double trailing_min = 0.0;       // min of ball_mass over the trailing window
  double trailing_max = 0.0;
  double drift_bound = 0.0;        // 2 ||grad eta_R||_inf sup_t ||u|| ||grad u||
  bool flag = false;               // trailing_min <= eps
};

/// Mass near the origin and its flux-controlled drift.  `window` is the
/// trailing fraction of the snapshots used for the lim-inf / lim-sup proxies.
SmallnessSeries smallness_monitor(const Trajectory& traj, double eps, double R, double window = 0.25);

struct ScatterOptions {
  // u_plus is the Kaiser-weighted mean of e^{-is Laplacian} u(s) over
  // s in [(1 - averaging_fraction) T_last, T_last]; 0 gives the plain pullback.
  // Bound parts rotating at frequencies >= bound_frequency are suppressed.
  double averaging_fraction = 0.5;
  double bound_frequency = 1.0;
  double smallness_eps = 1e-3;
  double smallness_R = 10.0;
  double smallness_window = 0.25;
};

struct ScatterReport {
  RadialField u_plus;
  double T_last = 0.0;
  std::vector<double> sample_times{};
  std::vector<double> cauchy_gaps{};   // ||e^{-T_{i+1} L} u(T_{i+1}) - e^{-T_i L} u(T_i)||_{H^1}
  std::vector<double> wb_h1_norms{};   // ||u_wb(T_i)||_{H^1}
  double u_plus_h1 = 0.0;
  double mass_decoupling_residual = 0.0;    // |M(u+) + M(u_wb(T_last)) - M(u(0))|
  double energy_decoupling_residual = 0.0;  // |K(u+)/2 + E(u_wb(T_last)) - E(u(0))|
  bool smallness_flag = false;
  SmallnessSeries smallness{};

  /// Fraction of consecutive gap pairs that do not increase.
  double gap_trend() const;
};

/// Throws InvalidArgument unless the trajectory completed and every sample
/// time is a snapshot time; NumericalError if the averaging window holds
/// fewer than 8 snapshots.
ScatterReport extract_radiation(const Trajectory& traj, const std::vector<double>& sample_times,
                                const ScatterOptions& options = {});

/// u(t) - e^{it Laplacian} u_plus at a snapshot time.
RadialField weakly_bound(const Trajectory& traj, const RadialField& u_plus, double t);

struct OrthogonalitySeries {
  std::vector<double> times;
  std::vector<cplx> values;  // <u_wb(t), e^{it Laplacian} f>
  bool wall_flag = false;
};

OrthogonalitySeries asymptotic_orthogonality(const Trajectory& traj, const RadialField& u_plus,
                                             const RadialField& test_f, const std::vector<double>& times);

struct ApproxResidual {
  double identity = 0.0;           // int ||F(u) - F(u_wb)||_{H^1} dt
  double finite_difference = 0.0;  // int ||(i d_t + Laplacian) u_wb - F(u_wb)||_{H^1} dt
  std::size_t samples = 0;         // snapshots in the window
};

/// Over the snapshots in [T, T + tau], whose spacing must be at most tau / 16.
/// The identity route evaluates ||F(u) - F(u_wb)|| at the snapshots.  The
/// finite-difference route re-integrates each snapshot interval at
/// final_dt / fd_refinement (no sponge), takes the time derivative of u by
/// fourth-order centred differences and that of the free part exactly.
/// Trajectories built from snapshots (final_dt = 0) are differenced at the
/// snapshot spacing and need two snapshots beyond each end of the window.
ApproxResidual approx_solution_residual(const Trajectory& traj, const RadialField& u_plus, double T, double tau,
                                        int fd_refinement = 4);

/// int_{|x| > R} |grad u|^2 dx.
double exterior_energy(const RadialField& f, double R);

struct BoundStateExtract {
  RadialField u_b;
  double error_h1dot = 0.0;         // ||grad (u_wb - u_b)||
  double wb_h1dot = 0.0;            // ||grad u_wb||
  std::vector<double> annuli{};       // inner radii: 0, 1, 2, 4, ...
  std::vector<double> margin_value{};     // max <x>^{3/2 - delta} |u_b| per annulus
  std::vector<double> margin_gradient{};  // max <x>^{5/2 - delta} |grad u_b| per annulus
};

/// u_b = eta_{R_b} * (bands 2^j <= 2^{j_cut} of u_wb).
BoundStateExtract extract_bound_state(const RadialField& u_wb, double R_b = 16.0, int j_cut = 3, double delta = 0.1);

}  // namespace rnl
