#pragma once

// Splitting of exterior radial data into outgoing, incoming and smooth parts
// via half-line frequency integrals of the odd-extension transform, plus the
// free-flow probes of the split.

#include <cstdint>
#include <vector>

#include "rnl/field.hpp"

namespace rnl {

/// g(rho) = int e^{-2 pi i r rho} sgn(r) h(|r|) dr sampled at rho_k = k / (2L),
/// k = -(n-1)..(n-1).
struct LineTransform {
  double d_rho = 0.0;
  std::size_t modes = 0;  // n - 1
  std::vector<cplx> values;

  double rho(long k) const noexcept { return d_rho * static_cast<double>(k); }
  const cplx& at(long k) const noexcept { return values[static_cast<std::size_t>(k + static_cast<long>(modes))]; }
};

LineTransform odd_line_transform(const RadialField& h);

/// int_{+-[0,inf)} g(rho) e^{2 pi i rho r} d rho on the grid nodes (trapezoid).
RadialField half_line_synthesis(const RadialGrid& grid, const LineTransform& g, int sign);

struct WaveSplit {
  RadialField source;
  RadialField f_plus;
  RadialField f_minus;
  RadialField f_smooth;
  double R = 0.0;
  double delta = 0.1;

  std::vector<int> bands;                  // bands routed to f_plus / f_minus
  std::vector<LineTransform> transforms;   // one per entry of `bands`

  double reconstruction_residual = 0.0;    // ||f+ + f- + fs - f|| / ||f||
  double plus_bound = 0.0;                 // ||f+|| / ||f||
  double minus_bound = 0.0;
  double smooth_bound = 0.0;
  double smooth_gradient_bound = 0.0;      // ||grad fs|| / ||f||
};

/// Mass fraction below which a field counts as supported outside a ball.
inline constexpr double kSupportTolerance = 1e-10;

/// R = 0 requires support in B(0,2) and returns (f, 0, 0).  Otherwise R >= 1,
/// f must vanish on B(0,R) and delta lies in (0,1).  The top band absorbs
/// every frequency above it so the split is exact.
WaveSplit split_inout(const RadialField& f, double R, double delta = 0.1);

struct EscapeMetric {
  double plus_value = 0.0;         // f+ forward in time
  double minus_value = 0.0;        // f- backward in time
  double plus_unfavorable = 0.0;   // f+ backward
  double minus_unfavorable = 0.0;  // f- forward
  bool wall_flag = false;

  double plus_ratio() const noexcept { return plus_unfavorable > 0.0 ? plus_value / plus_unfavorable : 0.0; }
  double minus_ratio() const noexcept { return minus_unfavorable > 0.0 ? minus_value / minus_unfavorable : 0.0; }
};

/// Time integrals of ||grad e^{it Laplacian} f_pm||_{L^2(B(0,R/8))} over
/// [0, horizon] or [-horizon, 0], trapezoid with `samples` intervals.
EscapeMetric outgoing_escape_metric(const WaveSplit& split, double horizon, int samples = 128);

struct PairingSeries {
  std::vector<double> times;
  std::vector<cplx> values;
  bool wall_flag = false;
};

/// <e^{it Laplacian} u0, f_minus> for each t.
PairingSeries incoming_pairing(const RadialField& u0, const WaveSplit& split, const std::vector<double>& times);

struct SmoothingMetric {
  double plus_value = 0.0;     // int_0^H ||<x>^-2 e^{it Laplacian} f+||_{H^-alpha_<R>} dt
  double minus_forward = 0.0;  // the same for f- (unfavorable direction)
  double reference = 0.0;      // <R>^{-1+delta} ||f||_{H^{-alpha-1+delta}_<R>}
  bool wall_flag = false;

  double ratio() const noexcept { return reference > 0.0 ? plus_value / reference : 0.0; }
};

SmoothingMetric local_smoothing_metric(const WaveSplit& split, double alpha, double horizon, int samples = 128);

/// Seeded random exterior profile at scale R: four complex shells centred in
/// [1.6R, 2.6R] with widths in [0.05R, 0.12R], random phases and radial
/// frequencies in [0, 16/R].  The grid must extend past 3R.
RadialField random_exterior_profile(const RadialGrid& grid, double R, std::uint64_t seed);

/// amplitude * exp(-(r - center)^2 / width^2) * exp(2 pi i rho0 r) / r.
RadialField ring_profile(const RadialGrid& grid, double center, double width, double rho0, double amplitude = 1.0);

}  // namespace rnl
