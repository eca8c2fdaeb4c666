#pragma once

// Free Schrodinger evolution e^{it Laplacian} on radial data, together with
// dispersive and local-decay probes and a direct kernel quadrature used to
// cross-check the spectral flow.

#include <vector>

#include "rnl/field.hpp"

namespace rnl {

/// e^{it Laplacian} f: b_k -> b_k exp(-i (pi k / L)^2 t).  Any real t.
RadialField propagate_free(const RadialField& f, double t);

/// Fraction of the H^1 energy density sitting within two cells of the wall.
double wall_fraction(const RadialField& f);

/// Threshold above which wall_fraction marks a result as contaminated.
inline constexpr double kWallTolerance = 1e-8;

/// mass + kinetic energy.
double h1_scale(const RadialField& f);

/// Wall content of u measured against the H^1 scale of the data it came
/// from, so that a small component is not flagged for its own tail.
bool touches_wall(const RadialField& u, double reference_scale);

struct DispersiveFit {
  double exponent = 0.0;  // least-squares slope of log sup|u| against log t
  bool reliable = true;   // false once any evolved state touches the wall
  std::vector<double> times;
  std::vector<double> sup_values;
};

/// Fit of the sup-norm decay rate of the free flow.  times must be >= 1 and
/// span at least a decade.
DispersiveFit dispersive_fit(const RadialField& f, const std::vector<double>& times);

/// Value of e^{it Laplacian} f at radius r by direct quadrature of the kernel
/// (4 pi i t)^{-3/2} exp(i|x-y|^2 / 4t).  Throws for t = 0.
cplx kernel_oracle(const RadialField& f, double t, double r);

struct LocalDecaySeries {
  std::vector<double> times;
  std::vector<double> weighted_energy;  // int <x>^{-eps} (|u|^2 + |grad u|^2) dx
  std::vector<double> l4_power;         // int |u|^4 dx
  bool reliable = true;
};

LocalDecaySeries local_decay_probe(const RadialField& f, double eps, const std::vector<double>& times);

}  // namespace rnl
