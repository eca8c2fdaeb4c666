#pragma once

// Sine-basis transforms, Littlewood-Paley projections, Sobolev norms and the
// conserved functionals of a radial field.  All functions are pure.

#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "rnl/field.hpp"

namespace rnl {

inline constexpr double kInfiniteScale = std::numeric_limits<double>::infinity();

SpectralField to_spectral(const RadialField& f);
RadialField from_spectral(const SpectralField& s);

/// Multiply every sine coefficient by m(rho_k).
RadialField apply_multiplier(const RadialField& f, const std::function<cplx(double)>& m);
SpectralField apply_multiplier(const SpectralField& s, const std::function<cplx(double)>& m);

/// Dyadic frequency bands m_j(rho) = psi(rho / 2^{j+1}) - psi(rho / 2^j).
struct LittlewoodPaleyBank {
  int j_min;
  int j_max;

  /// Bands covering the grid: the lowest band reaches below rho_1 and the
  /// highest satisfies 2^{j_max+1} <= rho_max.
  static LittlewoodPaleyBank for_grid(const RadialGrid& grid);

  static double band(int j, double rho) noexcept;
  /// psi(rho / 2^j): everything below band j.
  static double below(int j, double rho) noexcept;
};

/// Largest j whose band the grid represents (2^{j+1} <= rho_max).
int max_band(const RadialGrid& grid);

/// P_j f.  Throws BandError when 2^{j+1} exceeds the grid's largest frequency.
RadialField lp_project(const RadialField& f, int j);

/// sum_{j' < j} P_j' f, i.e. the multiplier psi(rho / 2^j).
RadialField low_pass(const RadialField& f, int j);

/// (sum_k (|xi_k|^2 + R^-2)^alpha |f^(xi_k)|^2)^{1/2} with |xi| = 2 pi rho.
/// R_scale = kInfiniteScale gives the homogeneous norm.
double sobolev_norm(const RadialField& f, double alpha, double R_scale = kInfiniteScale);

double mass(const RadialField& f);

struct EnergyParts {
  double kinetic;  // int |grad u|^2 dx
  double quartic;  // int |u|^4 dx
  double energy() const noexcept { return 0.5 * kinetic - 0.25 * quartic; }
};

EnergyParts energy_parts(const RadialField& f);
double energy(const RadialField& f);

/// max_k r_k |u(r_k)|.
double radial_sup(const RadialField& f);

/// int|u|^4 / ((int|grad u|^2)^{3/2} (int|u|^2)^{1/2}).  Throws on the zero field.
double gn_ratio(const RadialField& f);

/// du/dr on the interior nodes.
RadialField radial_derivative(const RadialField& f);
/// u(0), recovered as dv/dr at the origin.
cplx value_at_origin(const RadialField& f);
RadialField laplacian(const RadialField& f);

/// u at an arbitrary radius by evaluating the sine series (0 beyond L).
cplx evaluate(const SpectralField& s, double r);

/// max |u| including the origin.
double sup_norm(const RadialField& f);
/// (int |u|^p dx)^{1/p}; p = infinity gives sup_norm.
double lp_norm(const RadialField& f, double p);

/// int f conj(g) dx.
cplx inner_product(const RadialField& f, const RadialField& g);

/// 4 pi int density(r) r^2 dr over [0, L].
double radial_integral(const RadialGrid& grid, std::span<const double> density);
/// Same over |x| > R, with high-order treatment of the partial cell at R.
double exterior_integral(const RadialGrid& grid, std::span<const double> density, double R);
/// Same over |x| < R.
double ball_integral(const RadialGrid& grid, std::span<const double> density, double R);

std::vector<double> modulus_squared(const RadialField& f);

}  // namespace rnl
