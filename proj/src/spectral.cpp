#include "rnl/spectral.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "rnl/errors.hpp"
#include "rnl/sine_transform.hpp"

namespace rnl {

namespace {

std::vector<cplx> times_r(const RadialField& f) {
  const auto& g = f.grid();
  std::vector<cplx> v(f.values().begin(), f.values().end());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] *= g.r(i);
  return v;
}

// dv/dr on nodes 0..n-1 for the field's v = r u.
std::vector<cplx> v_derivative(const RadialField& f) {
  const auto& g = f.grid();
  const auto& tr = SineTransform::get(g.n());
  std::vector<cplx> b(g.size());
  tr.forward(times_r(f), b);
  std::vector<cplx> dv(g.n());
  tr.derivative(b, g.L(), dv);
  return dv;
}

// Extended node values G(j) = 4 pi r_j^2 density_j for any integer j,
// reflecting evenly about r = 0 and r = L.
struct NodeDensity {
  const RadialGrid& grid;
  std::span<const double> density;

  double operator()(long j) const {
    const long n = static_cast<long>(grid.n());
    if (j < 0) j = -j;
    if (j > n) j = 2 * n - j;
    if (j <= 0 || j >= n) return 0.0;
    const double r = static_cast<double>(j) * grid.dr();
    return 4.0 * kPi * r * r * density[static_cast<std::size_t>(j - 1)];
  }
};

}  // namespace

SpectralField to_spectral(const RadialField& f) {
  const auto& g = f.grid();
  std::vector<cplx> b(g.size());
  SineTransform::get(g.n()).forward(times_r(f), b);
  return SpectralField(g, std::move(b));
}

RadialField from_spectral(const SpectralField& s) {
  const auto& g = s.grid();
  std::vector<cplx> v(g.size());
  SineTransform::get(g.n()).inverse(s.coefficients(), v);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] /= g.r(i);
  return RadialField(g, std::move(v));
}

SpectralField apply_multiplier(const SpectralField& s, const std::function<cplx(double)>& m) {
  const auto& g = s.grid();
  std::vector<cplx> b(s.coefficients().begin(), s.coefficients().end());
  for (std::size_t i = 0; i < b.size(); ++i) b[i] *= m(g.rho(i));
  return SpectralField(g, std::move(b));
}

RadialField apply_multiplier(const RadialField& f, const std::function<cplx(double)>& m) {
  return from_spectral(apply_multiplier(to_spectral(f), m));
}

double LittlewoodPaleyBank::band(int j, double rho) noexcept {
  return cutoff_profile(rho / std::ldexp(1.0, j + 1)) - cutoff_profile(rho / std::ldexp(1.0, j));
}

double LittlewoodPaleyBank::below(int j, double rho) noexcept {
  return cutoff_profile(rho / std::ldexp(1.0, j));
}

int max_band(const RadialGrid& grid) {
  return static_cast<int>(std::floor(std::log2(grid.rho_max()))) - 1;
}

LittlewoodPaleyBank LittlewoodPaleyBank::for_grid(const RadialGrid& grid) {
  // 2^{j_min+1} <= rho_1, so below(j_min) vanishes on every grid mode.
  const int j_min = static_cast<int>(std::floor(std::log2(grid.rho(0)))) - 1;
  return {j_min, max_band(grid)};
}

RadialField lp_project(const RadialField& f, int j) {
  const int jmax = max_band(f.grid());
  if (j > jmax) {
    throw BandError("lp_project: band " + std::to_string(j) +
                        " exceeds the grid Nyquist; max representable band is " +
                        std::to_string(jmax),
                    jmax);
  }
  return apply_multiplier(f, [j](double rho) { return cplx(LittlewoodPaleyBank::band(j, rho)); });
}

RadialField low_pass(const RadialField& f, int j) {
  return apply_multiplier(f, [j](double rho) { return cplx(LittlewoodPaleyBank::below(j, rho)); });
}

double sobolev_norm(const RadialField& f, double alpha, double R_scale) {
  if (!(R_scale > 0.0)) throw InvalidArgument("sobolev_norm: R_scale must be positive");
  const auto s = to_spectral(f);
  const auto& g = f.grid();
  const double shift = std::isinf(R_scale) ? 0.0 : 1.0 / (R_scale * R_scale);
  double acc = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double k = g.wavenumber(i);
    acc += std::pow(k * k + shift, alpha) * std::norm(s[i]);
  }
  // mass = 4 pi int |v|^2 dr = 2 pi L sum |b_k|^2
  return std::sqrt(2.0 * kPi * g.L() * acc);
}

std::vector<double> modulus_squared(const RadialField& f) {
  std::vector<double> out(f.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::norm(f[i]);
  return out;
}

double radial_integral(const RadialGrid& grid, std::span<const double> density) {
  double acc = 0.0;
  for (std::size_t i = 0; i < density.size(); ++i) {
    const double r = grid.r(i);
    acc += density[i] * r * r;
  }
  return 4.0 * kPi * grid.dr() * acc;
}

double exterior_integral(const RadialGrid& grid, std::span<const double> density, double R) {
  if (R <= 0.0) return radial_integral(grid, density);
  if (R >= grid.L()) return 0.0;
  const NodeDensity G{grid, density};
  const double h = grid.dr();
  const long n = static_cast<long>(grid.n());
  long m = static_cast<long>(std::ceil(R / h));
  if (static_cast<double>(m - 1) * h >= R) --m;  // guard against round-up at a node

  // Trapezoid on [r_m, L] with Euler-Maclaurin corrections at r_m.
  double tail = 0.5 * G(m);
  for (long j = m + 1; j < n; ++j) tail += G(j);
  tail *= h;
  const double d1 = (-G(m + 2) + 8.0 * G(m + 1) - 8.0 * G(m - 1) + G(m - 2)) / (12.0 * h);
  const double d3 = (G(m + 2) - 2.0 * G(m + 1) + 2.0 * G(m - 1) - G(m - 2)) / (2.0 * h * h * h);
  tail += h * h / 12.0 * d1 - h * h * h * h / 720.0 * d3;

  // Partial cell [R, r_m]: degree-5 Lagrange interpolant, 3-point Gauss.
  const double rm = static_cast<double>(m) * h;
  double head = 0.0;
  if (rm > R) {
    static constexpr std::array<double, 3> xs{-0.7745966692414834, 0.0, 0.7745966692414834};
    static constexpr std::array<double, 3> ws{5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
    const double mid = 0.5 * (R + rm);
    const double half = 0.5 * (rm - R);
    for (std::size_t q = 0; q < 3; ++q) {
      const double x = mid + half * xs[q];
      double val = 0.0;
      for (long a = m - 3; a <= m + 2; ++a) {
        double basis = 1.0;
        for (long b = m - 3; b <= m + 2; ++b) {
          if (b != a) basis *= (x - static_cast<double>(b) * h) / (static_cast<double>(a - b) * h);
        }
        val += basis * G(a);
      }
      head += ws[q] * val * half;
    }
  }
  return head + tail;
}

double ball_integral(const RadialGrid& grid, std::span<const double> density, double R) {
  return radial_integral(grid, density) - exterior_integral(grid, density, R);
}

double mass(const RadialField& f) {
  return radial_integral(f.grid(), modulus_squared(f));
}

RadialField radial_derivative(const RadialField& f) {
  const auto& g = f.grid();
  const auto dv = v_derivative(f);
  std::vector<cplx> ur(g.size());
  for (std::size_t i = 0; i < ur.size(); ++i) ur[i] = (dv[i + 1] - f[i]) / g.r(i);
  return RadialField(g, std::move(ur));
}

cplx value_at_origin(const RadialField& f) { return v_derivative(f)[0]; }

RadialField laplacian(const RadialField& f) {
  const auto& g = f.grid();
  return apply_multiplier(f, [&g](double rho) {
    const double k = 2.0 * kPi * rho;
    return cplx(-k * k);
  });
}

EnergyParts energy_parts(const RadialField& f) {
  const double kin = sobolev_norm(f, 1.0);
  std::vector<double> quart(f.size());
  for (std::size_t i = 0; i < quart.size(); ++i) {
    const double a = std::norm(f[i]);
    quart[i] = a * a;
  }
  return {kin * kin, radial_integral(f.grid(), quart)};
}

double energy(const RadialField& f) { return energy_parts(f).energy(); }

double radial_sup(const RadialField& f) {
  double best = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) best = std::max(best, f.grid().r(i) * std::abs(f[i]));
  return best;
}

double gn_ratio(const RadialField& f) {
  const auto parts = energy_parts(f);
  const double m = mass(f);
  if (m == 0.0 || parts.kinetic == 0.0) {
    throw InvalidArgument("gn_ratio: undefined for the zero field");
  }
  return parts.quartic / (std::pow(parts.kinetic, 1.5) * std::sqrt(m));
}

cplx evaluate(const SpectralField& s, double r) {
  const auto& g = s.grid();
  if (r >= g.L() || r < 0.0) return 0.0;
  cplx acc = 0.0;
  if (r == 0.0) {
    for (std::size_t i = 0; i < s.size(); ++i) acc += s[i] * g.wavenumber(i);
    return acc;
  }
  for (std::size_t i = 0; i < s.size(); ++i) acc += s[i] * std::sin(g.wavenumber(i) * r);
  return acc / r;
}

double sup_norm(const RadialField& f) {
  double best = std::abs(value_at_origin(f));
  for (std::size_t i = 0; i < f.size(); ++i) best = std::max(best, std::abs(f[i]));
  return best;
}

double lp_norm(const RadialField& f, double p) {
  if (std::isinf(p)) return sup_norm(f);
  if (!(p >= 1.0)) throw InvalidArgument("lp_norm: p must be >= 1");
  std::vector<double> d(f.size());
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = std::pow(std::abs(f[i]), p);
  return std::pow(radial_integral(f.grid(), d), 1.0 / p);
}

cplx inner_product(const RadialField& f, const RadialField& g) {
  if (!(f.grid() == g.grid())) throw InvalidArgument("inner_product: grid mismatch");
  const auto& grid = f.grid();
  cplx acc = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double r = grid.r(i);
    acc += f[i] * std::conj(g[i]) * (r * r);
  }
  return 4.0 * kPi * grid.dr() * acc;
}

}  // namespace rnl
