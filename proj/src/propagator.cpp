#include "rnl/propagator.hpp"

#include <boost/math/special_functions/legendre.hpp>

#include <algorithm>
#include <cmath>

#include "rnl/errors.hpp"
#include "rnl/parallel.hpp"
#include "rnl/spectral.hpp"

namespace rnl {

namespace {

constexpr std::size_t kAngularNodes = 512;
constexpr std::size_t kRadialNodes = 4096;

struct GaussRule {
  std::vector<double> x, w;
};

const GaussRule& angular_rule() {
  static const GaussRule rule = [] {
    GaussRule g;
    const auto zeros = boost::math::legendre_p_zeros<double>(static_cast<int>(kAngularNodes));
    for (double z : zeros) {
      const double dp = boost::math::legendre_p_prime<double>(static_cast<int>(kAngularNodes), z);
      const double w = 2.0 / ((1.0 - z * z) * dp * dp);
      g.x.push_back(z);
      g.w.push_back(w);
      if (z != 0.0) {
        g.x.push_back(-z);
        g.w.push_back(w);
      }
    }
    return g;
  }();
  return rule;
}

void check_times(const std::vector<double>& times) {
  if (times.size() < 2) throw InvalidArgument("dispersive_fit: need at least two times");
  const auto [lo, hi] = std::minmax_element(times.begin(), times.end());
  if (*lo < 1.0) throw InvalidArgument("dispersive_fit: times must be >= 1");
  if (*hi < 10.0 * *lo) throw InvalidArgument("dispersive_fit: times must span a decade");
}

}  // namespace

RadialField propagate_free(const RadialField& f, double t) {
  if (t == 0.0) return f;
  const auto& g = f.grid();
  return apply_multiplier(f, [t, &g](double rho) {
    const double k = 2.0 * kPi * rho;
    return std::polar(1.0, -k * k * t);
  });
}

double wall_fraction(const RadialField& f) {
  const auto& g = f.grid();
  const auto ur = radial_derivative(f);
  std::vector<double> dens(f.size());
  for (std::size_t i = 0; i < dens.size(); ++i) dens[i] = std::norm(f[i]) + std::norm(ur[i]);
  const double total = radial_integral(g, dens);
  if (total == 0.0) return 0.0;
  double edge = 0.0;
  for (std::size_t i = dens.size() - 2; i < dens.size(); ++i) {
    const double r = g.r(i);
    edge += dens[i] * r * r;
  }
  return 4.0 * kPi * g.dr() * edge / total;
}

double h1_scale(const RadialField& f) { return mass(f) + energy_parts(f).kinetic; }

bool touches_wall(const RadialField& u, double reference_scale) {
  const double s = h1_scale(u);
  return s > 0.0 && wall_fraction(u) * s > kWallTolerance * reference_scale;
}

DispersiveFit dispersive_fit(const RadialField& f, const std::vector<double>& times) {
  check_times(times);
  DispersiveFit fit;
  fit.times = times;
  fit.sup_values.resize(times.size());
  std::vector<double> wall(times.size());
  parallel_for(times.size(), [&](std::size_t i) {
    const auto u = propagate_free(f, times[i]);
    fit.sup_values[i] = sup_norm(u);
    wall[i] = wall_fraction(u);
  });
  for (double w : wall) {
    if (w > kWallTolerance) fit.reliable = false;
  }
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  const double m = static_cast<double>(times.size());
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double x = std::log(times[i]);
    const double y = std::log(fit.sup_values[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  fit.exponent = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  return fit;
}

cplx kernel_oracle(const RadialField& f, double t, double r) {
  if (t == 0.0) throw InvalidArgument("kernel_oracle: kernel is singular at t = 0");
  const auto& g = f.grid();
  // Support: last node carrying non-negligible amplitude.
  double peak = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) peak = std::max(peak, std::abs(f[i]));
  if (peak == 0.0) return 0.0;
  std::size_t last = 0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (std::abs(f[i]) > 1e-15 * peak) last = i;
  }
  const double extent = std::min(g.L(), g.r(last) + 4.0 * g.dr());

  const auto spec = to_spectral(f);
  const auto& rule = angular_rule();
  const double h = extent / static_cast<double>(kRadialNodes);
  const double inv4t = 1.0 / (4.0 * t);

  cplx radial = 0.0;
  for (std::size_t q = 1; q <= kRadialNodes; ++q) {
    const double s = static_cast<double>(q) * h;
    const cplx fs = evaluate(spec, s);
    if (fs == 0.0) continue;
    cplx ang = 0.0;
    for (std::size_t a = 0; a < rule.x.size(); ++a) {
      ang += rule.w[a] * std::polar(1.0, (r * r + s * s - 2.0 * r * s * rule.x[a]) * inv4t);
    }
    const double wq = q == kRadialNodes ? 0.5 : 1.0;
    radial += wq * s * s * fs * ang;
  }
  radial *= 2.0 * kPi * h;
  // (4 pi i t)^{-3/2} on the branch continuous from t -> 0+.
  const double sgn = t > 0.0 ? 1.0 : -1.0;
  const cplx prefactor = std::pow(4.0 * kPi * std::abs(t), -1.5) * std::polar(1.0, -0.75 * kPi * sgn);
  return prefactor * radial;
}

LocalDecaySeries local_decay_probe(const RadialField& f, double eps, const std::vector<double>& times) {
  LocalDecaySeries out;
  out.times = times;
  out.weighted_energy.resize(times.size());
  out.l4_power.resize(times.size());
  std::vector<double> wall(times.size());
  const auto& g = f.grid();
  parallel_for(times.size(), [&](std::size_t i) {
    const auto u = propagate_free(f, times[i]);
    const auto ur = radial_derivative(u);
    std::vector<double> dens(u.size()), quart(u.size());
    for (std::size_t k = 0; k < dens.size(); ++k) {
      const double a = std::norm(u[k]);
      dens[k] = std::pow(bracket(g.r(k)), -eps) * (a + std::norm(ur[k]));
      quart[k] = a * a;
    }
    out.weighted_energy[i] = radial_integral(g, dens);
    out.l4_power[i] = radial_integral(g, quart);
    wall[i] = wall_fraction(u);
  });
  for (double w : wall) {
    if (w > kWallTolerance) out.reliable = false;
  }
  return out;
}

}  // namespace rnl
