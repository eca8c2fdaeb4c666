#include "rnl/virial.hpp"

#include <algorithm>
#include <boost/math/differentiation/autodiff.hpp>
#include <cmath>

#include "rnl/errors.hpp"
#include "rnl/parallel.hpp"
#include "rnl/propagator.hpp"
#include "rnl/scattering.hpp"
#include "rnl/spectral.hpp"

namespace rnl {

namespace {

using boost::math::differentiation::make_fvar;

template <typename X>
X cutoff(const X& s) {
  using std::cos;
  const double v = static_cast<double>(s);
  if (v <= 0.5) return X(1.0);
  if (v >= 1.0) return X(0.0);
  const X c = cos(kPi * (s - 0.5));
  return c * c;
}

template <typename X>
X weight(const X& r, double delta, double R) {
  using std::pow;
  return r * r * pow(1.0 + r * r, -0.5 * delta) * cutoff(r / R);
}

RadialField real_field(const RadialGrid& g, const std::vector<double>& v) {
  std::vector<cplx> out(v.begin(), v.end());
  return RadialField(g, std::move(out));
}

std::vector<double> real_part(const RadialField& f) {
  std::vector<double> out(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) out[i] = f[i].real();
  return out;
}

std::size_t interior_index(const Trajectory& traj, double t, double& h) {
  const std::size_t i = traj.index_of(t);
  const auto& s = traj.snapshots;
  if (i == 0 || i + 1 >= s.size()) {
    throw InvalidArgument("flux residual: t must be an interior snapshot time");
  }
  h = s[i + 1].t - s[i].t;
  if (std::abs((s[i].t - s[i - 1].t) - h) > 1e-9 * h) {
    throw NumericalError("flux residual: neighbouring snapshots are unevenly spaced");
  }
  return i;
}

std::vector<double> momentum_density(const RadialField& u) {
  const auto du = radial_derivative(u);
  std::vector<double> p(u.size());
  for (std::size_t k = 0; k < u.size(); ++k) p[k] = (std::conj(u[k]) * du[k]).imag();
  return p;
}

PohozaevAverage pohozaev_impl(const Trajectory& traj, const RadialField* u_plus, const BoundStateConfig& c,
                              double T, double tau) {
  if (!(tau > 0.0)) throw InvalidArgument("pohozaev_average: tau must be positive");
  const auto& snaps = traj.snapshots;
  constexpr double slack = 1e-9;
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < snaps.size(); ++i) {
    if (snaps[i].t >= T - slack && snaps[i].t <= T + tau + slack) idx.push_back(i);
  }
  if (idx.size() < 8 || snaps.front().t > T + slack || snaps.back().t < T + tau - slack) {
    throw NumericalError("pohozaev_average: window [T, T + tau] is under-sampled");
  }
  std::vector<double> t(idx.size()), val(idx.size()), kin(idx.size());
  parallel_for(idx.size(), [&](std::size_t k) {
    const auto& s = snaps[idx[k]];
    t[k] = s.t;
    const auto wb = u_plus ? s.u - propagate_free(*u_plus, s.t) : s.u;
    const auto b = extract_bound_state(wb, c.R_b, c.j_cut, c.delta);
    const auto parts = energy_parts(b.u_b);
    val[k] = 4.0 * parts.kinetic - 3.0 * parts.quartic;
    kin[k] = 4.0 * parts.kinetic;
  });
  PohozaevAverage out;
  for (std::size_t k = 1; k < t.size(); ++k) {
    const double w = 0.5 * (t[k] - t[k - 1]);
    out.value += w * (val[k] + val[k - 1]);
    out.scale += w * (kin[k] + kin[k - 1]);
  }
  const double span = t.back() - t.front();
  out.value /= span;
  out.scale /= span;
  out.samples = idx.size();
  return out;
}

}  // namespace

VirialWeight make_virial_weight(const RadialGrid& grid, double delta, double R) {
  if (!(delta > 0.0)) throw InvalidArgument("make_virial_weight: delta must be positive");
  if (R == 0.0) R = 0.5 * grid.L();
  if (!(R > 0.0 && R <= grid.L())) throw InvalidArgument("make_virial_weight: R must lie in (0, L]");
  VirialWeight w{grid, delta, R, {}, {}, {}, {}, {}};
  const std::size_t n = grid.size();
  w.a.resize(n);
  w.da.resize(n);
  w.d2a.resize(n);
  w.lap_a.resize(n);
  w.bilap_a.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double r = grid.r(i);
    const auto y = weight(make_fvar<double, 4>(r), delta, R);
    const double d1 = y.derivative(1), d2 = y.derivative(2), d3 = y.derivative(3), d4 = y.derivative(4);
    w.a[i] = y.derivative(0);
    w.da[i] = d1;
    w.d2a[i] = d2;
    w.lap_a[i] = d2 + 2.0 * d1 / r;
    w.bilap_a[i] = d4 + 4.0 * d3 / r;
  }
  return w;
}

double virial_rhs(const RadialField& f) {
  const auto parts = energy_parts(f);
  return 4.0 * parts.kinetic - 3.0 * parts.quartic;
}

VirialLhs virial_lhs(const RadialField& f) {
  const auto& g = f.grid();
  const auto p = momentum_density(f);
  std::vector<double> dens(f.size());
  for (std::size_t k = 0; k < f.size(); ++k) dens[k] = 2.0 * g.r(k) * p[k];
  const double r_last = g.r(f.size() - 1);
  return {radial_integral(g, dens), std::abs(f[f.size() - 1]) * r_last * r_last > kVirialTailTolerance};
}

WeightedVirial weighted_virial(const RadialField& f, const VirialWeight& w) {
  const auto& g = f.grid();
  if (!(g == w.grid)) throw InvalidArgument("weighted_virial: weight built on a different grid");
  const auto du = radial_derivative(f);
  const std::size_t n = f.size();
  std::vector<double> lhs(n), rhs(n), exact(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double r = g.r(k);
    const double m2 = std::norm(f[k]);
    const double g2 = std::norm(du[k]);
    const double damp = std::pow(bracket(r), -w.delta);
    lhs[k] = w.da[k] * (std::conj(f[k]) * du[k]).imag();
    rhs[k] = 4.0 * damp * g2 - 3.0 * damp * m2 * m2;
    exact[k] = 2.0 * w.d2a[k] * g2 - 0.5 * w.bilap_a[k] * m2 - 0.5 * w.lap_a[k] * m2 * m2;
  }
  WeightedVirial out;
  out.lhs = radial_integral(g, lhs);
  out.rhs = ball_integral(g, rhs, w.R);
  out.exact_rhs = radial_integral(g, exact);
  out.error_term = out.exact_rhs - out.rhs;
  const double h1sq = h1_scale(f);
  out.envelope = (w.delta + std::pow(w.R, -w.delta)) * (1.0 + h1sq) * (1.0 + h1sq);
  return out;
}

std::vector<VirialRow> virial_series(const Trajectory& traj) {
  const auto& s = traj.snapshots;
  const std::size_t n = s.size();
  if (n < 3) throw InvalidArgument("virial_series: at least three snapshots are needed");
  std::vector<VirialRow> rows(n);
  parallel_for(n, [&](std::size_t i) {
    const auto l = virial_lhs(s[i].u);
    rows[i].t = s[i].t;
    rows[i].lhs = l.value;
    rows[i].tail_flagged = l.tail_flagged;
    rows[i].rhs = virial_rhs(s[i].u);
  });
  for (std::size_t i = 0; i < n; ++i) {
    if (i == 0) {
      const double h = rows[1].t - rows[0].t;
      rows[i].lhs_rate = (-3.0 * rows[0].lhs + 4.0 * rows[1].lhs - rows[2].lhs) / (2.0 * h);
    } else if (i + 1 == n) {
      const double h = rows[i].t - rows[i - 1].t;
      rows[i].lhs_rate = (3.0 * rows[i].lhs - 4.0 * rows[i - 1].lhs + rows[i - 2].lhs) / (2.0 * h);
    } else {
      rows[i].lhs_rate = (rows[i + 1].lhs - rows[i - 1].lhs) / (rows[i + 1].t - rows[i - 1].t);
    }
    rows[i].residual = rows[i].lhs_rate - rows[i].rhs;
  }
  return rows;
}

PohozaevAverage pohozaev_average(const Trajectory& traj, const BoundStateConfig& config, double T, double tau) {
  return pohozaev_impl(traj, nullptr, config, T, tau);
}

PohozaevAverage pohozaev_average(const Trajectory& traj, const RadialField& u_plus, const BoundStateConfig& config,
                                 double T, double tau) {
  return pohozaev_impl(traj, &u_plus, config, T, tau);
}

FluxResidual mass_flux_residual(const Trajectory& traj, double t) {
  double h = 0.0;
  const std::size_t i = interior_index(traj, t, h);
  const auto& s = traj.snapshots;
  const auto& u = s[i].u;
  const auto lap = laplacian(u);
  FluxResidual out;
  for (std::size_t k = 0; k < u.size(); ++k) {
    const double rate = (std::norm(s[i + 1].u[k]) - std::norm(s[i - 1].u[k])) / (2.0 * h);
    // div Im(grad u conj u) = Im(conj u Laplacian u)
    const double flux = 2.0 * (std::conj(u[k]) * lap[k]).imag();
    out.residual = std::max(out.residual, std::abs(rate + flux));
    out.scale = std::max({out.scale, std::abs(rate), std::abs(flux)});
  }
  return out;
}

FluxResidual momentum_flux_residual(const Trajectory& traj, double t) {
  double h = 0.0;
  const std::size_t i = interior_index(traj, t, h);
  const auto& s = traj.snapshots;
  const auto& u = s[i].u;
  const auto& g = u.grid();
  const std::size_t n = u.size();
  const auto before = momentum_density(s[i - 1].u);
  const auto after = momentum_density(s[i + 1].u);
  const auto du = radial_derivative(u);

  std::vector<double> dens(n), quartic(n), grad2(n);
  for (std::size_t k = 0; k < n; ++k) {
    dens[k] = std::norm(u[k]);
    quartic[k] = dens[k] * dens[k];
    grad2[k] = std::norm(du[k]);
  }
  const auto lap_dens = real_part(radial_derivative(laplacian(real_field(g, dens))));
  const auto d_quartic = real_part(radial_derivative(real_field(g, quartic)));
  const auto d_grad2 = real_part(radial_derivative(real_field(g, grad2)));

  FluxResidual out;
  for (std::size_t k = 0; k < n; ++k) {
    const double r = g.r(k);
    const double rate = (after[k] - before[k]) / (2.0 * h);
    const double pressure = 0.5 * lap_dens[k];
    const double stress = 2.0 * (d_grad2[k] + 2.0 * grad2[k] / r);
    const double nonlinear = 0.5 * d_quartic[k];
    out.residual = std::max(out.residual, std::abs(rate - (pressure - stress + nonlinear)));
    out.scale = std::max({out.scale, std::abs(rate), std::abs(pressure), std::abs(stress), std::abs(nonlinear)});
  }
  return out;
}

}  // namespace rnl
