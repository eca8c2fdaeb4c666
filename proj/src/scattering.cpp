#include "rnl/scattering.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "rnl/errors.hpp"
#include "rnl/parallel.hpp"
#include "rnl/propagator.hpp"
#include "rnl/spectral.hpp"

namespace rnl {

namespace {

double h1_norm(const RadialField& f) { return std::sqrt(h1_scale(f)); }

RadialField nonlinearity(const RadialField& u) {
  std::vector<cplx> out(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) out[i] = -std::norm(u[i]) * u[i];
  return RadialField(u.grid(), std::move(out));
}

double trapezoid(const std::vector<double>& t, const std::vector<double>& y) {
  double acc = 0.0;
  for (std::size_t i = 1; i < t.size(); ++i) acc += 0.5 * (t[i] - t[i - 1]) * (y[i] + y[i - 1]);
  return acc;
}

// Kaiser-weighted mean of e^{-is Laplacian} u(s) over [(1 - fraction) T, T].
// Radiation pulls back to a converging limit; a bound part e^{i omega s} Q
// oscillates at frequencies >= omega and is suppressed by the window, whose
// main lobe ends at `floor`.
RadialField average_pullback(const Trajectory& traj, double T, double fraction, double floor) {
  const auto& snaps = traj.snapshots;
  const std::size_t end = traj.index_of(T);
  if (fraction == 0.0) return propagate_free(snaps[end].u, -snaps[end].t);
  const double start = (1.0 - fraction) * T;
  std::size_t begin = end;
  while (begin > 0 && snaps[begin - 1].t >= start - 1e-9) --begin;
  if (end - begin < 8) throw NumericalError("extract_radiation: fewer than 8 snapshots in the averaging window");
  const std::size_t m = end - begin + 1;
  const double span = snaps[end].t - snaps[begin].t;
  const double beta = std::min(0.5 * floor * span, 50.0);
  std::vector<double> w(m);
  double total = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    const std::size_t i = begin + k;
    const double x = 2.0 * (snaps[i].t - snaps[begin].t) / span - 1.0;
    const double lo = k > 0 ? snaps[i - 1].t : snaps[i].t;
    const double hi = k + 1 < m ? snaps[i + 1].t : snaps[i].t;
    w[k] = std::cyl_bessel_i(0.0, beta * std::sqrt(std::max(0.0, 1.0 - x * x))) * 0.5 * (hi - lo);
    total += w[k];
  }
  std::vector<RadialField> pulled(m, RadialField::zeros(traj.grid()));
  parallel_for(m, [&](std::size_t k) {
    pulled[k] = propagate_free(snaps[begin + k].u, -snaps[begin + k].t) * cplx(w[k] / total);
  });
  RadialField acc = RadialField::zeros(traj.grid());
  for (const auto& p : pulled) acc += p;
  return acc;
}

}  // namespace

double ScatterReport::gap_trend() const {
  if (cauchy_gaps.size() < 2) return 1.0;
  std::size_t ok = 0;
  for (std::size_t i = 1; i < cauchy_gaps.size(); ++i) ok += cauchy_gaps[i] <= cauchy_gaps[i - 1];
  return static_cast<double>(ok) / static_cast<double>(cauchy_gaps.size() - 1);
}

SmallnessSeries smallness_monitor(const Trajectory& traj, double eps, double R, double window) {
  if (!(R > 0.0)) throw InvalidArgument("smallness_monitor: R must be positive");
  if (!(window > 0.0 && window <= 1.0)) throw InvalidArgument("smallness_monitor: window must lie in (0, 1]");
  const auto& snaps = traj.snapshots;
  const auto& grid = traj.grid();
  const CutoffSpec eta(R);
  SmallnessSeries out;
  const std::size_t n = snaps.size();
  out.times.resize(n);
  out.ball_mass.resize(n);
  out.flux_rate.resize(n);
  std::vector<double> h1_product(n);
  parallel_for(n, [&](std::size_t i) {
    const auto& u = snaps[i].u;
    out.times[i] = snaps[i].t;
    out.ball_mass[i] = ball_integral(grid, modulus_squared(u), R);
    const auto du = radial_derivative(u);
    std::vector<double> dens(u.size());
    for (std::size_t k = 0; k < u.size(); ++k) {
      dens[k] = 2.0 * eta.derivative(grid.r(k)) * (std::conj(u[k]) * du[k]).imag();
    }
    out.flux_rate[i] = radial_integral(grid, dens);
    h1_product[i] = std::sqrt(mass(u) * energy_parts(u).kinetic);
  });
  double grad_eta = 0.0;
  for (std::size_t k = 0; k < grid.size(); ++k) grad_eta = std::max(grad_eta, std::abs(eta.derivative(grid.r(k))));
  out.drift_bound = 2.0 * grad_eta * *std::max_element(h1_product.begin(), h1_product.end());

  const std::size_t tail = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(window * static_cast<double>(n))));
  out.trailing_min = *std::min_element(out.ball_mass.end() - static_cast<long>(tail), out.ball_mass.end());
  out.trailing_max = *std::max_element(out.ball_mass.end() - static_cast<long>(tail), out.ball_mass.end());
  out.flag = out.trailing_min <= eps;
  return out;
}

RadialField weakly_bound(const Trajectory& traj, const RadialField& u_plus, double t) {
  const auto& u = traj.at(t).u;
  return u - propagate_free(u_plus, traj.at(t).t);
}

ScatterReport extract_radiation(const Trajectory& traj, const std::vector<double>& sample_times,
                                const ScatterOptions& options) {
  if (traj.status != RunStatus::completed) {
    throw InvalidArgument("extract_radiation: trajectory did not complete (" + to_string(traj.status) + ")");
  }
  if (sample_times.empty()) throw InvalidArgument("extract_radiation: no sample times");
  if (!std::is_sorted(sample_times.begin(), sample_times.end())) {
    throw InvalidArgument("extract_radiation: sample times must be increasing");
  }
  if (!(options.averaging_fraction >= 0.0 && options.averaging_fraction < 1.0)) {
    throw InvalidArgument("extract_radiation: averaging_fraction must lie in [0, 1)");
  }
  if (!(options.bound_frequency > 0.0)) throw InvalidArgument("extract_radiation: bound_frequency must be positive");
  std::vector<const Snapshot*> snaps;
  for (double t : sample_times) snaps.push_back(&traj.at(t));

  const Snapshot& last = *snaps.back();
  ScatterReport rep{average_pullback(traj, last.t, options.averaging_fraction, options.bound_frequency)};
  rep.T_last = last.t;
  for (const auto* s : snaps) rep.sample_times.push_back(s->t);

  const std::size_t n = snaps.size();
  std::vector<RadialField> pulled(n, RadialField::zeros(traj.grid()));
  rep.wb_h1_norms.assign(n, 0.0);
  parallel_for(n, [&](std::size_t i) {
    pulled[i] = propagate_free(snaps[i]->u, -snaps[i]->t);
    rep.wb_h1_norms[i] = h1_norm(snaps[i]->u - propagate_free(rep.u_plus, snaps[i]->t));
  });
  for (std::size_t i = 1; i < n; ++i) rep.cauchy_gaps.push_back(h1_norm(pulled[i] - pulled[i - 1]));

  const auto& u0 = traj.snapshots.front().u;
  const auto wb_last = last.u - propagate_free(rep.u_plus, last.t);
  const auto plus_parts = energy_parts(rep.u_plus);
  rep.u_plus_h1 = std::sqrt(mass(rep.u_plus) + plus_parts.kinetic);
  rep.mass_decoupling_residual = std::abs(mass(rep.u_plus) + mass(wb_last) - mass(u0));
  rep.energy_decoupling_residual = std::abs(0.5 * plus_parts.kinetic + energy(wb_last) - energy(u0));
  rep.smallness = smallness_monitor(traj, options.smallness_eps, options.smallness_R, options.smallness_window);
  rep.smallness_flag = rep.smallness.flag;
  return rep;
}

OrthogonalitySeries asymptotic_orthogonality(const Trajectory& traj, const RadialField& u_plus,
                                             const RadialField& test_f, const std::vector<double>& times) {
  if (!std::isfinite(sobolev_norm(test_f, -1.0))) {
    throw InvalidArgument("asymptotic_orthogonality: test function must lie in H^-1");
  }
  OrthogonalitySeries out;
  out.times = times;
  out.values.assign(times.size(), cplx(0.0));
  std::vector<char> wall(times.size(), 0);
  const double ref = h1_scale(test_f);
  parallel_for(times.size(), [&](std::size_t i) {
    const auto free = propagate_free(test_f, times[i]);
    wall[i] = touches_wall(free, ref);
    out.values[i] = inner_product(weakly_bound(traj, u_plus, times[i]), free);
  });
  for (char w : wall) out.wall_flag = out.wall_flag || w;
  return out;
}

ApproxResidual approx_solution_residual(const Trajectory& traj, const RadialField& u_plus, double T, double tau,
                                        int fd_refinement) {
  if (fd_refinement < 1) throw InvalidArgument("approx_solution_residual: fd_refinement must be at least 1");
  if (!(tau > 0.0)) throw InvalidArgument("approx_solution_residual: tau must be positive");
  const auto& snaps = traj.snapshots;
  constexpr double slack = 1e-9;
  std::size_t first = snaps.size(), last = 0;
  for (std::size_t i = 0; i < snaps.size(); ++i) {
    if (snaps[i].t >= T - slack && snaps[i].t <= T + tau + slack) {
      first = std::min(first, i);
      last = std::max(last, i);
    }
  }
  if (first >= snaps.size() || snaps[first].t > T + slack || snaps[last].t < T + tau - slack) {
    throw NumericalError("approx_solution_residual: window is not covered by snapshots");
  }
  for (std::size_t i = first + 1; i <= last; ++i) {
    if (snaps[i].t - snaps[i - 1].t > tau / 16.0 + slack) {
      throw NumericalError("approx_solution_residual: snapshot spacing exceeds tau/16");
    }
  }

  const std::size_t count = last - first + 1;
  std::vector<double> times(count), id(count);
  parallel_for(count, [&](std::size_t k) {
    const auto& s = snaps[first + k];
    times[k] = s.t;
    id[k] = h1_norm(nonlinearity(s.u) - nonlinearity(s.u - propagate_free(u_plus, s.t)));
  });

  // The free part solves (i d_t + Laplacian) v = 0 exactly, so only the
  // computed solution is differenced: each snapshot interval is re-integrated
  // from its left snapshot at a fraction of the trajectory's step, with two
  // reversible steps past either end so the five-point stencil stays centred.
  const double base = traj.final_dt > 0.0 ? traj.final_dt / static_cast<double>(fd_refinement) : 0.0;
  auto substeps = [&](double span) {
    return base > 0.0 ? static_cast<std::size_t>(std::ceil(span / base - 1e-9)) : std::size_t{1};
  };
  const double h = (snaps[first + 1].t - snaps[first].t) / static_cast<double>(substeps(snaps[first + 1].t - snaps[first].t));
  for (std::size_t i = first + 1; i <= last; ++i) {
    const double span = snaps[i].t - snaps[i - 1].t;
    if (std::abs(span / static_cast<double>(substeps(span)) - h) > 1e-9 * h) {
      throw NumericalError("approx_solution_residual: snapshots in the window must be evenly spaced");
    }
  }

  std::vector<double> fine_t, fd;
  std::deque<RadialField> window;
  double t_next = snaps[first].t - 2.0 * h;
  auto push = [&](RadialField u) {
    window.push_back(std::move(u));
    if (window.size() < 5) return;
    const double t = t_next - 2.0 * h;
    const auto& mid = window[2];
    const auto dt_u = (window[0] - window[1] * cplx(8.0) + window[3] * cplx(8.0) - window[4]) * cplx(1.0 / (12.0 * h));
    const auto lhs = dt_u * cplx(0.0, 1.0) + laplacian(mid);
    fine_t.push_back(t);
    fd.push_back(h1_norm(lhs - nonlinearity(mid - propagate_free(u_plus, t))));
    window.pop_front();
  };
  auto advance = [&](RadialField u) {
    push(std::move(u));
    t_next += h;
  };
  if (base == 0.0 && (first < 2 || last + 2 >= snaps.size())) {
    throw NumericalError("approx_solution_residual: two snapshots are needed beyond each end of the window");
  }
  auto evenly = [&](std::size_t i) { return std::abs(snaps[i].t - snaps[i - 1].t - h) <= 1e-9 * h; };
  if (base == 0.0 && !(evenly(first) && evenly(first - 1) && evenly(last + 1) && evenly(last + 2))) {
    throw NumericalError("approx_solution_residual: snapshots in the window must be evenly spaced");
  }
  if (base == 0.0) {
    advance(snaps[first - 2].u);
    advance(snaps[first - 1].u);
  } else {
    RadialField back1 = strang_step(snaps[first].u, -h);
    RadialField back2 = strang_step(back1, -h);
    advance(std::move(back2));
    advance(std::move(back1));
  }
  for (std::size_t i = first; i < last; ++i) {
    const std::size_t m = substeps(snaps[i + 1].t - snaps[i].t);
    t_next = snaps[i].t;
    RadialField u = snaps[i].u;
    for (std::size_t j = 0; j < m; ++j) {
      RadialField next = j + 1 < m ? strang_step(u, h) : RadialField::zeros(traj.grid());
      advance(std::move(u));
      u = std::move(next);
    }
  }
  t_next = snaps[last].t;
  advance(snaps[last].u);
  if (base == 0.0) {
    advance(snaps[last + 1].u);
    advance(snaps[last + 2].u);
  } else {
    RadialField fwd1 = strang_step(snaps[last].u, h);
    advance(fwd1);
    advance(strang_step(fwd1, h));
  }
  return {trapezoid(times, id), trapezoid(fine_t, fd), count};
}

double exterior_energy(const RadialField& f, double R) {
  if (!(R >= 0.0)) throw InvalidArgument("exterior_energy: R must be non-negative");
  return exterior_integral(f.grid(), modulus_squared(radial_derivative(f)), R);
}

BoundStateExtract extract_bound_state(const RadialField& u_wb, double R_b, int j_cut, double delta) {
  if (!(R_b > 0.0)) throw InvalidArgument("extract_bound_state: R_b must be positive");
  if (!(delta >= 0.0)) throw InvalidArgument("extract_bound_state: delta must be non-negative");
  const auto& grid = u_wb.grid();
  const CutoffSpec eta(R_b);
  const auto low = j_cut + 1 > max_band(grid) ? u_wb : low_pass(u_wb, j_cut + 1);
  BoundStateExtract out{multiply(low, [&](double r) { return eta(r); })};
  out.error_h1dot = std::sqrt(energy_parts(u_wb - out.u_b).kinetic);
  out.wb_h1dot = std::sqrt(energy_parts(u_wb).kinetic);

  const auto du = radial_derivative(out.u_b);
  out.annuli.push_back(0.0);
  for (double a = 1.0; a < grid.L(); a *= 2.0) out.annuli.push_back(a);
  out.margin_value.assign(out.annuli.size(), 0.0);
  out.margin_gradient.assign(out.annuli.size(), 0.0);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double r = grid.r(i);
    const std::size_t a = r < 1.0 ? 0 : std::min(out.annuli.size() - 1, static_cast<std::size_t>(std::floor(std::log2(r))) + 1);
    const double w = bracket(r);
    out.margin_value[a] = std::max(out.margin_value[a], std::pow(w, 1.5 - delta) * std::abs(out.u_b[i]));
    out.margin_gradient[a] = std::max(out.margin_gradient[a], std::pow(w, 2.5 - delta) * std::abs(du[i]));
  }
  return out;
}

}  // namespace rnl
