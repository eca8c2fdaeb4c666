#include "rnl/inout.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "rnl/errors.hpp"
#include "rnl/parallel.hpp"
#include "rnl/propagator.hpp"
#include "rnl/sine_transform.hpp"
#include "rnl/spectral.hpp"

namespace rnl {

namespace {

double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1p-53; }

std::vector<double> sample_times(double t0, double t1, int samples) {
  std::vector<double> t(static_cast<std::size_t>(samples) + 1);
  for (int i = 0; i <= samples; ++i) t[static_cast<std::size_t>(i)] = t0 + (t1 - t0) * i / samples;
  return t;
}

double trapezoid(const std::vector<double>& t, const std::vector<double>& y) {
  double acc = 0.0;
  for (std::size_t i = 1; i < t.size(); ++i) acc += 0.5 * (t[i] - t[i - 1]) * (y[i] + y[i - 1]);
  return std::abs(acc);
}

double ratio_of_norms(const RadialField& a, double denom_mass) {
  return denom_mass > 0.0 ? std::sqrt(mass(a) / denom_mass) : 0.0;
}

}  // namespace

LineTransform odd_line_transform(const RadialField& h) {
  const auto& g = h.grid();
  const std::size_t m = g.size();
  std::vector<cplx> b(m);
  SineTransform::get(g.n()).forward(h.values(), b);
  LineTransform out;
  out.d_rho = 1.0 / (2.0 * g.L());
  out.modes = m;
  out.values.assign(2 * m + 1, cplx(0.0));
  // sum_j h_j sin(pi j k / n) = (n / 2) b_k, so g_k = -2i dr (n/2) b_k = -i L b_k
  for (std::size_t k = 1; k <= m; ++k) {
    const cplx gk = cplx(0.0, -g.L()) * b[k - 1];
    out.values[m + k] = gk;
    out.values[m - k] = -gk;
  }
  return out;
}

RadialField half_line_synthesis(const RadialGrid& grid, const LineTransform& g, int sign) {
  if (sign != 1 && sign != -1) throw InvalidArgument("half_line_synthesis: sign must be +1 or -1");
  if (g.modes != grid.size()) throw InvalidArgument("half_line_synthesis: transform does not match the grid");
  const std::size_t m = grid.size();
  std::vector<cplx> a(m);
  for (std::size_t k = 1; k <= m; ++k) a[k - 1] = g.at(sign * static_cast<long>(k));
  const auto& tr = SineTransform::get(grid.n());
  std::vector<cplx> c(grid.n()), s(m);
  tr.cosine_series(a, c);
  tr.inverse(a, s);
  const cplx half_origin = 0.5 * g.at(0);
  std::vector<cplx> vals(m);
  for (std::size_t i = 0; i < m; ++i) {
    vals[i] = g.d_rho * (half_origin + c[i + 1] + cplx(0.0, sign) * s[i]);
  }
  return RadialField(grid, std::move(vals));
}

WaveSplit split_inout(const RadialField& f, double R, double delta) {
  const auto& grid = f.grid();
  if (!(delta > 0.0 && delta < 1.0)) throw InvalidArgument("split_inout: delta must lie in (0, 1)");
  if (!(R == 0.0 || R >= 1.0)) throw InvalidArgument("split_inout: R must be 0 or at least 1");
  if (R >= grid.L()) throw InvalidArgument("split_inout: R must be inside the domain");

  WaveSplit out{f, RadialField::zeros(grid), RadialField::zeros(grid), RadialField::zeros(grid), R, delta, {}, {}};
  const double total = mass(f);
  const auto dens = modulus_squared(f);

  if (R == 0.0) {
    if (total > 0.0) {
      const double stray = exterior_integral(grid, dens, 2.0) / total;
      if (stray > kSupportTolerance) throw SupportError("split_inout: R = 0 needs support in B(0,2)", stray);
    }
    out.f_plus = f;
    out.plus_bound = total > 0.0 ? 1.0 : 0.0;
    return out;
  }

  if (total > 0.0) {
    const double stray = ball_integral(grid, dens, R) / total;
    if (stray > kSupportTolerance) throw SupportError("split_inout: f must vanish on B(0,R)", stray);
  }

  const auto bank = LittlewoodPaleyBank::for_grid(grid);
  // bands with 2^j <= R^{delta-1} stay in f_smooth
  const int j_low = static_cast<int>(std::floor((delta - 1.0) * std::log2(R)));
  const int j_lo = std::max(j_low + 1, bank.j_min);
  const int j_hi = bank.j_max;

  if (j_lo > j_hi) {
    out.f_smooth = f;
    out.smooth_bound = total > 0.0 ? 1.0 : 0.0;
    out.smooth_gradient_bound = total > 0.0 ? std::sqrt(energy_parts(f).kinetic / total) : 0.0;
    return out;
  }

  const auto low = apply_multiplier(f, [&](double rho) { return cplx(LittlewoodPaleyBank::below(j_lo, rho)); });

  const std::size_t nb = static_cast<std::size_t>(j_hi - j_lo + 1);
  std::vector<RadialField> projected(nb, RadialField::zeros(grid));
  std::vector<RadialField> plus(nb, RadialField::zeros(grid));
  std::vector<RadialField> minus(nb, RadialField::zeros(grid));
  out.bands.resize(nb);
  out.transforms.resize(nb);
  const CutoffSpec eta(R);
  const CutoffSpec eta_half(R / 2.0);

  parallel_for(nb, [&](std::size_t b) {
    const int j = j_lo + static_cast<int>(b);
    auto mult = [&](double rho) {
      // the top band takes everything above band j_hi - 1
      if (j == j_hi) return cplx(1.0 - LittlewoodPaleyBank::below(j, rho));
      return cplx(LittlewoodPaleyBank::band(j, rho));
    };
    projected[b] = apply_multiplier(f, mult);
    const auto h = multiply(projected[b], [&](double r) { return 1.0 - eta(r); });
    out.bands[b] = j;
    out.transforms[b] = odd_line_transform(h);
    auto outer = [&](double r) { return 1.0 - eta_half(r); };
    plus[b] = multiply(half_line_synthesis(grid, out.transforms[b], +1), outer);
    minus[b] = multiply(half_line_synthesis(grid, out.transforms[b], -1), outer);
  });

  auto high = RadialField::zeros(grid);
  for (std::size_t b = 0; b < nb; ++b) {
    high += projected[b];
    out.f_plus += plus[b];
    out.f_minus += minus[b];
  }
  out.f_smooth = low + multiply(high, [&](double r) { return eta(r); });

  const auto recon = out.f_plus + out.f_minus + out.f_smooth - f;
  out.reconstruction_residual = ratio_of_norms(recon, total);
  out.plus_bound = ratio_of_norms(out.f_plus, total);
  out.minus_bound = ratio_of_norms(out.f_minus, total);
  out.smooth_bound = ratio_of_norms(out.f_smooth, total);
  out.smooth_gradient_bound = total > 0.0 ? std::sqrt(energy_parts(out.f_smooth).kinetic / total) : 0.0;
  return out;
}

EscapeMetric outgoing_escape_metric(const WaveSplit& split, double horizon, int samples) {
  if (!(horizon > 0.0)) throw InvalidArgument("outgoing_escape_metric: horizon must be positive");
  if (samples < 2) throw InvalidArgument("outgoing_escape_metric: need at least 2 samples");
  EscapeMetric out;
  if (split.R == 0.0) return out;  // B(0, R/8) is empty
  const auto& grid = split.f_plus.grid();
  if (split.R < 8.0 * grid.dr()) throw InvalidArgument("outgoing_escape_metric: R must be at least 8 dr");
  const double ball = split.R / 8.0;
  const double ref = h1_scale(split.source);
  const auto times = sample_times(0.0, horizon, samples);

  // series: f+ forward, f- backward, f+ backward, f- forward
  const RadialField* fields[4] = {&split.f_plus, &split.f_minus, &split.f_plus, &split.f_minus};
  const double signs[4] = {1.0, -1.0, -1.0, 1.0};
  const std::size_t nt = times.size();
  std::vector<double> norms(4 * nt, 0.0);
  std::vector<char> wall(4 * nt, 0);
  parallel_for(4 * nt, [&](std::size_t idx) {
    const std::size_t s = idx / nt, i = idx % nt;
    const auto u = propagate_free(*fields[s], signs[s] * times[i]);
    wall[idx] = touches_wall(u, ref);
    const auto du = modulus_squared(radial_derivative(u));
    norms[idx] = std::sqrt(std::max(0.0, ball_integral(grid, du, ball)));
  });
  double vals[4];
  for (std::size_t s = 0; s < 4; ++s) {
    std::vector<double> y(norms.begin() + static_cast<long>(s * nt), norms.begin() + static_cast<long>((s + 1) * nt));
    vals[s] = trapezoid(times, y);
  }
  out.plus_value = vals[0];
  out.minus_value = vals[1];
  out.plus_unfavorable = vals[2];
  out.minus_unfavorable = vals[3];
  for (char w : wall) out.wall_flag = out.wall_flag || w;
  return out;
}

PairingSeries incoming_pairing(const RadialField& u0, const WaveSplit& split, const std::vector<double>& times) {
  if (!(u0.grid() == split.f_minus.grid())) throw InvalidArgument("incoming_pairing: grid mismatch");
  PairingSeries out;
  out.times = times;
  out.values.assign(times.size(), cplx(0.0));
  std::vector<char> wall(times.size(), 0);
  const double ref = h1_scale(u0);
  parallel_for(times.size(), [&](std::size_t i) {
    const auto u = propagate_free(u0, times[i]);
    wall[i] = touches_wall(u, ref);
    out.values[i] = inner_product(u, split.f_minus);
  });
  for (char w : wall) out.wall_flag = out.wall_flag || w;
  return out;
}

SmoothingMetric local_smoothing_metric(const WaveSplit& split, double alpha, double horizon, int samples) {
  if (!(alpha >= 0.0)) throw InvalidArgument("local_smoothing_metric: alpha must be non-negative");
  if (!(horizon > 0.0)) throw InvalidArgument("local_smoothing_metric: horizon must be positive");
  if (samples < 2) throw InvalidArgument("local_smoothing_metric: need at least 2 samples");
  const double scale = bracket(split.R);
  const auto times = sample_times(0.0, horizon, samples);
  const std::size_t nt = times.size();
  std::vector<double> norms(2 * nt, 0.0);
  std::vector<char> wall(2 * nt, 0);
  const RadialField* fields[2] = {&split.f_plus, &split.f_minus};
  const double ref = h1_scale(split.source);
  parallel_for(2 * nt, [&](std::size_t idx) {
    const std::size_t s = idx / nt, i = idx % nt;
    const auto u = propagate_free(*fields[s], times[i]);
    wall[idx] = touches_wall(u, ref);
    const auto damped = multiply(u, [](double r) { return 1.0 / (1.0 + r * r); });
    norms[idx] = sobolev_norm(damped, -alpha, scale);
  });
  SmoothingMetric out;
  out.plus_value = trapezoid(times, std::vector<double>(norms.begin(), norms.begin() + static_cast<long>(nt)));
  out.minus_forward = trapezoid(times, std::vector<double>(norms.begin() + static_cast<long>(nt), norms.end()));
  out.reference = std::pow(scale, -1.0 + split.delta) * sobolev_norm(split.source, -alpha - 1.0 + split.delta, scale);
  for (char w : wall) out.wall_flag = out.wall_flag || w;
  return out;
}

RadialField random_exterior_profile(const RadialGrid& grid, double R, std::uint64_t seed) {
  if (!(R >= 1.0)) throw InvalidArgument("random_exterior_profile: R must be at least 1");
  if (3.0 * R > grid.L()) throw InvalidArgument("random_exterior_profile: the grid must extend past 3R");
  std::mt19937_64 rng(seed);
  struct Shell {
    double amp, center, width, phase, rho;
  };
  std::vector<Shell> shells(4);
  for (auto& s : shells) {
    s.amp = 0.2 + unit(rng);
    s.center = R * (1.6 + unit(rng));
    s.width = R * (0.05 + 0.07 * unit(rng));
    s.phase = 2.0 * kPi * unit(rng);
    s.rho = 16.0 / R * unit(rng);
  }
  return RadialField::sample(grid, [&](double r) {
    cplx acc = 0.0;
    for (const auto& s : shells) {
      const double x = (r - s.center) / s.width;
      acc += s.amp * std::exp(-x * x) * std::polar(1.0, s.phase + 2.0 * kPi * s.rho * r);
    }
    return acc;
  });
}

RadialField ring_profile(const RadialGrid& grid, double center, double width, double rho0, double amplitude) {
  if (!(width > 0.0)) throw InvalidArgument("ring_profile: width must be positive");
  return RadialField::sample(grid, [&](double r) {
    const double x = (r - center) / width;
    return amplitude * std::exp(-x * x) * std::polar(1.0, 2.0 * kPi * rho0 * r) / r;
  });
}

}  // namespace rnl
