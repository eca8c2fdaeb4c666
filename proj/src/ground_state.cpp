#include "rnl/ground_state.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "rnl/errors.hpp"
#include "rnl/spectral.hpp"

namespace rnl {

namespace {

enum class Stop { crossing, undershoot, overshoot, r_max };

// Integrates the shooting ODE with RK4 and tracks sign changes with an
// outbound/inbound state machine.  `samples` collects Q at every `stride`-th
// step, i.e. at r = stride * h * j.
struct Shot {
  Stop stop = Stop::r_max;
  double stop_r = 0.0;
  int nodes = 0;
  double first_cross = 0.0;
  double last_q = 0.0;
  std::vector<double> crossings;
  std::vector<double> samples;
};

Shot integrate(double omega, double q0, double h, double r_max, int stop_after_nodes,
               std::size_t stride = 0) {
  Shot shot;
  auto rhs = [omega](double r, double q, double p, double& dq, double& dp) {
    dq = p;
    dp = omega * q - q * q * q - 2.0 * p / r;
  };
  // Regular expansion Q = q0 + a r^2 + b r^4 for the first step.
  const double a = (omega * q0 - q0 * q0 * q0) / 6.0;
  const double b = a * (omega - 3.0 * q0 * q0) / 20.0;
  double r = h;
  double q = q0 + a * h * h + b * h * h * h * h;
  double p = 2.0 * a * h + 4.0 * b * h * h * h;
  bool inbound = q0 > std::sqrt(omega);
  std::size_t step = 1;
  if (stride == 1) shot.samples.push_back(q);

  while (true) {
    double k1q, k1p, k2q, k2p, k3q, k3p, k4q, k4p;
    rhs(r, q, p, k1q, k1p);
    rhs(r + 0.5 * h, q + 0.5 * h * k1q, p + 0.5 * h * k1p, k2q, k2p);
    rhs(r + 0.5 * h, q + 0.5 * h * k2q, p + 0.5 * h * k2p, k3q, k3p);
    rhs(r + h, q + h * k3q, p + h * k3p, k4q, k4p);
    const double qn = q + h / 6.0 * (k1q + 2.0 * k2q + 2.0 * k3q + k4q);
    const double pn = p + h / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
    const double rn = r + h;
    ++step;
    if (stride != 0 && step % stride == 0) shot.samples.push_back(qn);

    if (qn == 0.0 || (qn > 0.0) != (q > 0.0)) {
      const double rc = r + h * q / (q - qn);
      ++shot.nodes;
      shot.crossings.push_back(rc);
      if (shot.nodes == 1) shot.first_cross = rc;
      inbound = false;
      if (shot.nodes >= stop_after_nodes) {
        shot.stop = Stop::crossing;
        shot.stop_r = rc;
        shot.last_q = qn;
        return shot;
      }
    } else {
      const bool moving_in = qn * pn < 0.0;
      if (inbound && !moving_in) {
        shot.stop = Stop::undershoot;
        shot.stop_r = rn;
        shot.last_q = qn;
        return shot;
      }
      if (!inbound && moving_in) inbound = true;
    }
    if (std::abs(qn) > 2.0 * q0) {
      shot.stop = Stop::overshoot;
      shot.stop_r = rn;
      shot.last_q = qn;
      return shot;
    }
    q = qn;
    p = pn;
    r = rn;
    if (r >= r_max) {
      shot.stop = Stop::r_max;
      shot.stop_r = r;
      shot.last_q = q;
      return shot;
    }
  }
}

double default_r_max(double omega, const ShootOptions& opt) {
  return opt.r_max > 0.0 ? opt.r_max : 40.0 / std::sqrt(omega);
}

void check_inputs(double omega, double q0) {
  if (!(omega > 0.0)) throw InvalidArgument("shoot: omega must be positive");
  if (!(q0 > 0.0)) throw InvalidArgument("shoot: q0 must be positive");
}

// Bracket [lo, hi] with nodes(lo) == k and nodes(hi) >= k + 1.
std::pair<double, double> find_bracket(double omega, int k, double h, const ShootOptions& opt) {
  const double rm = default_r_max(omega, opt);
  double prev = 1e-3;
  int prev_nodes = integrate(omega, prev, h, rm, k + 1).nodes;
  for (double q = prev * 1.1; q <= 1e3 * 1.0000001; q *= 1.1) {
    const int n = integrate(omega, q, h, rm, k + 1).nodes;
    if (n >= k + 1) {
      if (prev_nodes == k) return {prev, q};
      break;
    }
    prev = q;
    prev_nodes = n;
  }
  throw NumericalError("no shooting bracket for " + std::to_string(k) + " nodes in q0 in [1e-3, 1e3]");
}

GroundStateProfile build_profile(const RadialGrid& grid, double omega, int k, double tol,
                                 const ShootOptions& opt) {
  if (!(omega > 0.0)) throw InvalidArgument("solve_ground_state: omega must be positive");
  // Shooting nodes coincide with grid nodes.
  const std::size_t m = static_cast<std::size_t>(std::ceil(grid.dr() / opt.max_step - 1e-12));
  const double h = grid.dr() / static_cast<double>(m);
  auto [lo, hi] = find_bracket(omega, k, h, opt);
  const double rm = default_r_max(omega, opt);
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (integrate(omega, mid, h, rm, k + 1).nodes >= k + 1) {
      hi = mid;
    } else {
      lo = mid;
    }
  }

  // Both bracket trajectories sampled on the grid nodes.
  const double r_end = std::min(rm, grid.L());
  const Shot s_lo = integrate(omega, lo, h, r_end, k + 1, m);
  const Shot s_hi = integrate(omega, hi, h, r_end, k + 1, m);

  const double q0 = 0.5 * (lo + hi);
  const double last_node = k > 0 && s_lo.crossings.size() >= static_cast<std::size_t>(k)
                               ? s_lo.crossings[static_cast<std::size_t>(k) - 1]
                               : 0.0;
  const std::size_t avail = std::min(s_lo.samples.size(), s_hi.samples.size());
  std::vector<double> qs(grid.size(), 0.0);
  std::size_t reliable = 0;  // number of leading grid nodes taken from the shot
  bool rising = k == 0;       // heading for the last extremum
  bool falling = false;       // past it
  for (std::size_t i = 0; i < std::min(avail, grid.size()); ++i) {
    const double a = s_lo.samples[i], b = s_hi.samples[i];
    const double avg = 0.5 * (a + b);
    const double r = grid.r(i);
    if (r > last_node) {
      if (i > 0 && std::abs(avg) > std::abs(qs[i - 1])) rising = true;
      if (rising && i > 0 && std::abs(avg) < std::abs(qs[i - 1])) falling = true;
      if (falling && std::abs(a - b) > 1e-4 * std::abs(avg)) break;
      if (falling && std::abs(avg) > std::abs(qs[i - 1])) break;
      if (std::abs(avg) < 1e-10 * q0) break;
    }
    qs[i] = avg;
    reliable = i + 1;
  }
  if (reliable == 0) throw NumericalError("shooting profile unresolved on this grid");

  GroundStateProfile p{omega, RadialField::zeros(grid)};
  if (reliable < grid.size()) {
    const double rr = grid.r(reliable - 1);
    const double kappa = std::sqrt(omega);
    const double c = qs[reliable - 1] * rr * std::exp(kappa * rr);
    for (std::size_t i = reliable; i < grid.size(); ++i) {
      const double r = grid.r(i);
      qs[i] = c * std::exp(-kappa * r) / r;
    }
    p.tail_radius = rr;
  } else {
    p.tail_radius = grid.L();
  }
  std::vector<cplx> vals(qs.begin(), qs.end());
  p.Q = RadialField(grid, std::move(vals));
  p.shoot_value = q0;
  measure_profile(p);
  return p;
}

}  // namespace

std::string to_string(ShootKind k) {
  switch (k) {
    case ShootKind::decays:
      return "decays";
    case ShootKind::crosses_zero:
      return "crosses_zero";
    case ShootKind::diverges:
      return "diverges";
  }
  return "unknown";
}

ShootResult shoot(double omega, double q0, const ShootOptions& opt) {
  check_inputs(omega, q0);
  const Shot s = integrate(omega, q0, opt.max_step, default_r_max(omega, opt), 1);
  switch (s.stop) {
    case Stop::crossing:
      return {ShootKind::crosses_zero, s.stop_r};
    case Stop::undershoot:
    case Stop::overshoot:
      return {ShootKind::diverges, s.stop_r};
    case Stop::r_max:
      break;
  }
  if (std::abs(s.last_q) < opt.decay_floor * q0) return {ShootKind::decays, s.stop_r};
  return {ShootKind::diverges, s.stop_r};
}

int count_nodes(double omega, double q0, const ShootOptions& opt) {
  check_inputs(omega, q0);
  return integrate(omega, q0, opt.max_step, default_r_max(omega, opt), 1 << 20).nodes;
}

void measure_profile(GroundStateProfile& p) {
  const auto parts = energy_parts(p.Q);
  p.mass = mass(p.Q);
  p.kinetic = parts.kinetic;
  p.quartic = parts.quartic;
  p.energy = parts.energy();
  p.pohozaev_residual = std::abs(4.0 * p.kinetic - 3.0 * p.quartic) / (4.0 * p.kinetic);
  const auto lap = laplacian(p.Q);
  double res = 0.0;
  int nodes = 0;
  for (std::size_t i = 0; i < p.Q.size(); ++i) {
    const double q = p.Q[i].real();
    res = std::max(res, std::abs(lap[i].real() - p.omega * q + q * q * q));
    if (i > 0 && (q > 0.0) != (p.Q[i - 1].real() > 0.0) && p.Q[i - 1].real() != 0.0 && q != 0.0) ++nodes;
  }
  p.ode_residual = res;
  p.node_count = nodes;
}

GroundStateProfile solve_ground_state(const RadialGrid& grid, double omega, double tol,
                                      const ShootOptions& opt) {
  return build_profile(grid, omega, 0, tol, opt);
}

GroundStateProfile solve_excited(const RadialGrid& grid, double omega, int nodes, double tol,
                                 const ShootOptions& opt) {
  if (nodes < 0) throw InvalidArgument("solve_excited: nodes must be >= 0");
  if (nodes == 0) return solve_ground_state(grid, omega, tol, opt);
  return build_profile(grid, omega, nodes, tol, opt);
}

GroundStateProfile rescale(const GroundStateProfile& profile, double omega_new) {
  if (!(omega_new > 0.0)) throw InvalidArgument("rescale: omega must be positive");
  if (omega_new == profile.omega) return profile;
  const double s = std::sqrt(omega_new / profile.omega);
  const auto spec = to_spectral(profile.Q);
  const auto& g = profile.Q.grid();
  GroundStateProfile out{omega_new, RadialField::sample(g, [&](double r) { return s * evaluate(spec, s * r); })};
  out.shoot_value = s * profile.shoot_value;
  out.tail_radius = profile.tail_radius / s;
  measure_profile(out);
  return out;
}

}  // namespace rnl
