#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "rnl/errors.hpp"
#include "rnl/ground_state.hpp"
#include "rnl/integrator.hpp"
#include "rnl/spectral.hpp"
#include "test_fields.hpp"

using namespace rnl;

namespace {

const GroundStateProfile& ground() {
  static const GroundStateProfile p = solve_ground_state(RadialGrid(4096, 40.0), 1.0);
  return p;
}

double aligned_error(const RadialField& u, const RadialField& target) {
  cplx ph = inner_product(u, target);
  ph /= std::abs(ph);
  return std::sqrt(mass(u - target * ph));
}

}  // namespace

TEST_CASE("single steps") {
  RadialGrid g(512, 20.0);
  CHECK(mass(strang_step(RadialField::zeros(g), 0.01)) == 0.0);
  auto f = testing::random_bumps(g, 5, 0.0, 6.0);
  auto u = strang_step(f, 0.01);
  CHECK(std::abs(mass(u) - mass(f)) < 1e-13 * mass(f));
  CHECK_THROWS_AS(strang_step(f, 0.0), InvalidArgument);
  const auto back = strang_step(u, -0.01);
  double err = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) err = std::max(err, std::abs(back[i] - f[i]));
  CHECK(err < 1e-13);
}

TEST_CASE("local error against the exact soliton rotation is third order") {
  const auto& Q = ground().Q;
  std::vector<double> errs;
  const std::vector<double> dts{0.004, 0.002, 0.001};
  for (double dt : dts) {
    errs.push_back(std::sqrt(mass(strang_step(Q, dt) - Q * std::polar(1.0, dt))));
  }
  for (std::size_t i = 1; i < errs.size(); ++i) {
    const double order = std::log2(errs[i - 1] / errs[i]);
    CHECK(order >= 2.8);
  }
}

TEST_CASE("mass is conserved to round-off over 1e4 steps") {
  RadialGrid g(1024, 40.0);
  auto f = testing::gaussian(g, cplx(0.4, 0.1), 4.0);
  auto traj = evolve(f, 1e-3, 10.0, 1.0);
  CHECK(traj.status == RunStatus::completed);
  CHECK(traj.steps == 10000);
  CHECK(traj.ledger.mass_drift() < 1e-12);
  CHECK_FALSE(traj.ledger.mass_flagged());
  CHECK(traj.snapshots.size() == 11);
  for (std::size_t i = 1; i < traj.snapshots.size(); ++i) CHECK(traj.snapshots[i].t > traj.snapshots[i - 1].t);
}

TEST_CASE("small data: energy drift halves like dt^2") {
  RadialGrid g(2048, 200.0);
  auto f = testing::gaussian(g, 0.05, 1.0);
  auto run = [&](double dt) {
    EvolveOptions o;
    o.dt = dt;
    o.T = 10.0;
    o.cadence = 0.5;
    return evolve(f, o);
  };
  auto a = run(0.01);
  auto b = run(0.005);
  CHECK(a.status == RunStatus::completed);
  CHECK(b.status == RunStatus::completed);
  const double ratio = a.ledger.energy_drift() / b.ledger.energy_drift();
  CHECK(ratio > 3.5);
  CHECK(ratio < 4.5);
  CHECK(a.ledger.mass_drift() < 1e-12);
  CHECK(std::isfinite(a.ledger.h1_sup()));

  // reference resolution
  auto c = run(0.0025);
  CHECK(c.ledger.energy_drift() < 1e-8);
  CHECK_FALSE(c.ledger.energy_flagged());
  CHECK_FALSE(detect_blowup(c).has_value());

  SUBCASE("time reversal") {
    const auto& uT = c.snapshots.back().u;
    EvolveOptions o;
    o.dt = 0.0025;
    o.T = 10.0;
    o.cadence = 10.0;
    auto back = evolve(uT.conj(), o).snapshots.back().u.conj();
    CHECK(std::sqrt(mass(back - f) / mass(f)) < 1e-6);
  }
  SUBCASE("spacetime norms") {
    CHECK(spacetime_norm(c, 4, 6, 0.0, 10.0) > spacetime_norm(c, 4, 6, 5.0, 10.0));
    CHECK(spacetime_norm(c, INFINITY, 2, 0.0, 10.0) == doctest::Approx(std::sqrt(mass(f))).epsilon(1e-12));
    CHECK_THROWS_AS(spacetime_norm(c, 4, 6, 0.0, 2.0), NumericalError);
    CHECK_THROWS_AS(spacetime_norm(c, 3, 6, 0.0, 10.0), InvalidArgument);
  }
}

TEST_CASE("ground state: short-time tracking and the unstable mode") {
  const auto& Q = ground().Q;
  EvolveOptions o;
  o.dt = 1e-3;
  o.T = 1.5;
  o.cadence = 0.25;
  auto traj = evolve(Q, o);
  CHECK(traj.ledger.mass_drift() < 1e-12);
  CHECK(aligned_error(traj.at(0.25).u, Q * std::polar(1.0, 0.25)) < 1e-3);
  // The deviation grows at the rate of the linearized operator's real
  // eigenvalue (about 5.5 for omega = 1).
  const double e1 = aligned_error(traj.at(0.5).u, Q * std::polar(1.0, 0.5));
  const double e2 = aligned_error(traj.at(1.0).u, Q * std::polar(1.0, 1.0));
  const double rate = std::log(e2 / e1) / 0.5;
  CHECK(rate > 4.5);
  CHECK(rate < 6.5);
}

TEST_CASE("spacetime norms of a rotating profile") {
  const auto& Q = ground().Q;
  std::vector<Snapshot> snaps;
  for (int i = 0; i <= 16; ++i) snaps.push_back({0.1 * i, Q * std::polar(1.0, 0.1 * i)});
  auto traj = trajectory_from_snapshots(std::move(snaps));
  CHECK(spacetime_norm(traj, INFINITY, 2, 0.3, 1.5) == doctest::Approx(std::sqrt(mass(Q))).epsilon(1e-13));
  std::vector<Snapshot> zeros;
  for (int i = 0; i <= 10; ++i) zeros.push_back({0.1 * i, RadialField::zeros(Q.grid())});
  CHECK(spacetime_norm(trajectory_from_snapshots(std::move(zeros)), 4, INFINITY, 0.0, 1.0) == 0.0);
}

TEST_CASE("negative energy data blows up") {
  const auto& Q = ground().Q;
  CHECK(energy(Q * cplx(1.5)) < 0.0);
  std::vector<double> tstar;
  for (double dt : {1e-3, 5e-4}) {
    EvolveOptions o;
    o.dt = dt;
    o.T = 5.0;
    o.cadence = 0.05;
    auto traj = evolve(Q * cplx(1.5), o);
    auto t = detect_blowup(traj);
    REQUIRE(t.has_value());
    CHECK(*t < 5.0);
    tstar.push_back(*t);
  }
  CHECK(std::abs(tstar[1] - tstar[0]) < 0.05 * tstar[0]);
}

TEST_CASE("sponge and wall") {
  RadialGrid g(512, 20.0);
  // outgoing shell with wavenumber 3
  auto moving = RadialField::sample(g, [](double r) { return 0.1 * std::exp(-(r - 10) * (r - 10)) * std::polar(1.0, 3.0 * r); });
  EvolveOptions o;
  o.dt = 0.005;
  o.T = 5.0;
  o.cadence = 0.25;
  auto open = evolve(moving, o);
  CHECK(open.status == RunStatus::wall_contaminated);
  o.sponge = true;
  auto damped = evolve(moving, o);
  CHECK(damped.status == RunStatus::completed);
  const auto& last = damped.ledger.rows.back();
  CHECK(last.sponge_loss > 0.1 * damped.ledger.rows.front().mass);
  CHECK(damped.ledger.mass_drift() < 1e-12);
}

TEST_CASE("option validation") {
  RadialGrid g(64, 10.0);
  auto f = testing::gaussian(g, 0.1, 1.0);
  CHECK_THROWS_AS(evolve(f, 0.0, 1.0, 0.1), InvalidArgument);
  CHECK_THROWS_AS(evolve(f, 0.03, 1.0, 0.1), InvalidArgument);
  CHECK_THROWS_AS(evolve(f, 0.01, 1.05, 0.1), InvalidArgument);
  CHECK_THROWS_AS(evolve(f, 0.2, 1.0, 0.1), InvalidArgument);
}
