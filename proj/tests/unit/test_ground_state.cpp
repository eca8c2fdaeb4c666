#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "rnl/errors.hpp"
#include "rnl/ground_state.hpp"
#include "rnl/spectral.hpp"
#include "test_fields.hpp"

using namespace rnl;

namespace {

// Frozen from tests/oracles/ground_state_oracle.py (adaptive DOP853 shooting).
constexpr double kOracleQ0 = 4.337387679977;
constexpr double kOracleQ0Omega4 = 8.674775359954;
constexpr double kOracleMass = 18.89725130;
constexpr double kOracleKinetic = 56.69175391;
constexpr double kOracleQuartic = 75.58900521;
constexpr double kOracleExcitedQ0 = 14.1035844049;

const GroundStateProfile& ground() {
  static const GroundStateProfile p = solve_ground_state(RadialGrid(4096, 40.0), 1.0);
  return p;
}

}  // namespace

TEST_CASE("shooting classification") {
  CHECK(shoot(1.0, 0.1).kind == ShootKind::diverges);
  const auto big = shoot(1.0, 100.0);
  CHECK(big.kind == ShootKind::crosses_zero);
  CHECK(big.r < 2.0);
  CHECK(shoot(1.0, 1.0).kind != shoot(1.0, 10.0).kind);
  CHECK(shoot(1.0, 4.3).kind == ShootKind::diverges);
  CHECK(shoot(1.0, 4.4).kind == ShootKind::crosses_zero);
  CHECK(count_nodes(1.0, 4.4) == 1);
  CHECK(count_nodes(1.0, 4.3) == 0);
  CHECK_THROWS_AS(shoot(0.0, 1.0), InvalidArgument);
  CHECK_THROWS_AS(shoot(1.0, -1.0), InvalidArgument);
}

TEST_CASE("ground state at omega = 1") {
  const auto& p = ground();
  CHECK(std::abs(p.shoot_value - kOracleQ0) < 1e-6 * kOracleQ0);
  CHECK(p.node_count == 0);
  CHECK(p.pohozaev_residual < 1e-4);
  CHECK(p.ode_residual < 1e-6);
  CHECK(p.energy > 0.0);
  CHECK(p.mass == doctest::Approx(kOracleMass).epsilon(1e-6));
  CHECK(p.kinetic == doctest::Approx(kOracleKinetic).epsilon(1e-6));
  CHECK(p.quartic == doctest::Approx(kOracleQuartic).epsilon(1e-6));
  // E = K / 6 once 3P = 4K
  CHECK(p.energy == doctest::Approx(p.kinetic / 6.0).epsilon(1e-4));

  const auto& Q = p.Q;
  double r_half = 0.0;
  for (std::size_t i = 0; i < Q.size(); ++i) {
    CHECK(Q[i].real() > 0.0);
    if (i > 0) CHECK(Q[i].real() < Q[i - 1].real());
    if (r_half == 0.0 && Q[i].real() < 0.5 * p.shoot_value) r_half = Q.grid().r(i);
  }
  for (std::size_t i = 0; i < Q.size(); ++i) {
    const double r = Q.grid().r(i);
    if (r > r_half) CHECK(Q[i].real() < p.shoot_value * std::exp(-0.5 * r));
  }
}

TEST_CASE("energy along the scaling line lambda Q") {
  const auto& p = ground();
  for (double lambda : {0.5, 1.0, 1.2, 1.5, 2.0}) {
    const double e = energy(p.Q * cplx(lambda));
    const double model = p.kinetic * (lambda * lambda / 2.0 - std::pow(lambda, 4) / 3.0);
    CHECK(std::abs(e - model) < 0.01 * p.kinetic);
  }
  const double crit = std::sqrt(1.5);
  CHECK(energy(p.Q * cplx(0.99 * crit)) > 0.0);
  CHECK(energy(p.Q * cplx(1.01 * crit)) < 0.0);
  CHECK(energy(p.Q * cplx(1.5)) < 0.0);
}

TEST_CASE("ground state maximizes the Gagliardo-Nirenberg ratio") {
  const auto& p = ground();
  const double best = gn_ratio(p.Q);
  const auto& g = p.Q.grid();
  CHECK(gn_ratio(testing::gaussian(g, 1.0, 1.0)) < best);
  CHECK(gn_ratio(testing::shell(g, 1.0, 4.0, 1.0)) < best);
  for (std::uint64_t seed = 0; seed < 10; ++seed) CHECK(gn_ratio(testing::random_bumps(g, seed)) < best);
}

TEST_CASE("rescaling") {
  const auto& p = ground();
  const auto same = rescale(p, 1.0);
  CHECK(same.Q[10] == p.Q[10]);
  const auto q4 = rescale(p, 4.0);
  CHECK(q4.shoot_value == doctest::Approx(2.0 * p.shoot_value).epsilon(1e-14));
  CHECK(std::abs(std::abs(value_at_origin(q4.Q)) - 2.0 * p.shoot_value) < 1e-6);
  CHECK(std::abs(q4.mass / p.mass - 0.5) < 1e-4);
  CHECK(q4.pohozaev_residual < 1e-4);

  const auto direct = solve_ground_state(p.Q.grid(), 4.0);
  CHECK(std::abs(direct.shoot_value - kOracleQ0Omega4) < 1e-6 * kOracleQ0Omega4);
  CHECK(std::abs(direct.mass - q4.mass) < 1e-6 * direct.mass);
}

TEST_CASE("excited state with two nodes") {
  const auto e2 = solve_excited(RadialGrid(4096, 40.0), 1.0, 2);
  CHECK(e2.node_count == 2);
  CHECK(e2.pohozaev_residual < 1e-3);
  CHECK(e2.ode_residual < 1e-6);
}

TEST_CASE("excited state with one node") {
  RadialGrid g(4096, 40.0);
  const auto e1 = solve_excited(g, 1.0, 1);
  CHECK(e1.node_count == 1);
  CHECK(std::abs(e1.shoot_value - kOracleExcitedQ0) < 1e-6 * kOracleExcitedQ0);
  CHECK(e1.pohozaev_residual < 1e-3);
  CHECK(e1.ode_residual < 1e-6);
  CHECK(e1.mass > ground().mass);
  CHECK(e1.energy > ground().energy);
  const auto e0 = solve_excited(g, 1.0, 0);
  CHECK(e0.shoot_value == ground().shoot_value);
  CHECK_THROWS_AS(solve_excited(g, 1.0, -1), InvalidArgument);
}

TEST_CASE("Pohozaev residual shrinks under shooting-step refinement") {
  RadialGrid g(1024, 30.0);
  double prev = 1.0;
  for (double h : {0.03, 0.015, 0.0075}) {
    ShootOptions opt;
    opt.max_step = h;
    const auto p = solve_ground_state(g, 1.0, 1e-13, opt);
    CHECK(p.pohozaev_residual < prev);
    CHECK(p.node_count == 0);
    prev = p.pohozaev_residual;
  }
}
