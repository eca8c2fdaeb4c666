#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "rnl/errors.hpp"
#include "rnl/propagator.hpp"
#include "rnl/spectral.hpp"
#include "test_fields.hpp"

using namespace rnl;

namespace {

cplx gaussian_exact(double t, double r) {
  const cplx a(1.0, 4.0 * t);
  return std::pow(a, -1.5) * std::exp(-r * r / a);
}

double max_diff(const RadialField& a, const RadialField& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

TEST_CASE("unitarity, group law, reversal") {
  RadialGrid g(2048, 40.0);
  auto f = testing::random_bumps(g, 3);
  CHECK(max_diff(propagate_free(f, 0.0), f) == 0.0);
  for (double t : {-3.0, 0.25, 5.0}) {
    auto u = propagate_free(f, t);
    CHECK(std::abs(mass(u) - mass(f)) < 1e-12 * mass(f));
    CHECK(std::abs(sobolev_norm(u, 1.0) - sobolev_norm(f, 1.0)) < 1e-12 * sobolev_norm(f, 1.0));
  }
  auto ab = propagate_free(propagate_free(f, 0.7), 1.3);
  CHECK(max_diff(ab, propagate_free(f, 2.0)) < 1e-12);
  // u(t) -> conj u(-t)
  auto rev = propagate_free(propagate_free(f, 1.5).conj(), 1.5).conj();
  CHECK(max_diff(rev, f) < 1e-12);
  auto zero = propagate_free(RadialField::zeros(g), 2.0);
  CHECK(mass(zero) == 0.0);
}

TEST_CASE("Gaussian evolution matches the closed form") {
  RadialGrid g(4096, 40.0);
  auto f = testing::gaussian(g, 1.0, 1.0);
  auto u = propagate_free(f, 1.0);
  CHECK(std::abs(sup_norm(u) - std::pow(17.0, -0.75)) < 1e-6);
  CHECK(std::pow(17.0, -0.75) == doctest::Approx(0.1191).epsilon(1e-3));
  double err = 0.0;
  for (std::size_t i = 0; i < u.size(); i += 7) err = std::max(err, std::abs(u[i] - gaussian_exact(1.0, g.r(i))));
  CHECK(err < 1e-10);
}

TEST_CASE("dispersive fit") {
  std::vector<double> times;
  for (int i = 0; i <= 10; ++i) times.push_back(std::pow(10.0, i / 10.0));
  RadialGrid g(4096, 400.0);
  SUBCASE("Gaussian") {
    auto fit = dispersive_fit(testing::gaussian(g, 1.0, 1.0), times);
    CHECK(fit.reliable);
    CHECK(std::abs(fit.exponent + 1.5) < 0.05);
  }
  SUBCASE("two bumps") {
    // the shell needs a few time units to pass through the origin before the rate settles
    std::vector<double> later;
    for (double t : times) later.push_back(t * std::sqrt(10.0));
    auto f = testing::gaussian(g, 1.0, 1.0) + testing::shell(g, 0.5, 3.0, 1.0);
    auto fit = dispersive_fit(f, later);
    CHECK(fit.reliable);
    CHECK(std::abs(fit.exponent + 1.5) < 0.05);
  }
  SUBCASE("a single sine mode touches the wall") {
    RadialGrid small(128, 10.0);
    std::vector<cplx> b(small.size());
    b[0] = 1.0;
    auto fit = dispersive_fit(from_spectral(SpectralField(small, b)), times);
    CHECK_FALSE(fit.reliable);
  }
  CHECK_THROWS_AS(dispersive_fit(testing::gaussian(g, 1.0, 1.0), {0.5, 10.0}), InvalidArgument);
  CHECK_THROWS_AS(dispersive_fit(testing::gaussian(g, 1.0, 1.0), {1.0, 5.0}), InvalidArgument);
}

TEST_CASE("kernel quadrature agrees with the spectral flow") {
  RadialGrid g(2048, 20.0);
  auto f = testing::gaussian(g, 1.0, 1.0);
  auto u = to_spectral(propagate_free(f, 1.0));
  for (double r : {0.5, 1.0, 2.0}) {
    const cplx k = kernel_oracle(f, 1.0, r);
    CHECK(std::abs(k - evaluate(u, r)) < 1e-4);
    CHECK(std::abs(k - gaussian_exact(1.0, r)) < 1e-4);
  }
  auto h = testing::random_bumps(g, 11, 0.0, 4.0);
  const cplx fwd = kernel_oracle(h, 0.8, 1.5);
  const cplx back = kernel_oracle(h.conj(), -0.8, 1.5);
  CHECK(std::abs(back - std::conj(fwd)) < 1e-12);
  CHECK(std::abs(fwd - evaluate(to_spectral(propagate_free(h, 0.8)), 1.5)) < 1e-4);

  // approximate identity as t -> 0+
  const double f1 = std::exp(-1.0);
  const cplx near = kernel_oracle(f, 0.01, 1.0);
  CHECK(std::abs(near - f1) < 0.05 * f1);
  CHECK(std::abs(near - evaluate(to_spectral(propagate_free(f, 0.01)), 1.0)) < 1e-4);
  CHECK_THROWS_AS(kernel_oracle(f, 0.0, 1.0), InvalidArgument);
}

TEST_CASE("local decay probe") {
  RadialGrid g(4096, 400.0);
  std::vector<double> times{0.0, 1.0, 2.0, 5.0, 10.0, 20.0};
  auto zero = local_decay_probe(RadialField::zeros(g), 1.0, times);
  for (double v : zero.weighted_energy) CHECK(v == 0.0);
  auto probe = local_decay_probe(testing::gaussian(g, 1.0, 1.0), 1.0, times);
  CHECK(probe.reliable);
  CHECK(probe.weighted_energy.back() < 0.05 * probe.weighted_energy.front());
  for (std::size_t i = 1; i < times.size(); ++i) {
    CHECK(probe.weighted_energy[i] < probe.weighted_energy[i - 1]);
    CHECK(probe.l4_power[i] < probe.l4_power[i - 1]);
  }
  CHECK(probe.l4_power.back() < 1e-3 * probe.l4_power.front());
}
