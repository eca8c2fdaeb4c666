#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "rnl/errors.hpp"
#include "rnl/spectral.hpp"
#include "test_fields.hpp"

using namespace rnl;

namespace {

double rel_l2(const RadialField& a, const RadialField& b) {
  return std::sqrt(mass(a - b) / mass(b));
}

}  // namespace

TEST_CASE("grid validation") {
  CHECK_THROWS_AS(RadialGrid(100, 1.0), InvalidArgument);
  CHECK_THROWS_AS(RadialGrid(4, 1.0), InvalidArgument);
  CHECK_THROWS_AS(RadialGrid(64, 0.0), InvalidArgument);
  RadialGrid g(64, 8.0);
  CHECK(g.dr() * 64 == 8.0);
  CHECK(g.r(0) == g.dr());
  CHECK(g.r(g.size() - 1) == doctest::Approx(8.0 - g.dr()));
}

TEST_CASE("to_spectral basics") {
  RadialGrid g(256, 10.0);
  SUBCASE("zero field") {
    auto s = to_spectral(RadialField::zeros(g));
    for (auto b : s.coefficients()) CHECK(std::abs(b) == 0.0);
  }
  SUBCASE("first basis element") {
    auto f = RadialField::sample(g, [&](double r) { return std::sin(kPi * r / g.L()) / r; });
    auto s = to_spectral(f);
    CHECK(std::abs(s[0] - 1.0) < 1e-13);
    double rest = 0.0;
    for (std::size_t i = 1; i < s.size(); ++i) rest = std::max(rest, std::abs(s[i]));
    CHECK(rest < 1e-13);
    auto back = from_spectral(s);
    CHECK(rel_l2(back, f) < 1e-13);
  }
  SUBCASE("non-finite input is rejected with its index") {
    std::vector<cplx> v(g.size(), 1.0);
    v[17] = cplx(std::nan(""), 0.0);
    try {
      RadialField bad(g, v);
      FAIL("expected NonFiniteError");
    } catch (const NonFiniteError& e) {
      CHECK(e.index() == 17);
    }
  }
}

TEST_CASE("round trip and Parseval across grid sizes") {
  for (std::size_t n : {256u, 1024u, 2048u, 4096u}) {
    RadialGrid g(n, 20.0);
    auto f = testing::gaussian(g, cplx(1.0, 0.3), 1.0);
    CHECK(rel_l2(from_spectral(to_spectral(f)), f) < 1e-12);

    auto s = testing::random_coefficients(g, 1234 + n);
    auto u = from_spectral(s);
    double coeff = 0.0;
    for (auto b : s.coefficients()) coeff += std::norm(b);
    double quad = 0.0;  // trapezoid of |v|^2 on [0, L]
    for (std::size_t i = 0; i < u.size(); ++i) quad += std::norm(u[i] * g.r(i));
    quad *= g.dr();
    CHECK(std::abs(quad - 0.5 * g.L() * coeff) < 1e-12 * quad);
  }
}

TEST_CASE("Littlewood-Paley bank") {
  RadialGrid g(2048, 16.0);
  const auto bank = LittlewoodPaleyBank::for_grid(g);
  CHECK(std::ldexp(1.0, bank.j_max + 1) <= g.rho_max());
  CHECK(std::ldexp(1.0, bank.j_max + 2) > g.rho_max());

  SUBCASE("telescoping partition holds for every rho") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 1000; ++trial) {
      const double rho = std::ldexp(static_cast<double>(rng() >> 11) * 0x1p-53, 8) + 1e-6;
      double sum = LittlewoodPaleyBank::below(bank.j_min, rho);
      for (int j = bank.j_min; j <= bank.j_max; ++j) sum += LittlewoodPaleyBank::band(j, rho);
      CHECK(std::abs(sum - LittlewoodPaleyBank::below(bank.j_max + 1, rho)) < 1e-14);
    }
  }
  SUBCASE("projection is band-limited and keeps real data real") {
    auto f = testing::gaussian(g, 1.0, 0.3);
    for (int j = -2; j <= 3; ++j) {
      auto p = lp_project(f, j);
      CHECK(p.is_real(1e-15));
      auto s = to_spectral(p);
      double peak = 0.0;
      for (auto b : s.coefficients()) peak = std::max(peak, std::abs(b));
      for (std::size_t i = 0; i < s.size(); ++i) {
        const double rho = g.rho(i);
        if (rho < std::ldexp(1.0, j - 1) || rho > std::ldexp(1.0, j + 1)) {
          CHECK(LittlewoodPaleyBank::band(j, rho) == 0.0);
          CHECK(std::abs(s[i]) < 1e-14 * peak);
        }
      }
    }
  }
  SUBCASE("identity where the multiplier is one") {
    // rho_k = 2^j exactly for k = 2^{j+1} L
    std::vector<cplx> b(g.size());
    b[32 * 1 - 1] = cplx(0.5, -0.25);  // rho = 1, j = 0
    SpectralField s(g, b);
    auto f = from_spectral(s);
    CHECK(rel_l2(lp_project(f, 0), f) < 1e-14);
  }
  SUBCASE("disjoint support gives zero") {
    std::vector<cplx> b(g.size());
    b[0] = 1.0;
    auto f = from_spectral(SpectralField(g, b));
    CHECK(mass(lp_project(f, 3)) < 1e-28 * mass(f));
  }
  SUBCASE("telescoping reconstruction of a Gaussian") {
    auto f = testing::gaussian(g, 1.0, 1.0);
    auto acc = low_pass(f, bank.j_min);
    for (int j = bank.j_min; j <= bank.j_max; ++j) acc += lp_project(f, j);
    CHECK(rel_l2(acc, f) < 1e-10);
  }
  SUBCASE("band above Nyquist names the limit") {
    auto f = testing::gaussian(g, 1.0, 1.0);
    try {
      (void)lp_project(f, bank.j_max + 1);
      FAIL("expected BandError");
    } catch (const BandError& e) {
      CHECK(e.max_band() == bank.j_max);
    }
  }
}

TEST_CASE("Sobolev norms") {
  RadialGrid g(4096, 20.0);
  auto f = testing::gaussian(g, 1.0, 1.0);
  CHECK(sobolev_norm(f, 0.0) == doctest::Approx(std::sqrt(mass(f))).epsilon(1e-13));

  std::vector<cplx> b(g.size());
  b[0] = 1.0;
  auto mode = from_spectral(SpectralField(g, b));
  CHECK(sobolev_norm(mode, 1.0) ==
        doctest::Approx(2.0 * kPi * g.rho(0) * std::sqrt(mass(mode))).epsilon(1e-12));

  // 4 pi int |u'|^2 r^2 dr for e^{-r^2} in closed form
  const double grad_sq = 3.0 * std::pow(kPi, 1.5) / (2.0 * std::sqrt(2.0));
  CHECK(std::abs(sobolev_norm(f, 1.0) - std::sqrt(grad_sq)) < 1e-8);

  double prev = 0.0;
  for (double alpha : {0.0, 0.5, 1.0, 1.5, 2.0}) {
    const double v = sobolev_norm(f, alpha, 1.0);
    CHECK(v >= prev);
    CHECK(v >= sobolev_norm(f, 0.0));
    prev = v;
  }
  CHECK(sobolev_norm(f, -1.0, 1.0) < sobolev_norm(f, 0.0));
}

TEST_CASE("mass and energy of a Gaussian") {
  RadialGrid g(4096, 20.0);
  auto f = testing::gaussian(g, 1.0, 1.0);
  const double exact_mass = std::pow(kPi, 1.5) / (2.0 * std::sqrt(2.0));
  const double exact_kin = 3.0 * std::pow(kPi, 1.5) / (2.0 * std::sqrt(2.0));
  const double exact_quart = std::pow(kPi, 1.5) / 8.0;
  CHECK(std::abs(mass(f) - exact_mass) < 1e-6);
  CHECK(exact_mass == doctest::Approx(1.9687).epsilon(1e-4));
  auto parts = energy_parts(f);
  CHECK(std::abs(parts.kinetic - exact_kin) < 1e-6);
  CHECK(std::abs(parts.quartic - exact_quart) < 1e-6);
  CHECK(parts.energy() == doctest::Approx(2.779).epsilon(1e-3));
  CHECK(mass(RadialField::zeros(g)) == 0.0);
  CHECK(energy(RadialField::zeros(g)) == 0.0);

  // homogeneity with lambda = 2
  auto f2 = f * cplx(2.0);
  CHECK(energy(f2) == doctest::Approx(4.0 * parts.kinetic / 2 - 16.0 * parts.quartic / 4).epsilon(1e-13));

  // error decreases under refinement on coarse grids
  double prev_err = 1.0;
  for (std::size_t n : {32u, 64u, 128u}) {
    RadialGrid gc(n, 20.0);
    const double err = std::abs(energy(testing::gaussian(gc, 1.0, 1.0)) -
                                (0.5 * exact_kin - 0.25 * exact_quart));
    CHECK(err < prev_err);
    prev_err = err;
  }
}

TEST_CASE("radial sup and Gagliardo-Nirenberg ratio") {
  RadialGrid g(4096, 20.0);
  auto f = testing::gaussian(g, 1.0, 1.0);
  CHECK(radial_sup(RadialField::zeros(g)) == 0.0);
  CHECK(std::abs(radial_sup(f) - 1.0 / std::sqrt(2.0 * std::exp(1.0))) < 1e-5);

  const double ratio = gn_ratio(f);
  CHECK(gn_ratio(f * cplx(3.0)) == doctest::Approx(ratio).epsilon(1e-12));
  auto dilated = testing::gaussian(g, 1.0, 2.0);  // e^{-(r/2)^2}
  CHECK(std::abs(gn_ratio(dilated) - ratio) < 1e-6);
  CHECK_THROWS_AS(gn_ratio(RadialField::zeros(g)), InvalidArgument);
}

TEST_CASE("radial Sobolev constant is stable under refinement") {
  auto sweep = [](std::size_t n) {
    RadialGrid g(n, 40.0);
    double worst = 0.0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      auto f = testing::random_bumps(g, seed);
      worst = std::max(worst, radial_sup(f) / sobolev_norm(f, 1.0, 1.0));
    }
    return worst;
  };
  const double coarse = sweep(2048);
  const double fine = sweep(4096);
  CHECK(coarse > 0.0);
  CHECK(std::abs(fine - coarse) < 0.02 * coarse);
  // the sharp radial Sobolev constant is (4 pi)^{-1/2} ~ 0.28 for |u| r <= C ||u||_{H^1}
  CHECK(fine < 0.3);
}

TEST_CASE("ball and exterior integrals") {
  RadialGrid g(4096, 20.0);
  auto f = testing::gaussian(g, 1.0, 1.0);
  auto ur = radial_derivative(f);
  auto dens = modulus_squared(ur);
  // int_{|x|>R} |grad e^{-r^2}|^2 dx = 16 pi int_R^inf r^4 e^{-2r^2} dr
  auto exact = [](double R) {
    const double a = 2.0;
    const double tail = std::exp(-a * R * R) * (R * R * R / (2 * a) + 3 * R / (4 * a * a)) +
                        3 * std::sqrt(kPi) / (8 * std::pow(a, 2.5)) * std::erfc(std::sqrt(a) * R);
    return 16.0 * kPi * tail;
  };
  for (double R : {0.3, 0.5, 1.0, 1.2345, 2.0, 3.0}) {
    CHECK(std::abs(exterior_integral(g, dens, R) - exact(R)) < 1e-6 * exact(0.0));
    CHECK(std::abs(ball_integral(g, dens, R) + exterior_integral(g, dens, R) - exact(0.0)) < 1e-9);
  }
}
