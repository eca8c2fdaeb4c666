#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "rnl/errors.hpp"
#include "rnl/inout.hpp"
#include "rnl/spectral.hpp"
#include "test_fields.hpp"

using namespace rnl;

namespace {

const RadialGrid kRingGrid(4096, 128.0);
const RadialGrid kWideGrid(8192, 800.0);

RadialField real_bump(const RadialGrid& g, double center) { return testing::shell(g, 1.0, center, 1.0); }

double max_abs_diff(const RadialField& a, const RadialField& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

}  // namespace

TEST_CASE("odd line transform") {
  const RadialGrid g(1024, 40.0);
  const auto zero = odd_line_transform(RadialField::zeros(g));
  for (const auto& z : zero.values) CHECK(z == cplx(0.0));

  const auto h = testing::random_bumps(g, 3, 5.0, 20.0);
  const auto t = odd_line_transform(h);
  REQUIRE(t.modes == g.size());
  CHECK(t.at(0) == cplx(0.0));
  for (long k = 1; k <= static_cast<long>(t.modes); ++k) CHECK(t.at(-k) == -t.at(k));

  double line = 0.0;
  for (const auto& z : t.values) line += std::norm(z) * t.d_rho;
  double half = 0.0;
  for (std::size_t i = 0; i < h.size(); ++i) half += std::norm(h[i]) * g.dr();
  CHECK(std::abs(line - 2.0 * half) < 1e-10 * line);

  const auto real = odd_line_transform(real_bump(g, 10.0));
  for (const auto& z : real.values) CHECK(z.real() == 0.0);

  const auto back = half_line_synthesis(g, t, 1) + half_line_synthesis(g, t, -1);
  CHECK(max_abs_diff(back, h) < 1e-13);
  CHECK_THROWS_AS(half_line_synthesis(g, t, 0), InvalidArgument);
}

TEST_CASE("split preconditions and the R = 0 case") {
  const RadialGrid g(1024, 40.0);
  const auto inner = testing::gaussian(g, 1.0, 0.3);
  const auto s0 = split_inout(inner, 0.0);
  CHECK(max_abs_diff(s0.f_plus, inner) == 0.0);
  CHECK(mass(s0.f_minus) == 0.0);
  CHECK(mass(s0.f_smooth) == 0.0);

  CHECK_THROWS_AS(split_inout(testing::gaussian(g, 1.0, 2.0), 0.0), SupportError);
  CHECK_THROWS_AS(split_inout(real_bump(g, 20.0), 0.5), InvalidArgument);
  CHECK_THROWS_AS(split_inout(real_bump(g, 20.0), 8.0, 0.0), InvalidArgument);
  CHECK_THROWS_AS(split_inout(real_bump(g, 20.0), 8.0, 1.0), InvalidArgument);
  try {
    split_inout(real_bump(g, 9.0), 8.0);
    FAIL("expected SupportError");
  } catch (const SupportError& e) {
    CHECK(e.stray_mass() > kSupportTolerance);
  }
}

TEST_CASE("reconstruction and conjugation symmetry") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto f = random_exterior_profile(kRingGrid, 8.0, seed);
    const auto s = split_inout(f, 8.0);
    CHECK(s.reconstruction_residual < 1e-10);
    CHECK(s.bands.size() == s.transforms.size());
  }
  const auto real = real_bump(kRingGrid, 24.0);
  const auto s = split_inout(real, 8.0);
  CHECK(max_abs_diff(s.f_minus, s.f_plus.conj()) < 1e-12);
  CHECK(s.f_smooth.is_real(1e-14));
  CHECK(s.reconstruction_residual < 1e-10);
}

TEST_CASE("L2 bound constants over a random exterior corpus") {
  struct Bounds {
    double plus = 0, minus = 0, smooth = 0, gradient = 0;
  };
  std::vector<Bounds> per_R;
  for (double R : {8.0, 16.0, 32.0}) {
    Bounds b;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
      const auto s = split_inout(random_exterior_profile(kWideGrid, R, seed), R);
      CHECK(s.reconstruction_residual < 1e-10);
      b.plus = std::max(b.plus, s.plus_bound);
      b.minus = std::max(b.minus, s.minus_bound);
      b.smooth = std::max(b.smooth, s.smooth_bound);
      b.gradient = std::max(b.gradient, s.smooth_gradient_bound);
    }
    per_R.push_back(b);
  }
  for (const auto& b : per_R) {
    CHECK(std::abs(b.plus / per_R[0].plus - 1.0) < 0.2);
    CHECK(std::abs(b.minus / per_R[0].minus - 1.0) < 0.2);
    CHECK(std::abs(b.smooth / per_R[0].smooth - 1.0) < 0.2);
  }
  // ||grad f_smooth|| <~ R^{delta - 1} ||f||
  CHECK(per_R[1].gradient < per_R[0].gradient);
  CHECK(per_R[2].gradient < per_R[1].gradient);
  for (std::size_t i = 0; i < per_R.size(); ++i) {
    const double R = 8.0 * std::pow(2.0, static_cast<double>(i));
    CHECK(per_R[i].gradient * std::pow(R, 0.9) < 2.0 * per_R[0].gradient * std::pow(8.0, 0.9));
  }
}

TEST_CASE("outgoing data stays away from the origin in forward time") {
  const auto zero = split_inout(RadialField::zeros(kRingGrid), 8.0);
  const auto z = outgoing_escape_metric(zero, 1.0);
  CHECK(z.plus_value == 0.0);
  CHECK(z.minus_value == 0.0);

  std::vector<double> ratios;
  for (double R : {8.0, 16.0}) {
    const auto s = split_inout(ring_profile(kRingGrid, 1.5 * R, 1.0, 1.0), R);
    const auto e = outgoing_escape_metric(s, R / 4.0);
    CHECK_FALSE(e.wall_flag);
    CHECK(e.plus_ratio() < 0.1);
    ratios.push_back(e.plus_ratio());
  }
  CHECK(ratios[1] < ratios[0]);
  CHECK_THROWS_AS(outgoing_escape_metric(zero, 0.0), InvalidArgument);
}

TEST_CASE("incoming pairing") {
  const auto u0 = testing::gaussian(kWideGrid, 1.0, 1.0);
  const std::vector<double> times{1, 2, 4, 8, 16, 32, 64};

  const auto none = incoming_pairing(u0, split_inout(testing::gaussian(kWideGrid, 1.0, 0.3), 0.0), times);
  for (const auto& v : none.values) CHECK(v == cplx(0.0));

  const auto f = real_bump(kWideGrid, 24.0);
  const auto p = incoming_pairing(u0, split_inout(f, 8.0), times);
  CHECK_FALSE(p.wall_flag);
  CHECK(std::abs(p.values.back()) < 0.1 * std::abs(p.values.front()));

  const auto p2 = incoming_pairing(u0, split_inout(f * cplx(2.0), 8.0), times);
  for (std::size_t i = 0; i < times.size(); ++i) CHECK(std::abs(p2.values[i] - 2.0 * p.values[i]) < 1e-12 * std::abs(p.values[i]));
  const auto pi = incoming_pairing(u0, split_inout(f * cplx(0.0, 1.0), 8.0), times);
  for (std::size_t i = 0; i < times.size(); ++i) CHECK(std::abs(pi.values[i] - cplx(0.0, -1.0) * p.values[i]) < 1e-12 * std::abs(p.values[i]));
}

TEST_CASE("local smoothing") {
  const auto zero = split_inout(RadialField::zeros(kRingGrid), 8.0);
  CHECK(local_smoothing_metric(zero, 0.0, 2.0).plus_value == 0.0);
  CHECK_THROWS_AS(local_smoothing_metric(zero, -1.0, 2.0), InvalidArgument);

  std::vector<double> ratios;
  for (double R : {8.0, 16.0}) {
    const auto s = split_inout(ring_profile(kRingGrid, 1.5 * R, 1.0, 1.0), R);
    const auto m = local_smoothing_metric(s, 0.0, 4.0);
    CHECK_FALSE(m.wall_flag);
    CHECK(std::isfinite(m.ratio()));
    CHECK(m.ratio() > 0.0);
    ratios.push_back(m.ratio());
  }
  CHECK(ratios[1] < ratios[0]);

  // equal incoming and outgoing mass: the incoming half is smoothed far less
  const auto s = split_inout(real_bump(kRingGrid, 24.0), 8.0);
  const auto m = local_smoothing_metric(s, 0.0, 4.0);
  CHECK(m.minus_forward >= 3.0 * m.plus_value);
}
