#pragma once

// Shared test fixtures: analytic profiles and seeded random data.

#include <cmath>
#include <cstdint>
#include <random>

#include "rnl/field.hpp"
#include "rnl/spectral.hpp"

namespace rnl::testing {

inline double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1p-53; }

/// amplitude * exp(-(r / width)^2)
inline RadialField gaussian(const RadialGrid& g, cplx amplitude, double width) {
  return RadialField::sample(g, [&](double r) { return amplitude * std::exp(-(r / width) * (r / width)); });
}

/// amplitude * exp(-((r - center) / width)^2), real.
inline RadialField shell(const RadialGrid& g, double amplitude, double center, double width) {
  return RadialField::sample(g, [&](double r) {
    const double s = (r - center) / width;
    return cplx(amplitude * std::exp(-s * s));
  });
}

/// Random smooth radial data: a handful of Gaussian shells.
inline RadialField random_bumps(const RadialGrid& g, std::uint64_t seed, double r_lo = 0.0,
                                double r_hi = 8.0) {
  std::mt19937_64 rng(seed);
  std::vector<double> amp(4), ctr(4), wid(4), phase(4);
  for (int b = 0; b < 4; ++b) {
    amp[b] = 0.2 + unit(rng);
    ctr[b] = r_lo + (r_hi - r_lo) * unit(rng);
    wid[b] = 0.7 + 1.5 * unit(rng);
    phase[b] = 2.0 * kPi * unit(rng);
  }
  return RadialField::sample(g, [&](double r) {
    cplx acc = 0.0;
    for (int b = 0; b < 4; ++b) {
      const double s = (r - ctr[b]) / wid[b];
      acc += amp[b] * std::exp(-s * s) * std::polar(1.0, phase[b]);
    }
    return acc;
  });
}

inline SpectralField random_coefficients(const RadialGrid& g, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<cplx> b(g.size());
  for (auto& z : b) z = cplx(unit(rng) - 0.5, unit(rng) - 0.5);
  return SpectralField(g, std::move(b));
}

}  // namespace rnl::testing
