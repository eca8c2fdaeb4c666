#include "rnl/field.hpp"

#include <bit>
#include <cmath>

#include "rnl/errors.hpp"

namespace rnl {

namespace {

void require_finite(std::span<const cplx> data, const char* what) {
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (!std::isfinite(data[i].real()) || !std::isfinite(data[i].imag())) {
      throw NonFiniteError(what, i);
    }
  }
}

}  // namespace

RadialGrid::RadialGrid(std::size_t n, double L) : n_(n), L_(L), dr_(L / static_cast<double>(n)) {
  if (n < 8 || !std::has_single_bit(n)) {
    throw InvalidArgument("RadialGrid: n must be a power of two >= 8, got " + std::to_string(n));
  }
  if (!(L > 0.0) || !std::isfinite(L)) {
    throw InvalidArgument("RadialGrid: L must be positive and finite");
  }
}

std::vector<double> RadialGrid::nodes() const {
  std::vector<double> out(size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = r(i);
  return out;
}

RadialField::RadialField(RadialGrid grid, std::vector<cplx> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size()) {
    throw InvalidArgument("RadialField: expected " + std::to_string(grid_.size()) +
                          " samples, got " + std::to_string(values_.size()));
  }
  require_finite(values_, "RadialField: non-finite sample");
}

RadialField RadialField::zeros(const RadialGrid& grid) {
  return RadialField(grid, std::vector<cplx>(grid.size()));
}

RadialField RadialField::sample(const RadialGrid& grid,
                                const std::function<cplx(double)>& profile) {
  std::vector<cplx> v(grid.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = profile(grid.r(i));
  return RadialField(grid, std::move(v));
}

RadialField RadialField::conj() const {
  RadialField out = *this;
  for (auto& z : out.values_) z = std::conj(z);
  return out;
}

bool RadialField::is_real(double tol) const {
  for (const auto& z : values_) {
    if (std::abs(z.imag()) > tol) return false;
  }
  return true;
}

RadialField& RadialField::operator+=(const RadialField& other) {
  if (!(grid_ == other.grid_)) throw InvalidArgument("RadialField: grid mismatch");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
  return *this;
}

RadialField& RadialField::operator-=(const RadialField& other) {
  if (!(grid_ == other.grid_)) throw InvalidArgument("RadialField: grid mismatch");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
  return *this;
}

RadialField& RadialField::operator*=(cplx scale) {
  for (auto& z : values_) z *= scale;
  require_finite(values_, "RadialField: non-finite after scaling");
  return *this;
}

SpectralField::SpectralField(RadialGrid grid, std::vector<cplx> coefficients)
    : grid_(grid), coefficients_(std::move(coefficients)) {
  if (coefficients_.size() != grid_.size()) {
    throw InvalidArgument("SpectralField: expected " + std::to_string(grid_.size()) +
                          " coefficients, got " + std::to_string(coefficients_.size()));
  }
  require_finite(coefficients_, "SpectralField: non-finite coefficient");
}

double cutoff_profile(double s) noexcept {
  if (s <= 0.5) return 1.0;
  if (s >= 1.0) return 0.0;
  const double c = std::cos(kPi * (s - 0.5));
  return c * c;
}

double cutoff_profile_derivative(double s) noexcept {
  if (s <= 0.5 || s >= 1.0) return 0.0;
  return -kPi * std::sin(2.0 * kPi * (s - 0.5));
}

CutoffSpec::CutoffSpec(double radius) : R(radius) {
  if (!(radius > 0.0)) throw InvalidArgument("CutoffSpec: radius must be positive");
}

RadialField multiply(const RadialField& f, const std::function<double(double)>& weight) {
  std::vector<cplx> out(f.values().begin(), f.values().end());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= weight(f.grid().r(i));
  return RadialField(f.grid(), std::move(out));
}

}  // namespace rnl
