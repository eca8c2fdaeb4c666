#pragma once

// Radial grid and the two field representations used throughout the library.
//
// A spherically symmetric function u(|x|) on R^3 is stored through its
// samples on the interior nodes r_k = k*dr, k = 1..n-1, of [0, L].  The
// auxiliary profile v(r) = r*u(r) vanishes at both ends, so v has an exact
// sine expansion v(r) = sum_k b_k sin(pi k r / L); the radial Laplacian acts
// on v as d^2/dr^2 and is therefore diagonal in that basis.

#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace rnl {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

class RadialGrid {
 public:
  /// n must be a power of two, at least 8; L > 0.
  RadialGrid(std::size_t n, double L);

  std::size_t n() const noexcept { return n_; }
  double L() const noexcept { return L_; }
  double dr() const noexcept { return dr_; }

  /// Number of interior nodes (n - 1).
  std::size_t size() const noexcept { return n_ - 1; }

  /// Radius of interior node i (i = 0..n-2 maps to k = 1..n-1).
  double r(std::size_t i) const noexcept { return static_cast<double>(i + 1) * dr_; }

  /// Frequency rho_k = k / (2L) of sine mode i (k = i + 1), in the
  /// e^{2 pi i rho r} convention.
  double rho(std::size_t i) const noexcept {
    return static_cast<double>(i + 1) / (2.0 * L_);
  }

  /// Angular wavenumber pi k / L = 2 pi rho_k; -Laplacian eigenvalue is its square.
  double wavenumber(std::size_t i) const noexcept {
    return kPi * static_cast<double>(i + 1) / L_;
  }

  /// Largest representable frequency rho_{n-1}.
  double rho_max() const noexcept { return rho(size() - 1); }

  std::vector<double> nodes() const;

  friend bool operator==(const RadialGrid& a, const RadialGrid& b) noexcept {
    return a.n_ == b.n_ && a.L_ == b.L_;
  }

 private:
  std::size_t n_;
  double L_;
  double dr_;
};

/// Samples u(r_k) of a radial profile on the interior nodes of a grid.
class RadialField {
 public:
  /// Throws NonFiniteError on NaN/Inf and InvalidArgument on a size mismatch.
  RadialField(RadialGrid grid, std::vector<cplx> values);

  static RadialField zeros(const RadialGrid& grid);
  static RadialField sample(const RadialGrid& grid,
                            const std::function<cplx(double)>& profile);

  const RadialGrid& grid() const noexcept { return grid_; }
  std::span<const cplx> values() const noexcept { return values_; }
  const cplx& operator[](std::size_t i) const noexcept { return values_[i]; }
  std::size_t size() const noexcept { return values_.size(); }

  RadialField conj() const;
  bool is_real(double tol = 0.0) const;

  RadialField& operator+=(const RadialField& other);
  RadialField& operator-=(const RadialField& other);
  RadialField& operator*=(cplx scale);

  friend RadialField operator+(RadialField a, const RadialField& b) { return a += b; }
  friend RadialField operator-(RadialField a, const RadialField& b) { return a -= b; }
  friend RadialField operator*(RadialField a, cplx s) { return a *= s; }
  friend RadialField operator*(cplx s, RadialField a) { return a *= s; }

 private:
  RadialGrid grid_;
  std::vector<cplx> values_;
};

/// Sine-series coefficients b_k, k = 1..n-1, of v(r) = r u(r).
class SpectralField {
 public:
  SpectralField(RadialGrid grid, std::vector<cplx> coefficients);

  const RadialGrid& grid() const noexcept { return grid_; }
  std::span<const cplx> coefficients() const noexcept { return coefficients_; }
  const cplx& operator[](std::size_t i) const noexcept { return coefficients_[i]; }
  std::size_t size() const noexcept { return coefficients_.size(); }

 private:
  RadialGrid grid_;
  std::vector<cplx> coefficients_;
};

/// The cutoff profile: 1 on [0, 1/2], 0 on [1, inf), cos^2 ramp between.
double cutoff_profile(double s) noexcept;
double cutoff_profile_derivative(double s) noexcept;

/// eta_R(x) = psi(|x| / R).
struct CutoffSpec {
  double R;

  explicit CutoffSpec(double radius);
  double operator()(double r) const noexcept { return cutoff_profile(r / R); }
  double derivative(double r) const noexcept {
    return cutoff_profile_derivative(r / R) / R;
  }
};

/// Japanese bracket <r> = (1 + r^2)^{1/2}.
inline double bracket(double r) noexcept { return std::sqrt(1.0 + r * r); }

/// Pointwise multiplication of a field by a real radial weight.
RadialField multiply(const RadialField& f, const std::function<double(double)>& weight);

}  // namespace rnl
