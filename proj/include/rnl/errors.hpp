#pragma once

#include <cstddef>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace rnl {

/// Raised when an argument violates a documented precondition.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A sample or coefficient was NaN or infinite.
class NonFiniteError : public std::runtime_error {
 public:
  NonFiniteError(const std::string& what, std::size_t index)
      : std::runtime_error(what + " (first non-finite entry at index " +
                           std::to_string(index) + ")"),
        index_(index) {}
  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

/// Littlewood-Paley band that the grid cannot represent.
class BandError : public std::out_of_range {
 public:
  BandError(const std::string& what, int max_band)
      : std::out_of_range(what), max_band_(max_band) {}
  int max_band() const noexcept { return max_band_; }

 private:
  int max_band_;
};

/// Field has mass where the operation requires it to vanish.
class SupportError : public std::invalid_argument {
 public:
  SupportError(const std::string& what, double stray_mass)
      : std::invalid_argument(what + " (stray mass fraction " + format(stray_mass) + ")"),
        stray_mass_(stray_mass) {}
  double stray_mass() const noexcept { return stray_mass_; }

 private:
  static std::string format(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", x);
    return buf;
  }
  double stray_mass_;
};

/// Numerical procedure failed to reach its goal (no bracket, under-sampled
/// window, ...).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace rnl
