#pragma once

// Thin FFTW wrapper for the two real-to-real kernels the sine basis needs:
// DST-I (RODFT00) on the n-1 interior nodes and DCT-I (REDFT00) on the n+1
// nodes of [0, L].  Plans are created once per size behind a mutex; the
// execute calls are re-entrant.

#include <cstddef>
#include <span>

#include "rnl/field.hpp"

namespace rnl {

class SineTransform {
 public:
  explicit SineTransform(std::size_t n);
  ~SineTransform();
  SineTransform(const SineTransform&) = delete;
  SineTransform& operator=(const SineTransform&) = delete;

  std::size_t n() const noexcept { return n_; }

  /// Coefficients b_k of v on the interior nodes: v_j = sum_k b_k sin(pi j k / n).
  void forward(std::span<const cplx> v, std::span<cplx> b) const;
  void inverse(std::span<const cplx> b, std::span<cplx> v) const;

  /// dv/dr on nodes j = 0..n-1 (includes the origin) for coefficients b on a
  /// domain of length L.
  void derivative(std::span<const cplx> b, double L, std::span<cplx> dv) const;

  /// out_j = sum_{k=1}^{n-1} c_k cos(pi j k / n) for j = 0..n-1.
  void cosine_series(std::span<const cplx> c, std::span<cplx> out) const;

  /// Shared instance for mode count n.
  static const SineTransform& get(std::size_t n);

 private:
  std::size_t n_;
  void* dst_plan_ = nullptr;
  void* dct_plan_ = nullptr;
};

}  // namespace rnl
