#include "rnl/sine_transform.hpp"

#include <fftw3.h>

#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "rnl/errors.hpp"

namespace rnl {

namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

// Scratch buffers reused by each thread.
struct Scratch {
  std::vector<double> in, out;
  void reserve(std::size_t m) {
    if (in.size() < m) {
      in.resize(m);
      out.resize(m);
    }
  }
};

Scratch& scratch() {
  thread_local Scratch s;
  return s;
}

}  // namespace

SineTransform::SineTransform(std::size_t n) : n_(n) {
  if (n < 8) throw InvalidArgument("SineTransform: n must be >= 8");
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED | FFTW_PRESERVE_INPUT;
  std::vector<double> a(n + 1), b(n + 1);
  std::lock_guard lock(planner_mutex());
  dst_plan_ = fftw_plan_r2r_1d(static_cast<int>(n - 1), a.data(), b.data(), FFTW_RODFT00, flags);
  dct_plan_ = fftw_plan_r2r_1d(static_cast<int>(n + 1), a.data(), b.data(), FFTW_REDFT00, flags);
  if (dst_plan_ == nullptr || dct_plan_ == nullptr) {
    throw NumericalError("SineTransform: FFTW planning failed");
  }
}

SineTransform::~SineTransform() {
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(dst_plan_));
  fftw_destroy_plan(static_cast<fftw_plan>(dct_plan_));
}

const SineTransform& SineTransform::get(std::size_t n) {
  static std::mutex cache_mutex;
  static std::map<std::size_t, std::unique_ptr<SineTransform>> cache;
  std::lock_guard lock(cache_mutex);
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<SineTransform>(n);
  return *slot;
}

void SineTransform::forward(std::span<const cplx> v, std::span<cplx> b) const {
  const std::size_t m = n_ - 1;
  auto& s = scratch();
  s.reserve(n_ + 1);
  const double scale = 1.0 / static_cast<double>(n_);
  auto plan = static_cast<fftw_plan>(dst_plan_);
  for (int part = 0; part < 2; ++part) {
    for (std::size_t i = 0; i < m; ++i) s.in[i] = part == 0 ? v[i].real() : v[i].imag();
    fftw_execute_r2r(plan, s.in.data(), s.out.data());
    for (std::size_t i = 0; i < m; ++i) {
      if (part == 0) {
        b[i] = cplx(s.out[i] * scale, 0.0);
      } else {
        b[i].imag(s.out[i] * scale);
      }
    }
  }
}

void SineTransform::inverse(std::span<const cplx> b, std::span<cplx> v) const {
  const std::size_t m = n_ - 1;
  auto& s = scratch();
  s.reserve(n_ + 1);
  auto plan = static_cast<fftw_plan>(dst_plan_);
  for (int part = 0; part < 2; ++part) {
    for (std::size_t i = 0; i < m; ++i) s.in[i] = part == 0 ? b[i].real() : b[i].imag();
    fftw_execute_r2r(plan, s.in.data(), s.out.data());
    for (std::size_t i = 0; i < m; ++i) {
      if (part == 0) {
        v[i] = cplx(0.5 * s.out[i], 0.0);
      } else {
        v[i].imag(0.5 * s.out[i]);
      }
    }
  }
}

void SineTransform::cosine_series(std::span<const cplx> c, std::span<cplx> out) const {
  auto& s = scratch();
  s.reserve(n_ + 1);
  auto plan = static_cast<fftw_plan>(dct_plan_);
  for (int part = 0; part < 2; ++part) {
    s.in[0] = 0.0;
    s.in[n_] = 0.0;
    for (std::size_t k = 1; k < n_; ++k) s.in[k] = part == 0 ? c[k - 1].real() : c[k - 1].imag();
    fftw_execute_r2r(plan, s.in.data(), s.out.data());
    for (std::size_t j = 0; j < n_; ++j) {
      if (part == 0) {
        out[j] = cplx(0.5 * s.out[j], 0.0);
      } else {
        out[j].imag(0.5 * s.out[j]);
      }
    }
  }
}

void SineTransform::derivative(std::span<const cplx> b, double L, std::span<cplx> dv) const {
  const double k0 = 3.14159265358979323846 / L;
  std::vector<cplx> scaled(n_ - 1);
  for (std::size_t k = 1; k < n_; ++k) scaled[k - 1] = b[k - 1] * (k0 * static_cast<double>(k));
  cosine_series(scaled, dv);
}

}  // namespace rnl
