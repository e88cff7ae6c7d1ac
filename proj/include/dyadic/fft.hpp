#pragma once

// Thin FFTW wrapper. Plans are created once per (shape, direction) and cached
// behind a mutex; execution uses the new-array interface so concurrent
// callers never share a workspace.

#include <fftw3.h>

#include <complex>
#include <cstddef>
#include <map>
#include <mutex>
#include <tuple>
#include <vector>

#include "dyadic/error.hpp"

namespace dyadic::fft {

using cplx = std::complex<double>;

enum class direction : int { forward = FFTW_FORWARD, backward = FFTW_BACKWARD };

namespace detail {

class plan_cache {
 public:
  static plan_cache& instance() {
    static plan_cache cache;
    return cache;
  }

  fftw_plan get(std::size_t rows, std::size_t cols, direction dir) {
    std::lock_guard<std::mutex> lock(mutex_);
    auto key = std::make_tuple(rows, cols, static_cast<int>(dir));
    auto it = plans_.find(key);
    if (it != plans_.end()) return it->second;
    std::vector<cplx> in(rows * cols), out(rows * cols);
    auto* pin = reinterpret_cast<fftw_complex*>(in.data());
    auto* pout = reinterpret_cast<fftw_complex*>(out.data());
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    fftw_plan p = rows == 1
        ? fftw_plan_dft_1d(static_cast<int>(cols), pin, pout, static_cast<int>(dir), flags)
        : fftw_plan_dft_2d(static_cast<int>(rows), static_cast<int>(cols), pin, pout,
                           static_cast<int>(dir), flags);
    if (!p) throw error(errc::unsupported, "fftw could not create a plan");
    plans_.emplace(key, p);
    return p;
  }

  ~plan_cache() {
    for (auto& [k, p] : plans_) fftw_destroy_plan(p);
  }

 private:
  plan_cache() = default;
  std::mutex mutex_;
  std::map<std::tuple<std::size_t, std::size_t, int>, fftw_plan> plans_;
};

}  // namespace detail

/// Unnormalized DFT of a length-n sequence, in place.
inline void transform_1d(std::vector<cplx>& data, direction dir) {
  if (data.empty()) return;
  fftw_plan p = detail::plan_cache::instance().get(1, data.size(), dir);
  std::vector<cplx> out(data.size());
  fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(data.data()),
                   reinterpret_cast<fftw_complex*>(out.data()));
  data.swap(out);
}

/// Unnormalized row-major 2D DFT of an n x n array, in place.
inline void transform_2d(std::vector<cplx>& data, std::size_t n, direction dir) {
  if (data.size() != n * n) throw error(errc::invalid_argument, "2d transform size");
  fftw_plan p = detail::plan_cache::instance().get(n, n, dir);
  std::vector<cplx> out(data.size());
  fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(data.data()),
                   reinterpret_cast<fftw_complex*>(out.data()));
  data.swap(out);
}

}  // namespace dyadic::fft
