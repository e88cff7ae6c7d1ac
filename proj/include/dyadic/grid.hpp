#pragma once

// Periodic band-limited functions on uniform grids in one and two
// dimensions.
//
// A grid of period L with M samples (M a power of two) has sample points
//   x_i = x0 + (i - M/2) h,   h = L / M,   i = 0..M-1
// and frequency set {m / L : m in [-M/2, M/2)}. Spectra are stored in
// centered order, index j <-> m = j - M/2.
//
// Transform convention (continuum Fourier transform approximated by a
// Riemann sum):
//   c_m  = h   * sum_i f(x_i) exp(-2 pi i x_i m / L)
//   f(x) = 1/L * sum_m c_m   exp( 2 pi i x   m / L)
// so a character exp(2 pi i x m0/L) has coefficient L at m0 and Parseval
// reads h * sum |f_i|^2 = 1/L * sum |c_m|^2.
//
// The aliasing model: a function stored on [x0 - L/2, x0 + L/2) stands for
// its periodization. Continuum quantities (L^1 norms, dilations, D_lambda)
// are exact only when the function has decayed at the boundary, so callers
// pick L accordingly.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <numbers>
#include <vector>

#include "dyadic/error.hpp"
#include "dyadic/fft.hpp"

namespace dyadic {

using cplx = std::complex<double>;
inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

inline bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

inline int ilog2(std::size_t n) {
  int k = 0;
  while ((std::size_t{1} << (k + 1)) <= n) ++k;
  return k;
}

/// exp(2 pi i t) with t reduced to [0, 1) first.
inline cplx unit_turns(double t) {
  t -= std::floor(t);
  return std::polar(1.0, two_pi * t);
}

struct Grid1D {
  double L = 1.0;
  std::size_t M = 2;
  double x0 = 0.0;

  Grid1D() = default;
  Grid1D(double period, std::size_t samples, double origin = 0.0)
      : L(period), M(samples), x0(origin) {
    if (!(L > 0.0) || !std::isfinite(L))
      throw error(errc::invalid_argument, "grid period must be positive");
    if (!is_pow2(M) || M < 2)
      throw error(errc::invalid_argument, "grid sample count must be a power of two >= 2");
  }

  double h() const { return L / static_cast<double>(M); }
  double x(std::size_t i) const {
    return x0 + (static_cast<double>(i) - static_cast<double>(M / 2)) * h();
  }
  long long m_of(std::size_t j) const {
    return static_cast<long long>(j) - static_cast<long long>(M / 2);
  }
  std::size_t j_of(long long m) const { return static_cast<std::size_t>(m + static_cast<long long>(M / 2)); }
  bool has_m(long long m) const {
    return m >= -static_cast<long long>(M / 2) && m < static_cast<long long>(M / 2);
  }
  double xi(long long m) const { return static_cast<double>(m) / L; }
  double nyquist() const { return static_cast<double>(M) / (2.0 * L); }

  bool same_shape(const Grid1D& o) const { return L == o.L && M == o.M; }
  bool operator==(const Grid1D& o) const { return L == o.L && M == o.M && x0 == o.x0; }
};

struct Grid2D {
  double L = 1.0;
  std::size_t M = 2;
  double x0 = 0.0;
  double y0 = 0.0;

  Grid2D() = default;
  Grid2D(double period, std::size_t samples, double origin1 = 0.0, double origin2 = 0.0)
      : L(period), M(samples), x0(origin1), y0(origin2) {
    if (!(L > 0.0) || !std::isfinite(L))
      throw error(errc::invalid_argument, "grid period must be positive");
    if (!is_pow2(M) || M < 2)
      throw error(errc::invalid_argument, "grid sample count must be a power of two >= 2");
  }

  Grid1D axis(int which) const { return Grid1D(L, M, which == 0 ? x0 : y0); }
  double h() const { return L / static_cast<double>(M); }
  double y1(std::size_t i) const {
    return x0 + (static_cast<double>(i) - static_cast<double>(M / 2)) * h();
  }
  double y2(std::size_t i) const {
    return y0 + (static_cast<double>(i) - static_cast<double>(M / 2)) * h();
  }
  long long m_of(std::size_t j) const {
    return static_cast<long long>(j) - static_cast<long long>(M / 2);
  }
  std::size_t index(std::size_t i1, std::size_t i2) const { return i1 * M + i2; }
  double nyquist() const { return static_cast<double>(M) / (2.0 * L); }

  bool same_shape(const Grid2D& o) const { return L == o.L && M == o.M; }
  bool operator==(const Grid2D& o) const {
    return L == o.L && M == o.M && x0 == o.x0 && y0 == o.y0;
  }
};

struct SampledFunction1D {
  Grid1D grid;
  std::vector<cplx> values;

  SampledFunction1D() = default;
  explicit SampledFunction1D(const Grid1D& g) : grid(g), values(g.M) {}
  SampledFunction1D(const Grid1D& g, std::vector<cplx> v) : grid(g), values(std::move(v)) {
    if (values.size() != grid.M) throw error(errc::invalid_argument, "sample count does not match grid");
  }
};

struct Spectrum1D {
  Grid1D grid;
  std::vector<cplx> coeffs;  // centered

  Spectrum1D() = default;
  explicit Spectrum1D(const Grid1D& g) : grid(g), coeffs(g.M) {}
  Spectrum1D(const Grid1D& g, std::vector<cplx> c) : grid(g), coeffs(std::move(c)) {
    if (coeffs.size() != grid.M) throw error(errc::invalid_argument, "coefficient count does not match grid");
  }

  cplx at(long long m) const { return grid.has_m(m) ? coeffs[grid.j_of(m)] : cplx{}; }
};

struct SampledFunction2D {
  Grid2D grid;
  std::vector<cplx> values;  // row-major, first index along y1

  SampledFunction2D() = default;
  explicit SampledFunction2D(const Grid2D& g) : grid(g), values(g.M * g.M) {}
  SampledFunction2D(const Grid2D& g, std::vector<cplx> v) : grid(g), values(std::move(v)) {
    if (values.size() != grid.M * grid.M)
      throw error(errc::invalid_argument, "sample count does not match grid");
  }

  cplx& operator()(std::size_t i1, std::size_t i2) { return values[i1 * grid.M + i2]; }
  const cplx& operator()(std::size_t i1, std::size_t i2) const { return values[i1 * grid.M + i2]; }
};

struct Spectrum2D {
  Grid2D grid;
  std::vector<cplx> coeffs;  // centered on both axes, row-major

  Spectrum2D() = default;
  explicit Spectrum2D(const Grid2D& g) : grid(g), coeffs(g.M * g.M) {}
  Spectrum2D(const Grid2D& g, std::vector<cplx> c) : grid(g), coeffs(std::move(c)) {
    if (coeffs.size() != grid.M * grid.M)
      throw error(errc::invalid_argument, "coefficient count does not match grid");
  }

  cplx& operator()(std::size_t j1, std::size_t j2) { return coeffs[j1 * grid.M + j2]; }
  const cplx& operator()(std::size_t j1, std::size_t j2) const { return coeffs[j1 * grid.M + j2]; }
};

namespace detail {

inline double parity(long long m) { return (m & 1) ? -1.0 : 1.0; }

inline cplx origin_phase(double origin, double L, long long m, double sign) {
  if (origin == 0.0) return {1.0, 0.0};
  const double r = std::fmod(origin, L) / L;
  return unit_turns(sign * r * static_cast<double>(m));
}

inline std::size_t wrap(long long m, std::size_t M) {
  const long long Ml = static_cast<long long>(M);
  return static_cast<std::size_t>(((m % Ml) + Ml) % Ml);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Transforms

inline Spectrum1D forward_transform(const SampledFunction1D& f) {
  const auto& g = f.grid;
  std::vector<cplx> buf = f.values;
  fft::transform_1d(buf, fft::direction::forward);
  Spectrum1D out(g);
  const double h = g.h();
  for (std::size_t j = 0; j < g.M; ++j) {
    const long long m = g.m_of(j);
    out.coeffs[j] = h * detail::parity(m) * detail::origin_phase(g.x0, g.L, m, -1.0) *
                    buf[detail::wrap(m, g.M)];
  }
  return out;
}

inline SampledFunction1D inverse_transform(const Spectrum1D& s) {
  const auto& g = s.grid;
  std::vector<cplx> buf(g.M);
  for (std::size_t j = 0; j < g.M; ++j) {
    const long long m = g.m_of(j);
    buf[detail::wrap(m, g.M)] =
        s.coeffs[j] * detail::parity(m) * detail::origin_phase(g.x0, g.L, m, 1.0);
  }
  fft::transform_1d(buf, fft::direction::backward);
  const double inv_L = 1.0 / g.L;
  for (auto& v : buf) v *= inv_L;
  return SampledFunction1D(g, std::move(buf));
}

inline Spectrum2D forward_transform(const SampledFunction2D& f) {
  const auto& g = f.grid;
  const std::size_t M = g.M;
  std::vector<cplx> buf = f.values;
  fft::transform_2d(buf, M, fft::direction::forward);
  Spectrum2D out(g);
  const double h2 = g.h() * g.h();
  for (std::size_t j1 = 0; j1 < M; ++j1) {
    const long long m1 = g.m_of(j1);
    const cplx p1 = detail::parity(m1) * detail::origin_phase(g.x0, g.L, m1, -1.0);
    const std::size_t w1 = detail::wrap(m1, M);
    for (std::size_t j2 = 0; j2 < M; ++j2) {
      const long long m2 = g.m_of(j2);
      const cplx p2 = detail::parity(m2) * detail::origin_phase(g.y0, g.L, m2, -1.0);
      out(j1, j2) = h2 * p1 * p2 * buf[w1 * M + detail::wrap(m2, M)];
    }
  }
  return out;
}

inline SampledFunction2D inverse_transform(const Spectrum2D& s) {
  const auto& g = s.grid;
  const std::size_t M = g.M;
  std::vector<cplx> buf(M * M);
  for (std::size_t j1 = 0; j1 < M; ++j1) {
    const long long m1 = g.m_of(j1);
    const cplx p1 = detail::parity(m1) * detail::origin_phase(g.x0, g.L, m1, 1.0);
    const std::size_t w1 = detail::wrap(m1, M);
    for (std::size_t j2 = 0; j2 < M; ++j2) {
      const long long m2 = g.m_of(j2);
      const cplx p2 = detail::parity(m2) * detail::origin_phase(g.y0, g.L, m2, 1.0);
      buf[w1 * M + detail::wrap(m2, M)] = s(j1, j2) * p1 * p2;
    }
  }
  fft::transform_2d(buf, M, fft::direction::backward);
  const double inv = 1.0 / (g.L * g.L);
  for (auto& v : buf) v *= inv;
  return SampledFunction2D(g, std::move(buf));
}

// ---------------------------------------------------------------------------
// Construction helpers

/// Samples a spatial function on the grid.
inline SampledFunction1D sample(const Grid1D& g, const std::function<cplx(double)>& fn) {
  SampledFunction1D f(g);
  for (std::size_t i = 0; i < g.M; ++i) f.values[i] = fn(g.x(i));
  return f;
}

inline SampledFunction2D sample(const Grid2D& g, const std::function<cplx(double, double)>& fn) {
  SampledFunction2D f(g);
  for (std::size_t i1 = 0; i1 < g.M; ++i1)
    for (std::size_t i2 = 0; i2 < g.M; ++i2) f(i1, i2) = fn(g.y1(i1), g.y2(i2));
  return f;
}

/// Spectrum whose coefficients are a continuum Fourier transform evaluated
/// at the grid frequencies.
inline Spectrum1D spectrum_from(const Grid1D& g, const std::function<cplx(double)>& fhat) {
  Spectrum1D s(g);
  for (std::size_t j = 0; j < g.M; ++j) s.coeffs[j] = fhat(g.xi(g.m_of(j)));
  return s;
}

inline Spectrum2D spectrum_from(const Grid2D& g,
                                const std::function<cplx(double, double)>& fhat) {
  Spectrum2D s(g);
  for (std::size_t j1 = 0; j1 < g.M; ++j1) {
    const double xi1 = static_cast<double>(g.m_of(j1)) / g.L;
    for (std::size_t j2 = 0; j2 < g.M; ++j2)
      s(j1, j2) = fhat(xi1, static_cast<double>(g.m_of(j2)) / g.L);
  }
  return s;
}

/// Band-limited function with the given Fourier transform.
inline SampledFunction1D from_fourier(const Grid1D& g, const std::function<cplx(double)>& fhat) {
  return inverse_transform(spectrum_from(g, fhat));
}

inline SampledFunction2D from_fourier(const Grid2D& g,
                                      const std::function<cplx(double, double)>& fhat) {
  return inverse_transform(spectrum_from(g, fhat));
}

// ---------------------------------------------------------------------------
// Pointwise evaluation off the grid

/// Trigonometric interpolant at an arbitrary point.
inline cplx evaluate(const Spectrum1D& s, double x) {
  cplx acc{};
  const double r = x / s.grid.L;
  for (std::size_t j = 0; j < s.grid.M; ++j) {
    if (s.coeffs[j] == cplx{}) continue;
    acc += s.coeffs[j] * unit_turns(r * static_cast<double>(s.grid.m_of(j)));
  }
  return acc / s.grid.L;
}

/// Continuum Fourier transform of the samples, read as a compactly supported
/// function on the fundamental domain (Riemann sum at an arbitrary xi).
inline cplx fourier_at(const SampledFunction1D& f, double xi) {
  cplx acc{};
  for (std::size_t i = 0; i < f.grid.M; ++i) acc += f.values[i] * unit_turns(-f.grid.x(i) * xi);
  return acc * f.grid.h();
}

inline cplx fourier_at(const SampledFunction2D& f, double xi1, double xi2) {
  const auto& g = f.grid;
  std::vector<cplx> e2(g.M);
  for (std::size_t i2 = 0; i2 < g.M; ++i2) e2[i2] = unit_turns(-g.y2(i2) * xi2);
  cplx acc{};
  for (std::size_t i1 = 0; i1 < g.M; ++i1) {
    cplx row{};
    for (std::size_t i2 = 0; i2 < g.M; ++i2) row += f(i1, i2) * e2[i2];
    acc += row * unit_turns(-g.y1(i1) * xi1);
  }
  return acc * g.h() * g.h();
}

// ---------------------------------------------------------------------------
// Convolution

inline SampledFunction1D convolve(const SampledFunction1D& f, const SampledFunction1D& g) {
  if (!f.grid.same_shape(g.grid))
    throw error(errc::grid_mismatch, "convolve requires identical period and sample count");
  Spectrum1D a = forward_transform(f);
  const Spectrum1D b = forward_transform(g);
  for (std::size_t j = 0; j < a.coeffs.size(); ++j) a.coeffs[j] *= b.coeffs[j];
  a.grid.x0 = f.grid.x0 + g.grid.x0;
  return inverse_transform(a);
}

inline SampledFunction2D convolve(const SampledFunction2D& f, const SampledFunction2D& g) {
  if (!f.grid.same_shape(g.grid))
    throw error(errc::grid_mismatch, "convolve requires identical period and sample count");
  Spectrum2D a = forward_transform(f);
  const Spectrum2D b = forward_transform(g);
  for (std::size_t j = 0; j < a.coeffs.size(); ++j) a.coeffs[j] *= b.coeffs[j];
  a.grid.x0 = f.grid.x0 + g.grid.x0;
  a.grid.y0 = f.grid.y0 + g.grid.y0;
  return inverse_transform(a);
}

// ---------------------------------------------------------------------------
// Dyadic dilation h_j = 2^{jn} h(2^j .), i.e. hhat_j(xi) = hhat(2^{-j} xi).
//
// j < 0 compresses the spectrum: exact index map m -> 2^{|j|} m.
// j > 0 spreads the spectrum: the continuum transform is read off a grid
// zero-padded by 2^j (h treated as supported on the fundamental domain),
// after checking that the spread support stays below Nyquist.

inline constexpr double nyquist_tolerance = 1e-10;
inline constexpr std::size_t max_padded_samples = std::size_t{1} << 26;

namespace detail {

inline void require_centered(double origin) {
  if (origin != 0.0) throw error(errc::invalid_argument, "dyadic dilation requires a grid centered at 0");
}

}  // namespace detail

inline SampledFunction1D dyadic_dilate(const SampledFunction1D& f, int j) {
  const auto& g = f.grid;
  detail::require_centered(g.x0);
  if (j == 0) return f;
  const Spectrum1D s = forward_transform(f);
  Spectrum1D out(g);
  if (j < 0) {
    const long long step = 1LL << (-j);
    for (std::size_t jj = 0; jj < g.M; ++jj) out.coeffs[jj] = s.at(g.m_of(jj) * step);
    return inverse_transform(out);
  }
  const long long limit = static_cast<long long>(g.M >> (j + 1));
  double peak = 0.0, outside = 0.0;
  for (std::size_t jj = 0; jj < g.M; ++jj) {
    const double a = std::abs(s.coeffs[jj]);
    peak = std::max(peak, a);
    if (std::llabs(g.m_of(jj)) >= limit) outside = std::max(outside, a);
  }
  if (limit == 0 || outside > nyquist_tolerance * peak)
    throw error(errc::nyquist_violation, "dilated spectrum would leave the grid band");
  const std::size_t P = g.M << j;
  if (P > max_padded_samples) throw error(errc::infeasible, "dilation padding too large");
  const Grid1D pg(g.L * static_cast<double>(1u << j), P);
  SampledFunction1D padded(pg);
  for (std::size_t i = 0; i < g.M; ++i) padded.values[P / 2 - g.M / 2 + i] = f.values[i];
  const Spectrum1D ps = forward_transform(padded);
  for (std::size_t jj = 0; jj < g.M; ++jj) out.coeffs[jj] = ps.at(g.m_of(jj));
  return inverse_transform(out);
}

inline SampledFunction2D dyadic_dilate(const SampledFunction2D& f, int j) {
  const auto& g = f.grid;
  detail::require_centered(g.x0);
  detail::require_centered(g.y0);
  if (j == 0) return f;
  const Spectrum2D s = forward_transform(f);
  Spectrum2D out(g);
  const long long half = static_cast<long long>(g.M / 2);
  if (j < 0) {
    const long long step = 1LL << (-j);
    for (std::size_t j1 = 0; j1 < g.M; ++j1) {
      const long long a = g.m_of(j1) * step;
      if (a < -half || a >= half) continue;
      for (std::size_t j2 = 0; j2 < g.M; ++j2) {
        const long long b = g.m_of(j2) * step;
        if (b < -half || b >= half) continue;
        out(j1, j2) = s(static_cast<std::size_t>(a + half), static_cast<std::size_t>(b + half));
      }
    }
    return inverse_transform(out);
  }
  const long long limit = static_cast<long long>(g.M >> (j + 1));
  double peak = 0.0, outside = 0.0;
  for (std::size_t j1 = 0; j1 < g.M; ++j1)
    for (std::size_t j2 = 0; j2 < g.M; ++j2) {
      const double a = std::abs(s(j1, j2));
      peak = std::max(peak, a);
      if (std::llabs(g.m_of(j1)) >= limit || std::llabs(g.m_of(j2)) >= limit)
        outside = std::max(outside, a);
    }
  if (limit == 0 || outside > nyquist_tolerance * peak)
    throw error(errc::nyquist_violation, "dilated spectrum would leave the grid band");
  const std::size_t P = g.M << j;
  if (P * P > max_padded_samples) throw error(errc::infeasible, "dilation padding too large");
  const Grid2D pg(g.L * static_cast<double>(1u << j), P);
  SampledFunction2D padded(pg);
  const std::size_t off = P / 2 - g.M / 2;
  for (std::size_t i1 = 0; i1 < g.M; ++i1)
    for (std::size_t i2 = 0; i2 < g.M; ++i2) padded(off + i1, off + i2) = f(i1, i2);
  const Spectrum2D ps = forward_transform(padded);
  for (std::size_t j1 = 0; j1 < g.M; ++j1)
    for (std::size_t j2 = 0; j2 < g.M; ++j2) out(j1, j2) = ps(off + j1, off + j2);
  return inverse_transform(out);
}

// ---------------------------------------------------------------------------
// Quadrature: h^n * sum f(x_i) w(x_i). Exact for band-limited integrands
// whose spectrum stays inside |m| < M (the only alias of 0 is excluded).

inline cplx quadrature(const SampledFunction1D& f, const std::function<double(double)>& weight) {
  cplx acc{};
  for (std::size_t i = 0; i < f.grid.M; ++i) acc += f.values[i] * weight(f.grid.x(i));
  return acc * f.grid.h();
}

inline cplx quadrature(const SampledFunction2D& f,
                       const std::function<double(double, double)>& weight) {
  const auto& g = f.grid;
  cplx acc{};
  for (std::size_t i1 = 0; i1 < g.M; ++i1)
    for (std::size_t i2 = 0; i2 < g.M; ++i2) acc += f(i1, i2) * weight(g.y1(i1), g.y2(i2));
  return acc * g.h() * g.h();
}

inline cplx integral(const SampledFunction1D& f) {
  cplx acc{};
  for (const auto& v : f.values) acc += v;
  return acc * f.grid.h();
}

inline cplx integral(const SampledFunction2D& f) {
  cplx acc{};
  for (const auto& v : f.values) acc += v;
  return acc * f.grid.h() * f.grid.h();
}

// ---------------------------------------------------------------------------
// Pointwise arithmetic

inline SampledFunction1D multiply(const SampledFunction1D& a, const SampledFunction1D& b) {
  if (!(a.grid == b.grid)) throw error(errc::grid_mismatch, "pointwise product on different grids");
  SampledFunction1D out(a.grid);
  for (std::size_t i = 0; i < a.values.size(); ++i) out.values[i] = a.values[i] * b.values[i];
  return out;
}

inline SampledFunction1D scale(SampledFunction1D f, cplx c) {
  for (auto& v : f.values) v *= c;
  return f;
}

inline SampledFunction2D scale(SampledFunction2D f, cplx c) {
  for (auto& v : f.values) v *= c;
  return f;
}

inline double max_abs(const std::vector<cplx>& v) {
  double m = 0.0;
  for (const auto& x : v) m = std::max(m, std::abs(x));
  return m;
}

inline double max_abs_diff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  if (a.size() != b.size()) throw error(errc::invalid_argument, "size mismatch");
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

/// Translation by a: f(. - a), realized as exp(-2 pi i a xi) on the spectrum.
inline SampledFunction1D translate(const SampledFunction1D& f, double a) {
  Spectrum1D s = forward_transform(f);
  for (std::size_t j = 0; j < s.coeffs.size(); ++j)
    s.coeffs[j] *= unit_turns(-a * s.grid.xi(s.grid.m_of(j)));
  return inverse_transform(s);
}

/// Largest spectral magnitude among |m| >= cutoff, relative to the peak.
inline double relative_energy_above(const Spectrum1D& s, long long cutoff) {
  double peak = 0.0, above = 0.0;
  for (std::size_t j = 0; j < s.coeffs.size(); ++j) {
    const double a = std::norm(s.coeffs[j]);
    peak += a;
    if (std::llabs(s.grid.m_of(j)) >= cutoff) above += a;
  }
  return peak > 0.0 ? above / peak : 0.0;
}

}  // namespace dyadic
