#pragma once

// Dyadic symbols m = sum_j m0(2^j .), the linear multiplier operator T, the
// bilinear operator
//
//   B(f1, f2)(x) = sum_{xi1, xi2} m(xi1, xi2) f1^(xi1) f2^(xi2) e^{2 pi i x (xi1 + xi2)}
//
// (periodic normalization 1/L^2), its brute-force oracle, and the transposes
// K^{*1}(y1, y2) = K(-y1, -y1 + y2), K^{*2}(y1, y2) = K(y1 - y2, -y2).
//
// A symbol is exact on its safe band: frequencies where every dilate that
// could contribute lies inside the configured j range.

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <numbers>
#include <optional>
#include <utility>
#include <vector>

#include "dyadic/analysis.hpp"
#include "dyadic/error.hpp"
#include "dyadic/grid.hpp"
#include "dyadic/multiband.hpp"

namespace dyadic {

/// r_lo <= |xi| <= r_hi contains the support of a symbol profile.
struct Annulus {
  double lo = 0.5;
  double hi = 2.0;
};

namespace detail {

inline void check_j_range(int j_min, int j_max) {
  if (j_max < j_min) throw error(errc::invalid_argument, "empty dyadic range");
}

inline std::pair<double, double> safe_band(const Annulus& a, int j_min, int j_max) {
  return {a.hi * std::ldexp(1.0, -j_max - 1), a.lo * std::ldexp(1.0, -j_min + 1)};
}

/// Largest |m0| seen off the annulus, relative to the largest on it.
template <class Eval>
double off_support_ratio(const Annulus& a, Eval&& at_radius) {
  double on = 0.0, off = 0.0;
  const int n = 720;
  for (int i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / n;
    on = std::max(on, at_radius(a.lo + (a.hi - a.lo) * t));
    off = std::max(off, at_radius(a.lo * t));
    off = std::max(off, at_radius(a.hi * (1.0 + 1e-9 + 3.0 * t)));
  }
  return on > 0.0 ? off / on : 0.0;
}

inline constexpr double symbol_support_tolerance = 1e-12;

}  // namespace detail

class DyadicSymbol1D {
 public:
  DyadicSymbol1D(std::function<cplx(double)> m0, Annulus support, int j_min, int j_max)
      : m0_(std::move(m0)), support_(support), j_min_(j_min), j_max_(j_max) {
    detail::check_j_range(j_min, j_max);
  }

  const Annulus& support() const { return support_; }
  int j_min() const { return j_min_; }
  int j_max() const { return j_max_; }
  cplx m0(double xi) const { return m0_(xi); }

  /// m(xi) = sum over j in range with 2^j |xi| in the annulus of m0(2^j xi).
  cplx operator()(double xi) const {
    cplx acc{};
    const double a = std::abs(xi);
    if (a == 0.0) return acc;
    for (int j = first_j(a); j <= j_max_; ++j) {
      const double r = std::ldexp(a, j);
      if (r > support_.hi) break;
      acc += m0_(std::ldexp(xi, j));
    }
    return acc;
  }

  /// Number of dilates whose annulus contains xi.
  int overlap_count(double xi) const {
    const double a = std::abs(xi);
    int n = 0;
    for (int j = j_min_; j <= j_max_; ++j) {
      const double r = std::ldexp(a, j);
      n += (r >= support_.lo && r <= support_.hi);
    }
    return n;
  }

  std::pair<double, double> safe_band() const { return detail::safe_band(support_, j_min_, j_max_); }
  bool in_safe_band(double xi) const {
    const auto [lo, hi] = safe_band();
    const double a = std::abs(xi);
    return a > lo && a < hi;
  }

  Spectrum1D assembled(const Grid1D& g) const { return spectrum_from(g, [this](double xi) { return (*this)(xi); }); }

 private:
  int first_j(double a) const {
    const int j = static_cast<int>(std::floor(std::log2(support_.lo / a))) - 1;
    return std::max(j_min_, j);
  }

  std::function<cplx(double)> m0_;
  Annulus support_;
  int j_min_, j_max_;
};

class DyadicSymbol2D {
 public:
  DyadicSymbol2D(std::function<cplx(double, double)> m0, Annulus support, int j_min, int j_max)
      : m0_(std::move(m0)), support_(support), j_min_(j_min), j_max_(j_max) {
    detail::check_j_range(j_min, j_max);
  }

  const Annulus& support() const { return support_; }
  int j_min() const { return j_min_; }
  int j_max() const { return j_max_; }
  cplx m0(double a, double b) const { return m0_(a, b); }

  cplx operator()(double xi1, double xi2) const {
    cplx acc{};
    const double a = std::hypot(xi1, xi2);
    if (a == 0.0) return acc;
    const int j0 = std::max(j_min_, static_cast<int>(std::floor(std::log2(support_.lo / a))) - 1);
    for (int j = j0; j <= j_max_; ++j) {
      const double r = std::ldexp(a, j);
      if (r > support_.hi) break;
      acc += m0_(std::ldexp(xi1, j), std::ldexp(xi2, j));
    }
    return acc;
  }

  std::pair<double, double> safe_band() const { return detail::safe_band(support_, j_min_, j_max_); }
  bool in_safe_band(double r) const {
    const auto [lo, hi] = safe_band();
    return r > lo && r < hi;
  }

 private:
  std::function<cplx(double, double)> m0_;
  Annulus support_;
  int j_min_, j_max_;
};

/// Checks that m0 vanishes off the annulus and returns the assembled symbol.
inline DyadicSymbol1D assemble_symbol(std::function<cplx(double)> m0, int j_min, int j_max, Annulus support = {}) {
  const double ratio = detail::off_support_ratio(support, [&](double r) {
    return std::max(std::abs(m0(r)), std::abs(m0(-r)));
  });
  if (ratio > detail::symbol_support_tolerance)
    throw error(errc::invalid_argument, "m0 is not supported in its annulus");
  return DyadicSymbol1D(std::move(m0), support, j_min, j_max);
}

inline DyadicSymbol2D assemble_symbol(std::function<cplx(double, double)> m0, int j_min, int j_max,
                                      Annulus support = {}) {
  const double ratio = detail::off_support_ratio(support, [&](double r) {
    double m = 0.0;
    for (int k = 0; k < 16; ++k) {
      const double t = two_pi * k / 16.0 + 0.1;
      m = std::max(m, std::abs(m0(r * std::cos(t), r * std::sin(t))));
    }
    return m;
  });
  if (ratio > detail::symbol_support_tolerance)
    throw error(errc::invalid_argument, "m0 is not supported in its annulus");
  return DyadicSymbol2D(std::move(m0), support, j_min, j_max);
}

// ---------------------------------------------------------------------------
// Linear operator

namespace detail {

inline void require_safe(const DyadicSymbol1D& m, const Spectrum1D& s) {
  const double peak = max_abs(s.coeffs);
  for (std::size_t j = 0; j < s.coeffs.size(); ++j) {
    if (std::abs(s.coeffs[j]) <= support_threshold * peak) continue;
    if (!m.in_safe_band(s.grid.xi(s.grid.m_of(j))))
      throw error(errc::safe_band_violation, "input spectrum leaves the symbol's safe band");
  }
}

inline double coefficient_peak(const MultibandFunction1D& f) {
  double peak = 0.0;
  for (const auto& b : f.bands()) peak = std::max(peak, max_abs(b.coeffs));
  return peak;
}

inline void require_safe(const DyadicSymbol1D& m, const MultibandFunction1D& f) {
  const double floor = support_threshold * coefficient_peak(f);
  for (const auto& b : f.bands())
    for (long long s = b.lo; s <= b.hi; ++s)
      if (std::abs(b.coeffs[f.idx(s)]) > floor && !m.in_safe_band(static_cast<double>(b.carrier + s) / f.period()))
        throw error(errc::safe_band_violation, "input spectrum leaves the symbol's safe band");
}

}  // namespace detail

/// Tf = inverse transform of m f^.
inline SampledFunction1D apply_linear(const DyadicSymbol1D& m, const SampledFunction1D& f) {
  Spectrum1D s = forward_transform(f);
  detail::require_safe(m, s);
  for (std::size_t j = 0; j < s.coeffs.size(); ++j)
    if (s.coeffs[j] != cplx{}) s.coeffs[j] *= m(s.grid.xi(s.grid.m_of(j)));
  return inverse_transform(s);
}

inline MultibandFunction1D apply_linear(const DyadicSymbol1D& m, const MultibandFunction1D& f) {
  detail::require_safe(m, f);
  return f.multiplier([&m](double xi) { return m(xi); });
}

/// Tf = sum_j K_j * f, each K_j the band-limited kernel with spectrum
/// m0(2^j .), convolved one at a time.
inline SampledFunction1D apply_linear_spatial(const DyadicSymbol1D& m, const SampledFunction1D& f) {
  detail::require_safe(m, forward_transform(f));
  const auto& g = f.grid;
  SampledFunction1D out(g);
  const double top = g.nyquist() + 1.0 / g.L;
  for (int j = m.j_min(); j <= m.j_max(); ++j) {
    // Skip dilates whose annulus misses the grid band.
    if (std::ldexp(m.support().lo, -j) > top || std::ldexp(m.support().hi, -j) < 1.0 / g.L) continue;
    SampledFunction1D Kj = from_fourier(Grid1D(g.L, g.M), [&](double xi) { return m.m0(std::ldexp(xi, j)); });
    const auto piece = convolve(Kj, f);
    for (std::size_t i = 0; i < g.M; ++i) out.values[i] += piece.values[i];
  }
  return out;
}

// ---------------------------------------------------------------------------
// Bilinear operator

namespace detail {

struct Support1D {
  double lo = INFINITY;  // smallest |xi| with a nonzero coefficient
  double hi = 0.0;
  bool has_zero = false;
};

inline Support1D support_of(const Spectrum1D& s) {
  Support1D out;
  const double peak = max_abs(s.coeffs);
  for (std::size_t j = 0; j < s.coeffs.size(); ++j) {
    if (std::abs(s.coeffs[j]) <= support_threshold * peak) continue;
    const double a = std::abs(s.grid.xi(s.grid.m_of(j)));
    out.lo = std::min(out.lo, a);
    out.hi = std::max(out.hi, a);
  }
  return out;
}

inline Support1D support_of(const MultibandFunction1D& f) {
  Support1D out;
  const double floor = support_threshold * coefficient_peak(f);
  for (const auto& b : f.bands())
    for (long long s = b.lo; s <= b.hi; ++s) {
      if (std::abs(b.coeffs[f.idx(s)]) <= floor) continue;
      const double a = std::abs(static_cast<double>(b.carrier + s) / f.period());
      out.lo = std::min(out.lo, a);
      out.hi = std::max(out.hi, a);
    }
  return out;
}

inline void require_safe_pair(const DyadicSymbol2D& m, const Support1D& a, const Support1D& b) {
  if (a.lo > a.hi || b.lo > b.hi) return;  // an input is zero
  const double rmin = std::hypot(a.lo, b.lo), rmax = std::hypot(a.hi, b.hi);
  if (!m.in_safe_band(rmin) || !m.in_safe_band(rmax))
    throw error(errc::safe_band_violation, "input frequency pairs leave the symbol's safe band");
}

}  // namespace detail

inline constexpr std::size_t max_bilinear_dense_samples = std::size_t{1} << 12;

/// Dense route: A(m1, m2) = m f1^ f2^, one 2D inverse transform, then the
/// diagonal x = y. O(M^2 log M) time and M^2 memory.
inline SampledFunction1D apply_bilinear(const DyadicSymbol2D& m, const SampledFunction1D& f1,
                                        const SampledFunction1D& f2) {
  if (!(f1.grid == f2.grid)) throw error(errc::grid_mismatch, "bilinear inputs on different grids");
  const auto& g = f1.grid;
  if (g.M > max_bilinear_dense_samples) throw error(errc::infeasible, "dense bilinear route limited to M <= 4096");
  const Spectrum1D a = forward_transform(f1), b = forward_transform(f2);
  detail::require_safe_pair(m, detail::support_of(a), detail::support_of(b));
  const Grid2D g2(g.L, g.M, g.x0, g.x0);
  Spectrum2D A(g2);
  for (std::size_t j1 = 0; j1 < g.M; ++j1) {
    if (a.coeffs[j1] == cplx{}) continue;
    const double xi1 = g.xi(g.m_of(j1));
    for (std::size_t j2 = 0; j2 < g.M; ++j2) {
      if (b.coeffs[j2] == cplx{}) continue;
      A(j1, j2) = m(xi1, g.xi(g.m_of(j2))) * a.coeffs[j1] * b.coeffs[j2];
    }
  }
  const SampledFunction2D G = inverse_transform(A);
  SampledFunction1D out(g);
  for (std::size_t i = 0; i < g.M; ++i) out.values[i] = G(i, i);
  return out;
}

/// Multiband route: each band pair convolves on the frequency side and lands
/// on the summed carrier, c(q1 + q2 + s) = 1/L sum_{s1 + s2 = s} m u^(s1) v^(s2).
inline MultibandFunction1D apply_bilinear(const DyadicSymbol2D& m, const MultibandFunction1D& f1,
                                          const MultibandFunction1D& f2) {
  require_same_base(f1, f2);
  detail::require_safe_pair(m, detail::support_of(f1), detail::support_of(f2));
  const double L = f1.period();
  MultibandFunction1D out(f1.base());
  for (const auto& x : f1.bands())
    for (const auto& y : f2.bands()) {
      Band nb = out.blank(x.carrier + y.carrier);
      nb.lo = x.lo + y.lo;
      nb.hi = x.hi + y.hi;
      if (nb.lo <= -out.half_window() || nb.hi >= out.half_window())
        throw error(errc::band_collision, "bilinear output exceeds the baseband window; enlarge the base grid");
      for (long long s1 = x.lo; s1 <= x.hi; ++s1) {
        const cplx u = x.coeffs[f1.idx(s1)];
        if (u == cplx{}) continue;
        const double xi1 = static_cast<double>(x.carrier + s1) / L;
        for (long long s2 = y.lo; s2 <= y.hi; ++s2) {
          const cplx v = y.coeffs[f2.idx(s2)];
          if (v == cplx{}) continue;
          const cplx mv = m(xi1, static_cast<double>(y.carrier + s2) / L);
          if (mv != cplx{}) nb.coeffs[out.idx(s1 + s2)] += mv * u * v / L;
        }
      }
      out.add(std::move(nb));
    }
  return out;
}

inline constexpr std::size_t max_oracle_samples = 128;

/// Direct triple sum over (xi1, xi2, x).
inline SampledFunction1D bilinear_oracle(const DyadicSymbol2D& m, const SampledFunction1D& f1,
                                         const SampledFunction1D& f2) {
  if (!(f1.grid == f2.grid)) throw error(errc::grid_mismatch, "bilinear inputs on different grids");
  const auto& g = f1.grid;
  if (g.M > max_oracle_samples) throw error(errc::out_of_range, "oracle limited to M <= 128");
  const Spectrum1D a = forward_transform(f1), b = forward_transform(f2);
  SampledFunction1D out(g);
  for (std::size_t j1 = 0; j1 < g.M; ++j1)
    for (std::size_t j2 = 0; j2 < g.M; ++j2) {
      const double xi1 = g.xi(g.m_of(j1)), xi2 = g.xi(g.m_of(j2));
      const cplx c = m(xi1, xi2) * a.coeffs[j1] * b.coeffs[j2];
      if (c == cplx{}) continue;
      for (std::size_t i = 0; i < g.M; ++i)
        out.values[i] += c * std::polar(1.0, two_pi * g.x(i) * (xi1 + xi2));
    }
  for (auto& v : out.values) v /= g.L * g.L;
  return out;
}

// ---------------------------------------------------------------------------
// Bilinear kernels and transposes

enum class WrapPolicy { periodic, reject };

/// K on R^2 with Fourier transform khat supported in `support`. The samples
/// are optional (analytic kernels far from the origin need none).
struct BilinearKernel {
  std::function<cplx(double, double)> khat;
  Annulus support;
  std::optional<SampledFunction2D> K;

  DyadicSymbol2D symbol(int j_min, int j_max) const { return DyadicSymbol2D(khat, support, j_min, j_max); }

  /// Fourier transform of the samples on the grid (available when K is).
  Spectrum2D spectrum() const {
    if (!K) throw error(errc::invalid_argument, "kernel has no samples");
    return forward_transform(*K);
  }
};

inline BilinearKernel kernel_from_symbol(std::function<cplx(double, double)> khat, Annulus support,
                                         const std::optional<Grid2D>& grid = std::nullopt) {
  BilinearKernel k{std::move(khat), support, std::nullopt};
  if (grid) k.K = from_fourier(*grid, k.khat);
  return k;
}

/// Kernel given by samples; its symbol is the Riemann-sum Fourier transform
/// of the samples at arbitrary frequencies.
inline BilinearKernel kernel_from_samples(SampledFunction2D K, Annulus support) {
  auto shared = std::make_shared<SampledFunction2D>(std::move(K));
  BilinearKernel k;
  k.khat = [shared](double a, double b) { return fourier_at(*shared, a, b); };
  k.support = support;
  k.K = *shared;
  return k;
}

namespace detail {

// Singular values of the transposition maps (xi1, xi2) -> (-xi1 - xi2, xi2)
// and (xi1, xi2) -> (xi1, -xi1 - xi2): golden ratio and its inverse.
inline constexpr double transpose_smax = std::numbers::phi;
inline constexpr double transpose_smin = std::numbers::phi - 1.0;

/// Integer coordinate map of K^{*which} on a grid centered at the origin.
inline std::pair<long long, long long> transpose_source(int which, long long u1, long long u2) {
  return which == 1 ? std::make_pair(-u1, u2 - u1) : std::make_pair(u1 - u2, -u2);
}

}  // namespace detail

inline SampledFunction2D transpose_samples(const SampledFunction2D& K, int which, WrapPolicy policy) {
  if (which != 1 && which != 2) throw error(errc::invalid_argument, "transpose index must be 1 or 2");
  const auto& g = K.grid;
  if (g.x0 != 0.0 || g.y0 != 0.0) throw error(errc::invalid_argument, "transpose needs a grid centered at 0");
  const long long half = static_cast<long long>(g.M / 2), Ml = static_cast<long long>(g.M);
  const double peak = max_abs(K.values);
  SampledFunction2D out(g);
  for (std::size_t i1 = 0; i1 < g.M; ++i1)
    for (std::size_t i2 = 0; i2 < g.M; ++i2) {
      const long long u1 = static_cast<long long>(i1) - half, u2 = static_cast<long long>(i2) - half;
      auto [s1, s2] = detail::transpose_source(which, u1, u2);
      const bool inside = s1 >= -half && s1 < half && s2 >= -half && s2 < half;
      const long long w1 = ((s1 + half) % Ml + Ml) % Ml, w2 = ((s2 + half) % Ml + Ml) % Ml;
      const cplx v = K(static_cast<std::size_t>(w1), static_cast<std::size_t>(w2));
      if (!inside && policy == WrapPolicy::reject && std::abs(v) > 1e-12 * peak)
        throw error(errc::wrap_violation, "transposed kernel wraps around the torus");
      out(i1, i2) = v;
    }
  return out;
}

inline BilinearKernel transpose_kernel(const BilinearKernel& k, int which, WrapPolicy policy = WrapPolicy::periodic) {
  if (which != 1 && which != 2) throw error(errc::invalid_argument, "transpose index must be 1 or 2");
  BilinearKernel t;
  auto kh = k.khat;
  if (which == 1)
    t.khat = [kh](double a, double b) { return kh(-a - b, b); };
  else
    t.khat = [kh](double a, double b) { return kh(a, -a - b); };
  t.support = {k.support.lo / detail::transpose_smax, k.support.hi / detail::transpose_smin};
  if (k.K) t.K = transpose_samples(*k.K, which, policy);
  return t;
}

}  // namespace dyadic
