#pragma once

// Sparse-spectrum representation of a periodic band-limited function,
//
//   F(x) = sum_b exp(2 pi i x q_b / L) u_b(x),
//
// where each u_b is a baseband function on a common base grid (period L,
// M_b samples) and q_b is an integer carrier index. Spectrally this is the
// union of windows [q_b - M_b/2, q_b + M_b/2) of the period-L frequency
// lattice, so every identity that holds for a dense grid of period L holds
// here without materializing the (possibly astronomically large) dense
// grid. Each band records the index interval [lo, hi] (relative to the
// carrier) outside which its coefficients are exactly zero; windows of
// distinct bands never overlap.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <iterator>
#include <vector>

#include "dyadic/error.hpp"
#include "dyadic/grid.hpp"

namespace dyadic {

struct Band {
  long long carrier = 0;
  long long lo = 0;
  long long hi = -1;  // empty when hi < lo
  std::vector<cplx> coeffs;  // length M_b, centered; zero outside [lo, hi]

  bool empty() const { return hi < lo; }
  long long abs_lo() const { return carrier + lo; }
  long long abs_hi() const { return carrier + hi; }
};

class MultibandFunction1D {
 public:
  MultibandFunction1D() = default;
  explicit MultibandFunction1D(const Grid1D& base) : base_(base) {}

  const Grid1D& base() const { return base_; }
  const std::vector<Band>& bands() const { return bands_; }
  double period() const { return base_.L; }
  long long half_window() const { return static_cast<long long>(base_.M / 2); }

  /// Adds a band whose coefficients are a continuum Fourier transform
  /// sampled on [xi_lo, xi_hi]; the carrier is the nearest lattice index to
  /// the window center.
  void add_fourier_window(double xi_lo, double xi_hi, const std::function<cplx(double)>& fhat) {
    const double L = base_.L;
    const long long a = static_cast<long long>(std::ceil(xi_lo * L - 1e-9));
    const long long b = static_cast<long long>(std::floor(xi_hi * L + 1e-9));
    if (b < a) return;
    const long long q = (a + b) / 2;
    Band band = blank(q);
    band.lo = a - q;
    band.hi = b - q;
    check_window(band.lo, band.hi);
    for (long long s = band.lo; s <= band.hi; ++s)
      band.coeffs[idx(s)] = fhat(static_cast<double>(q + s) / L);
    add(std::move(band));
  }

  /// Inserts a band, merging it with any band whose occupied interval it
  /// overlaps.
  void add(Band band) {
    trim(band);
    if (band.empty()) return;
    for (;;) {
      auto it = std::find_if(bands_.begin(), bands_.end(), [&](const Band& e) {
        return !(band.abs_hi() < e.abs_lo() || e.abs_hi() < band.abs_lo());
      });
      if (it == bands_.end()) break;
      Band existing = std::move(*it);
      bands_.erase(it);
      band = merge(existing, band);
    }
    auto pos = std::lower_bound(bands_.begin(), bands_.end(), band.carrier,
                                [](const Band& e, long long q) { return e.carrier < q; });
    bands_.insert(pos, std::move(band));
  }

  static MultibandFunction1D from_dense(const SampledFunction1D& f) {
    MultibandFunction1D out(f.grid);
    const Spectrum1D s = forward_transform(f);
    Band b = out.blank(0);
    b.lo = -out.half_window();
    b.hi = out.half_window() - 1;
    b.coeffs = s.coeffs;
    out.add(std::move(b));
    return out;
  }

  /// Baseband function u_b sampled on the base grid (carrier removed).
  SampledFunction1D band_samples(const Band& b) const {
    return inverse_transform(Spectrum1D(base_, b.coeffs));
  }

  /// F evaluated at the base-grid points.
  std::vector<cplx> values() const {
    std::vector<cplx> out(base_.M);
    for (const auto& b : bands_) {
      const auto u = band_samples(b);
      for (std::size_t i = 0; i < base_.M; ++i) out[i] += carrier_phase(b.carrier, i) * u.values[i];
    }
    return out;
  }

  cplx evaluate(double x) const {
    cplx acc{};
    const double r = x / base_.L;
    for (const auto& b : bands_)
      for (long long s = b.lo; s <= b.hi; ++s) {
        const cplx c = b.coeffs[idx(s)];
        if (c == cplx{}) continue;
        acc += c * unit_turns(r * static_cast<double>(b.carrier + s));
      }
    return acc / base_.L;
  }

  /// Fourier multiplier: coefficient at xi scaled by m(xi).
  MultibandFunction1D multiplier(const std::function<cplx(double)>& m) const {
    MultibandFunction1D out(base_);
    for (const auto& b : bands_) {
      Band nb = b;
      for (long long s = b.lo; s <= b.hi; ++s) {
        cplx& c = nb.coeffs[idx(s)];
        if (c != cplx{}) c *= m(static_cast<double>(b.carrier + s) / base_.L);
      }
      out.add(std::move(nb));
    }
    return out;
  }

  MultibandFunction1D translate(double a) const {
    return multiplier([a](double xi) { return unit_turns(-a * xi); });
  }

  MultibandFunction1D scaled(cplx c) const {
    MultibandFunction1D out = *this;
    for (auto& b : out.bands_)
      for (auto& v : b.coeffs) v *= c;
    return out;
  }

  MultibandFunction1D conj() const {
    MultibandFunction1D out(base_);
    for (const auto& b : bands_) {
      Band nb = blank(-b.carrier);
      nb.lo = -b.hi;
      nb.hi = -b.lo;
      for (long long s = b.lo; s <= b.hi; ++s) nb.coeffs[idx(-s)] = std::conj(b.coeffs[idx(s)]);
      out.add(std::move(nb));
    }
    return out;
  }

  bool is_baseband_only() const {
    return bands_.empty() || (bands_.size() == 1 && bands_.front().carrier == 0);
  }

  long long max_abs_index() const {
    long long m = 0;
    for (const auto& b : bands_) m = std::max({m, std::llabs(b.abs_lo()), std::llabs(b.abs_hi())});
    return m;
  }

  /// Dense representation on a grid of the same period with M samples.
  SampledFunction1D to_dense(std::size_t M) const {
    const Grid1D g(base_.L, M, base_.x0);
    Spectrum1D s(g);
    for (const auto& b : bands_)
      for (long long k = b.lo; k <= b.hi; ++k) {
        const cplx c = b.coeffs[idx(k)];
        if (c == cplx{}) continue;
        if (!g.has_m(b.carrier + k))
          throw error(errc::nyquist_violation, "band does not fit the requested dense grid");
        s.coeffs[g.j_of(b.carrier + k)] += c;
      }
    return inverse_transform(s);
  }

  Band blank(long long carrier) const {
    Band b;
    b.carrier = carrier;
    b.coeffs.assign(base_.M, cplx{});
    return b;
  }

  std::size_t idx(long long s) const { return static_cast<std::size_t>(s + half_window()); }

  cplx carrier_phase(long long q, std::size_t i) const {
    // exp(2 pi i x_i q / L) with x_i = x0 + (i - M/2) L / M, in exact
    // integer arithmetic for the lattice part.
    const __int128 Mb = static_cast<__int128>(base_.M);
    __int128 num = (static_cast<__int128>(static_cast<long long>(i) - half_window()) * q) % Mb;
    if (num < 0) num += Mb;
    double t = static_cast<double>(num) / static_cast<double>(base_.M);
    if (base_.x0 != 0.0) t += std::fmod(base_.x0, base_.L) / base_.L * static_cast<double>(q);
    return unit_turns(t);
  }

 private:
  void check_window(long long lo, long long hi) const {
    if (lo <= -half_window() || hi >= half_window())
      throw error(errc::band_collision, "band content exceeds the baseband window; enlarge the base grid");
  }

  void trim(Band& b) const {
    while (b.lo <= b.hi && b.coeffs[idx(b.lo)] == cplx{}) ++b.lo;
    while (b.hi >= b.lo && b.coeffs[idx(b.hi)] == cplx{}) --b.hi;
  }

  /// Union of two overlapping bands, recentered on the merged interval.
  Band merge(const Band& a, const Band& b) const {
    const long long lo = std::min(a.abs_lo(), b.abs_lo());
    const long long hi = std::max(a.abs_hi(), b.abs_hi());
    const long long q = lo + (hi - lo) / 2;
    Band out = blank(q);
    out.lo = lo - q;
    out.hi = hi - q;
    check_window(out.lo, out.hi);
    for (const Band* x : {&a, &b})
      for (long long s = x->lo; s <= x->hi; ++s) out.coeffs[idx(x->carrier + s - q)] += x->coeffs[idx(s)];
    return out;
  }

  Grid1D base_;
  std::vector<Band> bands_;
};

inline void require_same_base(const MultibandFunction1D& a, const MultibandFunction1D& b) {
  if (!(a.base() == b.base())) throw error(errc::grid_mismatch, "multiband functions on different base grids");
}

inline MultibandFunction1D sum(const MultibandFunction1D& a, const MultibandFunction1D& b) {
  require_same_base(a, b);
  MultibandFunction1D out = a;
  for (const auto& band : b.bands()) out.add(band);
  return out;
}

/// Pointwise product; each band pair multiplies on the base grid and lands
/// on the summed carrier.
inline MultibandFunction1D product(const MultibandFunction1D& a, const MultibandFunction1D& b) {
  require_same_base(a, b);
  const Grid1D& g = a.base();
  MultibandFunction1D out(g);
  std::vector<SampledFunction1D> ub;
  ub.reserve(b.bands().size());
  for (const auto& y : b.bands()) ub.push_back(b.band_samples(y));
  for (const auto& x : a.bands()) {
    const auto ux = a.band_samples(x);
    for (std::size_t k = 0; k < b.bands().size(); ++k) {
      const auto& y = b.bands()[k];
      const long long lo = x.lo + y.lo;
      const long long hi = x.hi + y.hi;
      if (lo <= -a.half_window() || hi >= a.half_window())
        throw error(errc::band_collision, "product exceeds the baseband window; enlarge the base grid");
      const auto prod = forward_transform(multiply(ux, ub[k]));
      Band nb = out.blank(x.carrier + y.carrier);
      nb.lo = lo;
      nb.hi = hi;
      for (long long s = lo; s <= hi; ++s) nb.coeffs[out.idx(s)] = prod.coeffs[out.idx(s)];
      out.add(std::move(nb));
    }
  }
  return out;
}

/// Inner product <a, b> = integral of a * conj(b) over one period, by
/// Parseval on the occupied coefficients.
inline cplx inner(const MultibandFunction1D& a, const MultibandFunction1D& b) {
  require_same_base(a, b);
  cplx acc{};
  for (const auto& x : a.bands())
    for (const auto& y : b.bands()) {
      const long long lo = std::max(x.abs_lo(), y.abs_lo());
      const long long hi = std::min(x.abs_hi(), y.abs_hi());
      for (long long m = lo; m <= hi; ++m)
        acc += x.coeffs[a.idx(m - x.carrier)] * std::conj(y.coeffs[b.idx(m - y.carrier)]);
    }
  return acc / a.period();
}

inline double l2_norm(const MultibandFunction1D& f) { return std::sqrt(std::max(0.0, inner(f, f).real())); }

}  // namespace dyadic
