#pragma once

// Littlewood-Paley pieces psi_k * f, their shifted versions
// (psi_k)^y = psi_k(. - 2^{-k} y), square functions, and the maximal
// operators M_r (Hardy-Littlewood) and Peetre's maximal function.
//
// All k sums run over the exact range where psi^(2^{-k} .) meets the
// spectrum of the input, so nothing is truncated.

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "dyadic/bumps.hpp"
#include "dyadic/error.hpp"
#include "dyadic/grid.hpp"
#include "dyadic/multiband.hpp"

namespace dyadic {

struct KRange {
  int lo = 0;
  int hi = -1;
  bool empty() const { return hi < lo; }
};

/// Coefficients below this fraction of the peak are treated as zero when
/// reading off spectral supports.
inline constexpr double support_threshold = 1e-13;

/// Range of nonzero |xi| in a spectrum (excluding xi = 0); nullopt when the
/// spectrum is concentrated at 0.
inline std::optional<std::pair<double, double>> spectral_extent(const Spectrum1D& s) {
  const double peak = max_abs(s.coeffs);
  if (peak == 0.0) return std::nullopt;
  double lo = INFINITY, hi = 0.0;
  for (std::size_t j = 0; j < s.coeffs.size(); ++j) {
    const long long m = s.grid.m_of(j);
    if (m == 0 || std::abs(s.coeffs[j]) <= support_threshold * peak) continue;
    const double xi = std::abs(s.grid.xi(m));
    lo = std::min(lo, xi);
    hi = std::max(hi, xi);
  }
  if (hi == 0.0) return std::nullopt;
  return std::make_pair(lo, hi);
}

inline std::optional<std::pair<double, double>> spectral_extent(const MultibandFunction1D& f) {
  double lo = INFINITY, hi = 0.0;
  const double L = f.period();
  for (const auto& b : f.bands())
    for (long long s = b.lo; s <= b.hi; ++s) {
      const long long m = b.carrier + s;
      if (m == 0 || b.coeffs[f.idx(s)] == cplx{}) continue;
      const double xi = std::abs(static_cast<double>(m) / L);
      lo = std::min(lo, xi);
      hi = std::max(hi, xi);
    }
  if (hi == 0.0) return std::nullopt;
  return std::make_pair(lo, hi);
}

/// k for which the annulus of psi^(2^{-k} .) meets [xi_lo, xi_hi].
inline KRange k_range_for(const Profile& psi, double xi_lo, double xi_hi) {
  KRange r;
  r.lo = static_cast<int>(std::floor(std::log2(xi_lo / psi.support_hi)));
  r.hi = static_cast<int>(std::ceil(std::log2(xi_hi / psi.support_lo)));
  while (r.lo < r.hi && std::ldexp(psi.support_hi, r.lo) < xi_lo) ++r.lo;
  while (r.hi > r.lo && std::ldexp(psi.support_lo, r.hi) > xi_hi) --r.hi;
  return r;
}

/// Pieces the grid can carry: the annulus of piece k reaches a nonzero
/// grid frequency and starts below Nyquist.
inline KRange admissible_k_range(const Grid1D& g, const Profile& psi) {
  return k_range_for(psi, 1.0 / g.L, g.nyquist());
}

inline KRange nonzero_k_range(const SampledFunction1D& f, const BumpFamily& fam) {
  const auto ext = spectral_extent(forward_transform(f));
  if (!ext) return {};
  return k_range_for(fam.psi, ext->first, ext->second);
}

inline KRange nonzero_k_range(const MultibandFunction1D& f, const BumpFamily& fam) {
  const auto ext = spectral_extent(f);
  if (!ext) return {};
  return k_range_for(fam.psi, ext->first, ext->second);
}

namespace detail {

inline void require_admissible(const Grid1D& g, const BumpFamily& fam, int k) {
  const auto r = admissible_k_range(g, fam.psi);
  if (k < r.lo || k > r.hi) throw error(errc::out_of_range, "Littlewood-Paley index outside the grid's dyadic range");
}

inline void require_unwrapped(double L, int k, double y) {
  if (std::abs(std::ldexp(y, -k)) >= L / 4.0)
    throw error(errc::wrap_violation, "shift 2^-k y must stay below a quarter period");
}

inline Spectrum1D piece_spectrum(const Spectrum1D& fs, int k, double y, const BumpFamily& fam) {
  Spectrum1D s = fs;
  const double shift = std::ldexp(y, -k);
  for (std::size_t j = 0; j < s.coeffs.size(); ++j) {
    if (s.coeffs[j] == cplx{}) continue;
    const double xi = s.grid.xi(s.grid.m_of(j));
    cplx m = fam.psi_k(k, xi);
    if (y != 0.0 && m != cplx{}) m *= unit_turns(-shift * xi);
    s.coeffs[j] *= m;
  }
  return s;
}

}  // namespace detail

/// psi_k * f.
inline SampledFunction1D lp_piece(const SampledFunction1D& f, int k, const BumpFamily& fam) {
  detail::require_admissible(f.grid, fam, k);
  return inverse_transform(detail::piece_spectrum(forward_transform(f), k, 0.0, fam));
}

inline MultibandFunction1D lp_piece(const MultibandFunction1D& f, int k, const BumpFamily& fam) {
  return f.multiplier([&](double xi) { return cplx(fam.psi_k(k, xi)); });
}

struct ShiftedPiece {
  int k = 0;
  double y = 0.0;
  SampledFunction1D values;
};

/// (psi_k)^y * f = (psi_k * f)(. - 2^{-k} y).
inline ShiftedPiece shifted_piece(const SampledFunction1D& f, int k, double y, const BumpFamily& fam) {
  detail::require_admissible(f.grid, fam, k);
  detail::require_unwrapped(f.grid.L, k, y);
  return {k, y, inverse_transform(detail::piece_spectrum(forward_transform(f), k, y, fam))};
}

inline MultibandFunction1D shifted_piece(const MultibandFunction1D& f, int k, double y, const BumpFamily& fam) {
  detail::require_unwrapped(f.period(), k, y);
  const double shift = std::ldexp(y, -k);
  return f.multiplier([&](double xi) {
    const double m = fam.psi_k(k, xi);
    return m == 0.0 ? cplx{} : m * unit_turns(-shift * xi);
  });
}

struct LPDecomposition {
  SampledFunction1D f;
  std::map<int, SampledFunction1D> pieces;
  KRange k_range;

  /// (1/C) sum_k psi_k * f, which is f minus its mean.
  SampledFunction1D reconstruct(double C_partition) const {
    SampledFunction1D out(f.grid);
    for (const auto& [k, p] : pieces)
      for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] += p.values[i];
    return scale(out, 1.0 / C_partition);
  }
};

inline LPDecomposition lp_decompose(const SampledFunction1D& f, const BumpFamily& fam) {
  LPDecomposition dec;
  dec.f = f;
  dec.k_range = nonzero_k_range(f, fam);
  const Spectrum1D fs = forward_transform(f);
  for (int k = dec.k_range.lo; k <= dec.k_range.hi; ++k)
    dec.pieces.emplace(k, inverse_transform(detail::piece_spectrum(fs, k, 0.0, fam)));
  return dec;
}

/// S^y f = (sum_k |(psi_k)^y * f|^2)^{1/2} over the given range, or over the
/// exact nonzero range when none is given.
inline SampledFunction1D square_function(const SampledFunction1D& f, double y, const BumpFamily& fam,
                                         std::optional<KRange> range = std::nullopt) {
  const KRange r = range ? *range : nonzero_k_range(f, fam);
  const Spectrum1D fs = forward_transform(f);
  std::vector<double> acc(f.grid.M, 0.0);
  for (int k = r.lo; k <= r.hi; ++k) {
    detail::require_admissible(f.grid, fam, k);
    detail::require_unwrapped(f.grid.L, k, y);
    const auto p = inverse_transform(detail::piece_spectrum(fs, k, y, fam));
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += std::norm(p.values[i]);
  }
  SampledFunction1D out(f.grid);
  for (std::size_t i = 0; i < acc.size(); ++i) out.values[i] = std::sqrt(acc[i]);
  return out;
}

/// (S^y f)^2 = sum_k |(psi_k)^y * f|^2 as a multiband function (its bands sit
/// at carrier differences). L^2 and L^4 norms of S^y f follow exactly:
/// ||S||_2^2 = integral of S^2 and ||S||_4^4 = ||S^2||_2^2.
inline MultibandFunction1D square_function_squared(const MultibandFunction1D& f, double y, const BumpFamily& fam,
                                                   std::optional<KRange> range = std::nullopt) {
  const KRange r = range ? *range : nonzero_k_range(f, fam);
  MultibandFunction1D out(f.base());
  for (int k = r.lo; k <= r.hi; ++k) {
    const auto p = shifted_piece(f, k, y, fam);
    if (p.bands().empty()) continue;
    out = sum(out, product(p, p.conj()));
  }
  return out;
}

/// sum_k ||(psi_k)^y * f||_2^2, which equals ||S^y f||_2^2.
inline double square_function_energy(const MultibandFunction1D& f, double y, const BumpFamily& fam,
                                     std::optional<KRange> range = std::nullopt) {
  const KRange r = range ? *range : nonzero_k_range(f, fam);
  double e = 0.0;
  for (int k = r.lo; k <= r.hi; ++k) e += inner(shifted_piece(f, k, y, fam), shifted_piece(f, k, y, fam)).real();
  return e;
}

// ---------------------------------------------------------------------------
// Maximal functions

/// M_r f(x) = sup over grid-aligned periodic windows Q containing x, of
/// dyadic lengths h, 2h, ..., L, of (avg_Q |f|^r)^{1/r}.
inline SampledFunction1D hl_maximal(const SampledFunction1D& f, double r) {
  if (!(r >= 1.0)) throw error(errc::invalid_argument, "maximal exponent r must be >= 1");
  const std::size_t M = f.grid.M;
  std::vector<double> pw(M), prefix(2 * M + 1, 0.0);
  for (std::size_t i = 0; i < M; ++i) pw[i] = std::pow(std::abs(f.values[i]), r);
  for (std::size_t i = 0; i < 2 * M; ++i) prefix[i + 1] = prefix[i] + pw[i % M];

  std::vector<double> best(pw);
  std::vector<double> avg(M);
  for (std::size_t n = 2; n <= M; n *= 2) {
    for (std::size_t s = 0; s < M; ++s) avg[s] = (prefix[s + n] - prefix[s]) / static_cast<double>(n);
    // Windows containing i start at i - n + 1, ..., i. With c[u] the average
    // of the window starting at u - n + 1, that is a sliding maximum of c
    // over u in [i, i + n - 1].
    auto c = [&](std::size_t u) { return avg[(u + M - (n - 1)) % M]; };
    std::deque<std::size_t> dq;
    for (std::size_t u = 0; u < M + n - 1; ++u) {
      while (!dq.empty() && c(dq.back()) <= c(u)) dq.pop_back();
      dq.push_back(u);
      if (u + 1 < n) continue;
      const std::size_t i = u + 1 - n;
      while (dq.front() < i) dq.pop_front();
      best[i] = std::max(best[i], c(dq.front()));
    }
  }
  SampledFunction1D out(f.grid);
  for (std::size_t i = 0; i < M; ++i) out.values[i] = std::pow(best[i], 1.0 / r);
  return out;
}

/// Peetre maximal function sup_y |f(x - y)| / (1 + 2^k |y|)^sigma over grid
/// shifts y with periodic distance. window = true restricts |y| to the
/// radius where the weight drops below 1e-6 of its peak.
inline SampledFunction1D peetre_maximal(const SampledFunction1D& f, double sigma, int k, bool window = false) {
  if (!(sigma > 1.0)) throw error(errc::invalid_argument, "Peetre exponent sigma must exceed 1");
  const auto& g = f.grid;
  const std::size_t M = g.M;
  const double scale = std::ldexp(1.0, k);
  std::size_t reach = M / 2;
  if (window) {
    const double radius = (std::pow(1e6, 1.0 / sigma) - 1.0) / scale;
    reach = std::min<std::size_t>(M / 2, static_cast<std::size_t>(std::ceil(radius / g.h())) + 1);
  }
  std::vector<double> w(reach + 1), a(M);
  for (std::size_t d = 0; d <= reach; ++d) w[d] = std::pow(1.0 + scale * static_cast<double>(d) * g.h(), -sigma);
  for (std::size_t i = 0; i < M; ++i) a[i] = std::abs(f.values[i]);
  SampledFunction1D out(g);
  for (std::size_t i = 0; i < M; ++i) {
    double m = a[i];
    for (std::size_t d = 1; d <= reach; ++d) {
      m = std::max(m, a[(i + d) % M] * w[d]);
      m = std::max(m, a[(i + M - d) % M] * w[d]);
    }
    out.values[i] = m;
  }
  return out;
}

}  // namespace dyadic
