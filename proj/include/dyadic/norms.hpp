#pragma once

// Norms and functionals: L^p, H^p through the maximal characterization
// sup_k |phi_k * f|, dyadic Carleson BMO, the Luxemburg norm of
// L(log L)^alpha on S^1, and the weighted kernel integral
//
//   D_lambda(K) = integral |K(y)| (log(e + |y|))^lambda dy.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>
#include <string>
#include <vector>

#include "dyadic/analysis.hpp"
#include "dyadic/bumps.hpp"
#include "dyadic/error.hpp"
#include "dyadic/grid.hpp"
#include "dyadic/multiband.hpp"
#include "dyadic/sphere.hpp"

namespace dyadic {

enum class NormKind { Lp, Hp, BMO, Orlicz, Dlambda };

inline const char* to_string(NormKind k) {
  switch (k) {
    case NormKind::Lp: return "Lp";
    case NormKind::Hp: return "Hp";
    case NormKind::BMO: return "BMO";
    case NormKind::Orlicz: return "Orlicz";
    case NormKind::Dlambda: return "Dlambda";
  }
  return "?";
}

struct NormReport {
  NormKind kind = NormKind::Lp;
  double parameter = 0.0;
  double value = 0.0;
  std::map<std::string, double> diagnostics;
  std::vector<std::string> warnings;

  std::string csv_row() const {
    char buf[128];
    std::snprintf(buf, sizeof buf, "%s,%.17g,%.17g", to_string(kind), parameter, value);
    return buf;
  }
};

// ---------------------------------------------------------------------------
// L^p

inline double lp_norm(const std::vector<cplx>& v, double cell, double p) {
  if (!(p >= 1.0)) throw error(errc::invalid_argument, "p must be >= 1");
  if (std::isinf(p)) return max_abs(v);
  double s = 0.0;
  if (p == 2.0) {
    for (const auto& x : v) s += std::norm(x);
  } else {
    for (const auto& x : v) s += std::pow(std::abs(x), p);
  }
  return std::pow(s * cell, 1.0 / p);
}

inline double lp_norm(const SampledFunction1D& f, double p) { return lp_norm(f.values, f.grid.h(), p); }
inline double lp_norm(const SampledFunction2D& f, double p) {
  return lp_norm(f.values, f.grid.h() * f.grid.h(), p);
}

/// L^p over one period of a multiband function. p = 2 by Parseval; even
/// integer p = 2q through G = |F|^2 and integral G^q = <G^a, G^b>, a + b = q,
/// both exact on the frequency side. Other p need a dense grid that holds
/// the spectrum.
inline double lp_norm(const MultibandFunction1D& f, double p) {
  if (!(p >= 1.0)) throw error(errc::invalid_argument, "p must be >= 1");
  if (p == 2.0) return l2_norm(f);
  const double q = p / 2.0;
  if (std::isfinite(p) && q == std::floor(q)) {
    const int qi = static_cast<int>(q);
    const MultibandFunction1D G = product(f, f.conj());
    const int a = (qi + 1) / 2, b = qi / 2;
    MultibandFunction1D Ga = G;
    for (int i = 1; i < a; ++i) Ga = product(Ga, G);
    MultibandFunction1D Gb = G;
    for (int i = 1; i < b; ++i) Gb = product(Gb, G);
    const double integral_gq = inner(Ga, Gb).real();
    return std::pow(std::max(0.0, integral_gq), 1.0 / p);
  }
  const long long need = 2 * f.max_abs_index() + 2;
  std::size_t M = f.base().M;
  while (static_cast<long long>(M) < 4 * need) M *= 2;
  if (M > (std::size_t{1} << 24)) throw error(errc::unsupported, "L^p of this multiband function needs an even p");
  return lp_norm(f.to_dense(M), p);
}

// ---------------------------------------------------------------------------
// H^p

/// Range of k over which phi_k * f changes: below it only the mean survives,
/// above it phi_k * f = f.
inline KRange hardy_k_range(const SampledFunction1D& f) {
  const auto ext = spectral_extent(forward_transform(f));
  KRange r;
  r.lo = static_cast<int>(std::floor(std::log2(1.0 / f.grid.L))) - 1;
  r.hi = ext ? static_cast<int>(std::ceil(std::log2(ext->second))) : r.lo;
  return r;
}

inline SampledFunction1D hardy_maximal(const SampledFunction1D& f, const BumpFamily& fam) {
  const KRange r = hardy_k_range(f);
  const Spectrum1D fs = forward_transform(f);
  std::vector<double> best(f.grid.M, 0.0);
  for (int k = r.lo; k <= r.hi; ++k) {
    Spectrum1D s = fs;
    for (std::size_t j = 0; j < s.coeffs.size(); ++j) s.coeffs[j] *= fam.phi_k(k, s.grid.xi(s.grid.m_of(j)));
    const auto p = inverse_transform(s);
    for (std::size_t i = 0; i < best.size(); ++i) best[i] = std::max(best[i], std::abs(p.values[i]));
  }
  SampledFunction1D out(f.grid);
  for (std::size_t i = 0; i < best.size(); ++i) out.values[i] = best[i];
  return out;
}

inline NormReport hardy_norm(const SampledFunction1D& f, double p, const BumpFamily& fam) {
  if (!(p >= 1.0) || std::isinf(p)) throw error(errc::invalid_argument, "hardy_norm takes p in [1, inf); use bmo_norm for p = inf");
  NormReport rep;
  rep.kind = NormKind::Hp;
  rep.parameter = p;
  const KRange r = hardy_k_range(f);
  rep.value = lp_norm(hardy_maximal(f, fam), p);
  rep.diagnostics["k_lo"] = r.lo;
  rep.diagnostics["k_hi"] = r.hi;
  if (p == 1.0) {
    const double mean = std::abs(integral(f));
    const double l1 = lp_norm(f, 1.0);
    rep.diagnostics["mean"] = mean;
    if (mean > 1e-8 * l1) rep.warnings.push_back("f has nonzero mean; not an H^1 function on the line");
  }
  return rep;
}

// ---------------------------------------------------------------------------
// BMO

/// sup over dyadic intervals P anchored at the origin, of lengths L, L/2,
/// ..., h, of ( |P|^{-1} integral_P sum_{k >= -log2 l(P)} |psi_k * f|^2 )^{1/2}.
inline NormReport bmo_norm(const SampledFunction1D& f, const BumpFamily& fam) {
  const auto& g = f.grid;
  if (g.x0 != 0.0) throw error(errc::invalid_argument, "bmo_norm anchors dyadic intervals at the origin; grid must be centered at 0");
  NormReport rep;
  rep.kind = NormKind::BMO;
  rep.parameter = INFINITY;
  const KRange r = nonzero_k_range(f, fam);
  if (r.empty()) return rep;
  const Spectrum1D fs = forward_transform(f);

  // tail[k - r.lo] = sum_{k' >= k} |psi_k' * f|^2
  std::vector<std::vector<double>> tail(r.hi - r.lo + 2, std::vector<double>(g.M, 0.0));
  for (int k = r.hi; k >= r.lo; --k) {
    const auto p = inverse_transform(detail::piece_spectrum(fs, k, 0.0, fam));
    auto& t = tail[k - r.lo];
    const auto& above = tail[k - r.lo + 1];
    for (std::size_t i = 0; i < g.M; ++i) t[i] = above[i] + std::norm(p.values[i]);
  }
  const int levels = ilog2(g.M);
  double best = 0.0, best_len = 0.0, best_left = 0.0;
  for (int s = 0; s <= levels; ++s) {
    const double len = g.L / static_cast<double>(std::size_t{1} << s);
    const int kp = static_cast<int>(std::ceil(-std::log2(len) - 1e-12));
    if (kp > r.hi) continue;
    const auto& t = tail[std::max(kp, r.lo) - r.lo];
    const std::size_t n = g.M >> s;
    for (std::size_t start = 0; start < g.M; start += n) {
      double acc = 0.0;
      for (std::size_t i = start; i < start + n; ++i) acc += t[i];
      const double v = std::sqrt(acc / static_cast<double>(n));
      if (v > best) {
        best = v;
        best_len = len;
        best_left = g.x(start);
      }
    }
  }
  rep.value = best;
  rep.diagnostics["sup_length"] = best_len;
  rep.diagnostics["sup_left"] = best_left;
  rep.diagnostics["k_lo"] = r.lo;
  rep.diagnostics["k_hi"] = r.hi;
  return rep;
}

// ---------------------------------------------------------------------------
// Orlicz L(log L)^alpha on S^1

inline double luxemburg_functional(const SphereFunction& omega, double alpha, double lambda) {
  return omega.integrate([&](double v) {
    const double t = std::abs(v) / lambda;
    return t == 0.0 ? 0.0 : t * std::pow(std::log(std::numbers::e + t), alpha);
  });
}

inline constexpr double orlicz_tolerance = 1e-10;
inline constexpr int orlicz_max_iterations = 400;

/// The lambda > 0 with integral (|Omega|/lambda) log(e + |Omega|/lambda)^alpha dnu = 1.
inline NormReport orlicz_norm(const SphereFunction& omega, double alpha) {
  if (!(alpha >= 0.0)) throw error(errc::invalid_argument, "alpha must be >= 0");
  NormReport rep;
  rep.kind = NormKind::Orlicz;
  rep.parameter = alpha;
  const double l1 = omega.l1(), linf = omega.linf();
  if (l1 == 0.0) return rep;

  double lo = l1 / std::pow(1.0 + std::log(std::numbers::e + linf / l1), alpha) * 0.1;
  double hi = linf * (1.0 + alpha) * 10.0;
  auto F = [&](double lam) { return luxemburg_functional(omega, alpha, lam) - 1.0; };
  int expansions = 0;
  while (F(lo) < 0.0) {
    lo *= 0.5;
    if (++expansions > 200) throw error(errc::not_converged, "Luxemburg bracket expansion failed");
  }
  while (F(hi) > 0.0) {
    hi *= 2.0;
    if (++expansions > 200) throw error(errc::not_converged, "Luxemburg bracket expansion failed");
  }
  int it = 0;
  while ((hi - lo) > orlicz_tolerance * hi) {
    const double mid = 0.5 * (lo + hi);
    (F(mid) > 0.0 ? lo : hi) = mid;
    if (++it > orlicz_max_iterations) throw error(errc::not_converged, "Luxemburg bisection did not converge");
  }
  rep.value = 0.5 * (lo + hi);
  rep.diagnostics["iterations"] = it;
  rep.diagnostics["bracket_expansions"] = expansions;
  rep.diagnostics["residual"] = std::abs(F(rep.value));
  return rep;
}

// ---------------------------------------------------------------------------
// D_lambda

inline double log_weight(double r, double lambda) {
  return lambda == 0.0 ? 1.0 : std::pow(std::log(std::numbers::e + r), lambda);
}

/// Coordinates are those of the grid (origin x0 honored), read on the
/// fundamental domain without periodization.
inline NormReport d_lambda(const SampledFunction1D& K, double lambda) {
  if (!(lambda >= 0.0)) throw error(errc::invalid_argument, "lambda must be >= 0");
  NormReport rep;
  rep.kind = NormKind::Dlambda;
  rep.parameter = lambda;
  double s = 0.0;
  for (std::size_t i = 0; i < K.grid.M; ++i) s += std::abs(K.values[i]) * log_weight(std::abs(K.grid.x(i)), lambda);
  rep.value = s * K.grid.h();
  return rep;
}

inline NormReport d_lambda(const SampledFunction2D& K, double lambda) {
  if (!(lambda >= 0.0)) throw error(errc::invalid_argument, "lambda must be >= 0");
  NormReport rep;
  rep.kind = NormKind::Dlambda;
  rep.parameter = lambda;
  const auto& g = K.grid;
  double s = 0.0;
  for (std::size_t i1 = 0; i1 < g.M; ++i1)
    for (std::size_t i2 = 0; i2 < g.M; ++i2)
      s += std::abs(K(i1, i2)) * log_weight(std::hypot(g.y1(i1), g.y2(i2)), lambda);
  rep.value = s * g.h() * g.h();
  return rep;
}

/// D_lambda of K(y1, y2) = K1(y1) K2(y2) without forming the 2D array.
/// Samples below `cutoff` times the peak are skipped. With `bin` > 0 the
/// masses |K| h are pooled into cells of that width, each placed at its
/// centroid; the weight is smooth on that scale, so the pooling error is
/// second order in bin / |y|.
inline NormReport d_lambda_separable(const SampledFunction1D& K1, const SampledFunction1D& K2, double lambda,
                                     double cutoff = 0.0, double bin = 0.0) {
  if (!(lambda >= 0.0)) throw error(errc::invalid_argument, "lambda must be >= 0");
  if (bin < 0.0) throw error(errc::invalid_argument, "bin width must be >= 0");
  NormReport rep;
  rep.kind = NormKind::Dlambda;
  rep.parameter = lambda;
  auto keep = [cutoff, bin](const SampledFunction1D& K) {
    std::vector<std::pair<double, double>> out;  // (position, mass)
    const double peak = max_abs(K.values);
    const double h = K.grid.h();
    long long cell = 0;
    double m = 0.0, my = 0.0;
    for (std::size_t i = 0; i < K.grid.M; ++i) {
      const double a = std::abs(K.values[i]);
      if (!(a > cutoff * peak)) continue;
      const double y = K.grid.x(i);
      if (bin == 0.0) {
        out.emplace_back(y, a * h);
        continue;
      }
      const long long c = static_cast<long long>(std::floor((y - K.grid.x(0)) / bin));
      if (c != cell && m > 0.0) {
        out.emplace_back(my / m, m);
        m = my = 0.0;
      }
      cell = c;
      m += a * h;
      my += a * h * y;
    }
    if (m > 0.0) out.emplace_back(my / m, m);
    return out;
  };
  const auto a = keep(K1), b = keep(K2);
  double s = 0.0;
  for (const auto& [y1, v1] : a) {
    double row = 0.0;
    for (const auto& [y2, v2] : b) row += v2 * log_weight(std::hypot(y1, y2), lambda);
    s += v1 * row;
  }
  rep.value = s;
  rep.diagnostics["cutoff"] = cutoff;
  rep.diagnostics["bin"] = bin;
  return rep;
}

}  // namespace dyadic
