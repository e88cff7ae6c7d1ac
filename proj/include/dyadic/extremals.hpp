#pragma once

// Sharpness families. With zeta_k = c k,
//
//   f(x) = sum_k eta(x + 2^{zeta_N - zeta_k}) e^{2 pi i x 2^{zeta_k}}
//   g(x) = sum_k eta(x + 2^{zeta_N - zeta_k}) e^{-2 pi i x 2^{zeta_k}}
//   K(y) = beta(y - 2^{zeta_N}),   K(y1, y2) = K(y1) K(y2)
//
// f and g live on a period-L lattice as multiband spectra, one band per k
// at carrier 2^{zeta_k} L, so the frequencies 2^{cN} never need a dense
// grid. The translation phase e^{2 pi i a_k xi} with a_k 2^{zeta_k} an
// integer is evaluated on the reduced argument a_k s / L.

#include <cmath>
#include <cstdio>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "dyadic/bumps.hpp"
#include "dyadic/error.hpp"
#include "dyadic/fit.hpp"
#include "dyadic/grid.hpp"
#include "dyadic/multiband.hpp"
#include "dyadic/norms.hpp"
#include "dyadic/operators.hpp"

namespace dyadic {

enum class ExtremalFamily { linear, bilinear };

inline const char* to_string(ExtremalFamily f) { return f == ExtremalFamily::linear ? "linear" : "bilinear"; }

/// Period and base-window size of the multiband lattice, plus the grid on
/// which beta is sampled for D_lambda.
struct ExtremalGrid {
  double L = 16384.0;
  std::size_t M = 16384;
  double kernel_L = 2048.0;
  std::size_t kernel_M = std::size_t{1} << 17;  // 64 samples per unit: |beta| oscillates at frequency ~1
};

namespace detail {

inline long long eta_reach(const BumpFamily& fam, double L) {
  return static_cast<long long>(std::floor(fam.eta.support_hi * L + 1e-9));
}

inline double pow2(long long e) { return std::ldexp(1.0, static_cast<int>(e)); }

}  // namespace detail

/// Smallest grid on which the family for (N, c) fits, with L at least
/// `min_L`.
inline ExtremalGrid default_extremal_grid(int N, int c, const BumpFamily& fam, double min_L = 16384.0) {
  if (N < 1 || c < 1) throw error(errc::invalid_argument, "N and c must be positive");
  ExtremalGrid g;
  g.L = std::max(min_L, detail::pow2(static_cast<long long>(c) * (N - 1) + 2));
  const long long R = detail::eta_reach(fam, g.L);
  g.M = 1024;
  while (static_cast<long long>(g.M / 2) <= 2 * R + 1) g.M *= 2;
  return g;
}

struct ExtremalInstance {
  ExtremalFamily family = ExtremalFamily::linear;
  int N = 1;
  int c = 4;
  MultibandFunction1D eta;  // baseband eta on the lattice
  MultibandFunction1D f;
  MultibandFunction1D g;    // bilinear only
  SampledFunction1D K;      // beta(. - 2^{zeta_N}) on a relabelled grid
  std::optional<DyadicSymbol1D> T;
  std::optional<DyadicSymbol2D> B;
  double support_residual = 0.0;  // max of beta^(xi 2^-l) eta^(xi - 2^zeta_k) over l != zeta_k

  long long zeta(int k) const { return static_cast<long long>(c) * k; }
  double translate(int k) const { return detail::pow2(zeta(N) - zeta(k)); }
  double period() const { return f.period(); }

  /// Tf for the linear family, B(f, g) for the bilinear one.
  MultibandFunction1D output() const {
    if (T) return apply_linear(*T, f);
    return apply_bilinear(*B, f, g);
  }

  /// sum_k eta e^{2 pi i x 2^{zeta_k}}, or N eta^2.
  MultibandFunction1D expected() const {
    if (family == ExtremalFamily::bilinear) return product(eta, eta).scaled(static_cast<double>(N));
    MultibandFunction1D out(eta.base());
    for (int k = 1; k <= N; ++k) {
      Band b = eta.bands().front();
      b.carrier = static_cast<long long>(detail::pow2(zeta(k)) * period());
      out.add(std::move(b));
    }
    return out;
  }

  /// D_lambda of the kernel; the bilinear kernel is the tensor square.
  double d_lambda_kernel(double lambda) const {
    if (family == ExtremalFamily::linear) return d_lambda(K, lambda).value;
    return d_lambda_separable(K, K, lambda, 1e-12, 1.0).value;
  }
};

/// Upper bound for sup |a - b| from the coefficient difference:
/// (1/L) sum |a_m - b_m|.
inline double sup_bound(const MultibandFunction1D& a, const MultibandFunction1D& b) {
  const MultibandFunction1D d = sum(a, b.scaled(-1.0));
  double s = 0.0;
  for (const auto& band : d.bands())
    for (long long i = band.lo; i <= band.hi; ++i) s += std::abs(band.coeffs[d.idx(i)]);
  return s / d.period();
}

/// max over the base grid of |F|.
inline double grid_sup(const MultibandFunction1D& F) { return max_abs(F.values()); }

namespace detail {

inline void check_extremal_grid(int N, int c, const BumpFamily& fam, const ExtremalGrid& eg, bool products) {
  if (N < 1 || c < 1) throw error(errc::invalid_argument, "N and c must be positive");
  const double needL = pow2(static_cast<long long>(c) * (N - 1) + 2);
  const double L = eg.L;
  if (!(L >= needL) || std::exp2(std::round(std::log2(L))) != L) {
    std::ostringstream os;
    os << "extremal lattice infeasible: need a power-of-two period L >= " << needL << ", got " << L;
    throw error(errc::infeasible, os.str());
  }
  if (static_cast<double>(c) * N + std::log2(L) > 52.0)
    throw error(errc::infeasible, "carrier indices exceed exact double range; lower N or c");
  const long long R = eta_reach(fam, L);
  const long long need_half = (products ? 2 * R : R) + 1;
  if (static_cast<long long>(eg.M / 2) <= need_half) {
    std::size_t M = 2;
    while (static_cast<long long>(M / 2) <= need_half) M *= 2;
    std::ostringstream os;
    os << "extremal base window infeasible: need M >= " << M << " at L = " << L << ", got " << eg.M;
    throw error(errc::infeasible, os.str());
  }
}

/// Sum of eta bumps translated by a_k and modulated by sign * 2^{zeta_k}.
inline MultibandFunction1D modulated_bumps(int N, int c, const BumpFamily& fam, const Grid1D& base, int sign) {
  MultibandFunction1D out(base);
  const double L = base.L;
  const long long R = eta_reach(fam, L);
  const long long zN = static_cast<long long>(c) * N;
  for (int k = 1; k <= N; ++k) {
    const long long zk = static_cast<long long>(c) * k;
    Band b = out.blank(sign * static_cast<long long>(pow2(zk) * L));
    b.lo = -R;
    b.hi = R;
    // f^(xi) = eta^(xi - 2^zk) e^{2 pi i a_k xi}; a_k 2^zk = 2^zN is an integer.
    const double a = pow2(zN - zk);
    for (long long s = -R; s <= R; ++s)
      b.coeffs[out.idx(s)] = fam.eta(static_cast<double>(s) / L) * unit_turns(a * static_cast<double>(s) / L);
    out.add(std::move(b));
  }
  return out;
}

inline MultibandFunction1D eta_band(const BumpFamily& fam, const Grid1D& base) {
  MultibandFunction1D out(base);
  const long long R = eta_reach(fam, base.L);
  Band b = out.blank(0);
  b.lo = -R;
  b.hi = R;
  for (long long s = -R; s <= R; ++s) b.coeffs[out.idx(s)] = fam.eta(static_cast<double>(s) / base.L);
  out.add(std::move(b));
  return out;
}

inline SampledFunction1D shifted_beta(const BumpFamily& fam, const ExtremalGrid& eg, long long zN) {
  const Grid1D kg(eg.kernel_L, eg.kernel_M);
  const auto beta = fam.beta;
  SampledFunction1D K = from_fourier(kg, [&beta](double xi) { return cplx(beta(xi)); });
  K.grid = Grid1D(eg.kernel_L, eg.kernel_M, pow2(zN));
  return K;
}

/// max over k, l != zeta_k and the eta window of |beta^(xi / 2^l) eta^(xi - 2^zeta_k)|.
inline double support_identity_residual(int N, int c, const BumpFamily& fam, double L) {
  const long long R = eta_reach(fam, L);
  double worst = 0.0;
  for (int k = 1; k <= N; ++k) {
    const long long zk = static_cast<long long>(c) * k;
    for (long long l = 0; l <= static_cast<long long>(c) * (N + 1); ++l) {
      if (l == zk) continue;
      for (long long s = -R; s <= R; ++s) {
        const double xi = pow2(zk) + static_cast<double>(s) / L;
        worst = std::max(worst, std::abs(fam.beta(std::ldexp(xi, -static_cast<int>(l))) * fam.eta(static_cast<double>(s) / L)));
      }
    }
  }
  return worst;
}

inline Annulus beta_annulus(const BumpFamily& fam) { return {fam.beta.support_lo, fam.beta.support_hi}; }

}  // namespace detail

/// T f = sum_l K_l * f with K_l^(xi) = K^(2^-l xi), K^(xi) = beta^(xi) e^{-2 pi i 2^{zeta_N} xi}.
inline ExtremalInstance make_linear_extremal(int N, int c, const BumpFamily& fam, const ExtremalGrid& eg) {
  detail::check_extremal_grid(N, c, fam, eg, false);
  const Grid1D base(eg.L, eg.M);
  ExtremalInstance inst;
  inst.family = ExtremalFamily::linear;
  inst.N = N;
  inst.c = c;
  inst.eta = detail::eta_band(fam, base);
  inst.f = detail::modulated_bumps(N, c, fam, base, +1);
  inst.g = MultibandFunction1D(base);
  const long long zN = static_cast<long long>(c) * N;
  inst.K = detail::shifted_beta(fam, eg, zN);
  const auto beta = fam.beta;
  const int e = static_cast<int>(zN);
  inst.T = DyadicSymbol1D([beta, e](double xi) { return beta(xi) * unit_turns(-std::ldexp(xi, e)); },
                          detail::beta_annulus(fam), -(static_cast<int>(zN) + 2), 0);
  inst.support_residual = detail::support_identity_residual(N, c, fam, eg.L);
  return inst;
}

inline ExtremalInstance make_linear_extremal(int N, int c, const BumpFamily& fam) {
  return make_linear_extremal(N, c, fam, default_extremal_grid(N, c, fam));
}

/// B(f, g) with K^(xi1, xi2) = beta^(xi1) beta^(xi2) e^{-2 pi i 2^{zeta_N} (xi1 + xi2)}.
inline ExtremalInstance make_bilinear_extremal(int N, int c, const BumpFamily& fam, const ExtremalGrid& eg) {
  detail::check_extremal_grid(N, c, fam, eg, true);
  const Grid1D base(eg.L, eg.M);
  ExtremalInstance inst;
  inst.family = ExtremalFamily::bilinear;
  inst.N = N;
  inst.c = c;
  inst.eta = detail::eta_band(fam, base);
  inst.f = detail::modulated_bumps(N, c, fam, base, +1);
  inst.g = detail::modulated_bumps(N, c, fam, base, -1);
  const long long zN = static_cast<long long>(c) * N;
  inst.K = detail::shifted_beta(fam, eg, zN);
  const auto beta = fam.beta;
  const int e = static_cast<int>(zN);
  const Annulus a = detail::beta_annulus(fam);
  inst.B = DyadicSymbol2D(
      [beta, e](double x1, double x2) {
        const double b = beta(x1) * beta(x2);
        if (b == 0.0) return cplx{};
        return b * unit_turns(-std::ldexp(x1, e)) * unit_turns(-std::ldexp(x2, e));
      },
      Annulus{std::sqrt(2.0) * a.lo, std::sqrt(2.0) * a.hi}, -(static_cast<int>(zN) + 2), 0);
  inst.support_residual = detail::support_identity_residual(N, c, fam, eg.L);
  return inst;
}

inline ExtremalInstance make_bilinear_extremal(int N, int c, const BumpFamily& fam) {
  return make_bilinear_extremal(N, c, fam, default_extremal_grid(N, c, fam));
}

// ---------------------------------------------------------------------------
// Growth

struct GrowthFit {
  std::string label;
  std::vector<int> N;
  std::vector<double> values;
  LineFit fit;

  std::string csv() const {
    std::ostringstream os;
    os << "N,value,slope,residual\n";
    char buf[160];
    for (std::size_t i = 0; i < N.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g\n", N[i], values[i], fit.slope, fit.residual);
      os << buf;
    }
    return os.str();
  }
};

inline GrowthFit measure_growth(const std::vector<int>& Ns, const std::function<double(int)>& eval,
                                std::string label = {}) {
  GrowthFit out;
  out.label = std::move(label);
  out.N = Ns;
  std::vector<double> x;
  for (int n : Ns) {
    x.push_back(static_cast<double>(n));
    out.values.push_back(eval(n));
  }
  out.fit = fit_loglog(x, out.values);
  return out;
}

enum class GrowthTarget { f, g, output, kernel };

struct NormSpec {
  GrowthTarget target = GrowthTarget::output;
  NormKind kind = NormKind::Lp;
  double p = 2.0;       // Lp exponent; infinity routes to BMO
  double lambda = 1.0;  // Dlambda
};

/// Largest dense grid the p = infinity route will materialize.
inline constexpr std::size_t max_bmo_samples = std::size_t{1} << 22;

inline double bmo_of(const MultibandFunction1D& F, const BumpFamily& fam) {
  const long long need = 2 * F.max_abs_index() + 2;
  std::size_t M = F.base().M;
  while (static_cast<long long>(M) < 2 * need) M *= 2;
  if (M > max_bmo_samples) {
    std::ostringstream os;
    os << "BMO route needs a dense grid of " << M << " samples; lower N or c";
    throw error(errc::infeasible, os.str());
  }
  const SampledFunction1D d = F.to_dense(M);
  const BumpFamily dense = make_family(d.grid, fam.grid2, fam.params);
  return bmo_norm(d, dense).value;
}

inline double evaluate_norm(const ExtremalInstance& inst, const NormSpec& spec, const BumpFamily& fam) {
  if (spec.target == GrowthTarget::kernel || spec.kind == NormKind::Dlambda) return inst.d_lambda_kernel(spec.lambda);
  const MultibandFunction1D F = spec.target == GrowthTarget::f ? inst.f
                                : spec.target == GrowthTarget::g ? inst.g
                                                                  : inst.output();
  if (spec.kind == NormKind::BMO || std::isinf(spec.p)) return bmo_of(F, fam);
  if (spec.kind != NormKind::Lp) throw error(errc::unsupported, "growth norms are Lp, BMO or Dlambda");
  return lp_norm(F, spec.p);
}

inline GrowthFit measure_growth(const std::function<ExtremalInstance(int)>& family, const std::vector<int>& Ns,
                                const NormSpec& spec, const BumpFamily& fam, std::string label = {}) {
  return measure_growth(Ns, [&](int n) { return evaluate_norm(family(n), spec, fam); }, std::move(label));
}

/// ||Tf||_p / (D_lambda(K) ||f||_p) per N.
inline GrowthFit ratio_certificate(const std::function<ExtremalInstance(int)>& family, const std::vector<int>& Ns,
                                   double p, double lambda, const BumpFamily& fam) {
  return measure_growth(
      Ns,
      [&](int n) {
        const ExtremalInstance inst = family(n);
        const NormSpec out{GrowthTarget::output, NormKind::Lp, p, lambda};
        const NormSpec in{GrowthTarget::f, NormKind::Lp, p, lambda};
        return evaluate_norm(inst, out, fam) / (inst.d_lambda_kernel(lambda) * evaluate_norm(inst, in, fam));
      },
      "ratio");
}

}  // namespace dyadic
