#pragma once

// Rough bilinear kernels K(y) = Omega(theta) / |y|^2 on R^2 (y = (y1, y2),
// theta = y / |y|), cut into dyadic shells and frequency bands:
//
//   K_k     = Gamma^(2^k |y|) K(y)                 spatial shell |y| ~ 2^-k
//   K^j_k   = Gamma_{j+k} * K_k                     frequency band |xi| ~ 2^{j+k}
//   K^j     = sum_k K^j_k,  (K^j)^(xi) = sum_k Gamma^(2^{-j-k} xi) K_0^(2^{-k} xi)
//
// K_0^ is evaluated through the radial transform
//
//   K_0^(xi) = 2 pi  int Omega(theta) G(theta . xi) dnu(theta),
//   G(t)     = int Gamma^(r) e^{-2 pi i r t} dr / r,
//
// with G and its t-derivatives tabulated once and read by cubic Hermite
// interpolation.

#include <array>
#include <cmath>
#include <map>
#include <optional>
#include <random>
#include <utility>
#include <vector>

#include "dyadic/bumps.hpp"
#include "dyadic/error.hpp"
#include "dyadic/fit.hpp"
#include "dyadic/grid.hpp"
#include "dyadic/norms.hpp"
#include "dyadic/operators.hpp"
#include "dyadic/sphere.hpp"

namespace dyadic {

inline constexpr double vanishing_tolerance = 1e-10;

namespace detail {

inline void require_vanishing(const SphereFunction& omega) {
  if (std::abs(omega.mean()) > vanishing_tolerance * std::max(1.0, omega.l1()))
    throw error(errc::invalid_argument, "Omega must have mean zero; call project_vanishing first");
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Level sets

struct LevelSetSplit {
  std::map<int, SphereFunction> pieces;   // mu -> Omega^mu
  std::map<int, double> level_mass;       // mu -> int_{D^mu} |Omega| dnu
  std::map<int, std::size_t> level_size;  // mu -> number of samples in D^mu
  int mu_max = 0;

  /// Sum of all pieces, sample by sample.
  SphereFunction total() const {
    std::vector<double> v(pieces.begin()->second.size(), 0.0);
    for (const auto& [mu, p] : pieces)
      for (std::size_t i = 0; i < v.size(); ++i) v[i] += p[i];
    return SphereFunction(std::move(v));
  }
};

/// Level of a sample: 0 for |w| <= 1, else the mu with 2^{mu-1} < |w| <= 2^mu.
inline int level_of(double w) {
  const double a = std::abs(w);
  if (a <= 1.0) return 0;
  int e = 0;
  const double m = std::frexp(a, &e);  // a = m 2^e, m in [1/2, 1)
  return m == 0.5 ? e - 1 : e;
}

inline LevelSetSplit level_split(const SphereFunction& omega) {
  detail::require_vanishing(omega);
  const std::size_t Q = omega.size();
  LevelSetSplit out;
  out.mu_max = level_of(omega.linf());
  std::vector<int> level(Q);
  for (std::size_t i = 0; i < Q; ++i) level[i] = level_of(omega[i]);
  for (int mu = 0; mu <= out.mu_max; ++mu) {
    double integral = 0.0, mass = 0.0;
    std::size_t count = 0;
    for (std::size_t i = 0; i < Q; ++i)
      if (level[i] == mu) {
        integral += omega[i];
        mass += std::abs(omega[i]);
        ++count;
      }
    integral *= omega.weight();
    std::vector<double> v(Q);
    for (std::size_t i = 0; i < Q; ++i) v[i] = (level[i] == mu ? omega[i] : 0.0) - integral;
    out.pieces.emplace(mu, SphereFunction(std::move(v)));
    out.level_mass[mu] = mass * omega.weight();
    out.level_size[mu] = count;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Radial transform table

/// G^(d)(t) = int Gamma^(r) r^{-1} (-2 pi i r)^d e^{-2 pi i r t} dr for
/// d = 0..3 on |t| <= t_max.
class RadialTable {
 public:
  static constexpr int orders = 4;

  RadialTable(const Profile& gamma, double t_max, double dt = 1.0 / 512.0, std::size_t nodes = 1024)
      : dt_(dt), t_max_(t_max) {
    if (!(t_max > 0.0) || !(dt > 0.0)) throw error(errc::invalid_argument, "radial table needs t_max, dt > 0");
    const std::size_t n = static_cast<std::size_t>(std::ceil(t_max / dt)) + 2;
    for (auto& tab : table_) tab.assign(n, cplx{});
    // Trapezoid rule on [support_lo, support_hi]; the integrand vanishes
    // to all orders at both ends.
    const double a = gamma.support_lo, b = gamma.support_hi, hr = (b - a) / static_cast<double>(nodes);
    std::vector<double> r(nodes), w(nodes);
    for (std::size_t q = 0; q < nodes; ++q) {
      r[q] = a + (static_cast<double>(q) + 0.5) * hr;
      w[q] = gamma(r[q]) / r[q] * hr;
    }
    std::vector<cplx> phase(nodes), step(nodes);
    for (std::size_t q = 0; q < nodes; ++q) step[q] = unit_turns(-r[q] * dt);
    for (std::size_t i = 0; i < n; ++i) {
      if (i % 256 == 0)
        for (std::size_t q = 0; q < nodes; ++q) phase[q] = unit_turns(-r[q] * dt * static_cast<double>(i));
      std::array<cplx, orders> acc{};
      for (std::size_t q = 0; q < nodes; ++q) {
        cplx term = w[q] * phase[q];
        const cplx factor(0.0, -two_pi * r[q]);
        for (int d = 0; d < orders; ++d) {
          acc[d] += term;
          term *= factor;
        }
        phase[q] *= step[q];
      }
      for (int d = 0; d < orders; ++d) table_[d][i] = acc[d];
    }
  }

  double t_max() const { return t_max_; }

  /// G^(d)(t) for d <= 2 (Hermite interpolation with G^(d+1)).
  cplx operator()(int d, double t) const {
    const double a = std::abs(t);
    if (a > t_max_) throw error(errc::out_of_range, "radial table queried beyond t_max");
    const double u = a / dt_;
    const std::size_t i = static_cast<std::size_t>(u);
    const double s = u - static_cast<double>(i);
    const double h00 = (1 + 2 * s) * (1 - s) * (1 - s), h10 = s * (1 - s) * (1 - s);
    const double h01 = s * s * (3 - 2 * s), h11 = s * s * (s - 1);
    const cplx v = h00 * table_[d][i] + h10 * dt_ * table_[d + 1][i] + h01 * table_[d][i + 1] +
                   h11 * dt_ * table_[d + 1][i + 1];
    // G^(d)(-t) = (-1)^d conj(G^(d)(t)) because the weights are real.
    if (t >= 0) return v;
    return d % 2 ? -std::conj(v) : std::conj(v);
  }

  /// Direct quadrature, for cross-checks.
  static cplx direct(const Profile& gamma, int d, double t, std::size_t nodes = 4096) {
    const double a = gamma.support_lo, b = gamma.support_hi, hr = (b - a) / static_cast<double>(nodes);
    cplx acc{};
    for (std::size_t q = 0; q < nodes; ++q) {
      const double r = a + (static_cast<double>(q) + 0.5) * hr;
      acc += gamma(r) / r * std::pow(cplx(0.0, -two_pi * r), d) * unit_turns(-r * t);
    }
    return acc * hr;
  }

 private:
  double dt_, t_max_;
  std::array<std::vector<cplx>, orders> table_;
};

// ---------------------------------------------------------------------------
// Analytic kernel

/// Value and derivatives in the order d/d(), d1, d2, d11, d12, d22.
using Jet2 = std::array<cplx, 6>;

class RoughKernel {
 public:
  RoughKernel(SphereFunction omega, const BumpFamily& fam, double t_max = 24.0)
      : omega_(std::move(omega)), gamma_(fam.gamma), table_(fam.gamma, t_max) {
    const std::size_t Q = omega_.size();
    c_.resize(Q);
    s_.resize(Q);
    for (std::size_t i = 0; i < Q; ++i) {
      c_[i] = std::cos(omega_.theta(i));
      s_[i] = std::sin(omega_.theta(i));
    }
  }

  const SphereFunction& omega() const { return omega_; }
  const Profile& gamma() const { return gamma_; }

  cplx k0_hat(double x1, double x2) const {
    cplx acc{};
    for (std::size_t i = 0; i < c_.size(); ++i) {
      if (omega_[i] == 0.0) continue;
      acc += omega_[i] * table_(0, c_[i] * x1 + s_[i] * x2);
    }
    return two_pi * omega_.weight() * acc;
  }

  Jet2 k0_jet(double x1, double x2) const {
    Jet2 j{};
    for (std::size_t i = 0; i < c_.size(); ++i) {
      const double w = omega_[i];
      if (w == 0.0) continue;
      const double t = c_[i] * x1 + s_[i] * x2;
      const cplx g0 = table_(0, t), g1 = table_(1, t), g2 = table_(2, t);
      j[0] += w * g0;
      j[1] += w * c_[i] * g1;
      j[2] += w * s_[i] * g1;
      j[3] += w * c_[i] * c_[i] * g2;
      j[4] += w * c_[i] * s_[i] * g2;
      j[5] += w * s_[i] * s_[i] * g2;
    }
    for (auto& v : j) v *= two_pi * omega_.weight();
    return j;
  }

  /// (K^j_0)^(xi) = Gamma^(2^{-j} xi) K_0^(xi).
  cplx kj0_hat(int j, double x1, double x2) const {
    const double g = gamma_(std::ldexp(std::hypot(x1, x2), -j));
    return g == 0.0 ? cplx{} : g * k0_hat(x1, x2);
  }

  /// k with Gamma^(2^{-j-k} xi) possibly nonzero.
  std::pair<int, int> active_k(int j, double r) const {
    const int c = static_cast<int>(std::floor(std::log2(r))) - j;
    return {c - 1, c + 2};
  }

  /// (K^j)^(xi) summed over every k with a nonzero term.
  cplx kj_hat(int j, double x1, double x2) const {
    const double r = std::hypot(x1, x2);
    if (r == 0.0) return {};
    cplx acc{};
    const auto [k_lo, k_hi] = active_k(j, r);
    for (int k = k_lo; k <= k_hi; ++k) {
      const double g = gamma_(std::ldexp(r, -j - k));
      if (g != 0.0) acc += g * k0_hat(std::ldexp(x1, -k), std::ldexp(x2, -k));
    }
    return acc;
  }

  /// Value and first and second derivatives of (K^j)^ at xi.
  Jet2 kj_jet(int j, double x1, double x2) const {
    const double r = std::hypot(x1, x2);
    Jet2 out{};
    if (r == 0.0) return out;
    const double x[2] = {x1, x2};
    const auto [k_lo, k_hi] = active_k(j, r);
    for (int k = k_lo; k <= k_hi; ++k) {
      const double s = std::ldexp(1.0, -j - k), sk = std::ldexp(1.0, -k);
      const double g0 = gamma_(s * r);
      const double g1 = gamma_.d1(s * r) * s, g2 = gamma_.d2(s * r) * s * s;
      if (g0 == 0.0 && g1 == 0.0 && g2 == 0.0) continue;
      // Radial factor a(xi) = Gamma^(s |xi|): gradient and Hessian.
      double ga[2], gab[2][2];
      for (int p = 0; p < 2; ++p) {
        ga[p] = g1 * x[p] / r;
        for (int q = 0; q < 2; ++q)
          gab[p][q] = g2 * x[p] * x[q] / (r * r) + g1 * ((p == q ? 1.0 : 0.0) / r - x[p] * x[q] / (r * r * r));
      }
      // Dilated K_0^: b(xi) = K_0^(sk xi).
      const Jet2 kb = k0_jet(sk * x1, sk * x2);
      const cplx b = kb[0];
      const cplx bp[2] = {sk * kb[1], sk * kb[2]};
      const cplx bpq[2][2] = {{sk * sk * kb[3], sk * sk * kb[4]}, {sk * sk * kb[4], sk * sk * kb[5]}};
      out[0] += g0 * b;
      out[1] += ga[0] * b + g0 * bp[0];
      out[2] += ga[1] * b + g0 * bp[1];
      auto second = [&](int p, int q) { return gab[p][q] * b + ga[p] * bp[q] + ga[q] * bp[p] + g0 * bpq[p][q]; };
      out[3] += second(0, 0);
      out[4] += second(0, 1);
      out[5] += second(1, 1);
    }
    return out;
  }

  /// K_0(y) = Gamma^(|y|) Omega(theta) / |y|^2, and its dyadic shells K_k.
  SampledFunction2D shell_samples(const Grid2D& g, int k = 0) const {
    return sample(g, [&](double y1, double y2) {
      const double r = std::hypot(y1, y2);
      if (r == 0.0) return cplx{};
      const double a = gamma_(std::ldexp(r, k));
      return a == 0.0 ? cplx{} : cplx(a * omega_.at(std::atan2(y2, y1)) / (r * r));
    });
  }

  /// Assembled symbol of T^j for inputs whose frequency pairs have norm in
  /// [r_lo, r_hi].
  DyadicSymbol2D symbol(int j, double r_lo, double r_hi) const {
    const int k_min = static_cast<int>(std::floor(std::log2(r_lo))) - j - 2;
    const int k_max = static_cast<int>(std::ceil(std::log2(r_hi))) - j + 2;
    const Annulus band{std::ldexp(0.5, j), std::ldexp(2.0, j)};
    return DyadicSymbol2D([this, j](double a, double b) { return kj0_hat(j, a, b); }, band, -k_max, -k_min);
  }

 private:
  SphereFunction omega_;
  Profile gamma_;
  RadialTable table_;
  std::vector<double> c_, s_;
};

// ---------------------------------------------------------------------------
// Grid decomposition

struct KernelDecomposition {
  Grid2D grid;
  int j_min = 0, j_max = 0;
  Spectrum2D K0_hat;                       // K_0^ on 2^{j_min-1} <= |xi| <= 2^{j_max+1}, zero elsewhere
  std::map<int, SampledFunction2D> Kj0;    // j -> K^j_0
  std::map<int, Spectrum2D> Kj0_hat;

  /// K^j_k as the dyadic dilate of K^j_0.
  SampledFunction2D piece(int j, int k) const { return dyadic_dilate(Kj0.at(j), k); }

  /// Energy of (K^j_0)^ outside 2^{j-1} <= |xi| <= 2^{j+1}, relative to the total.
  double out_of_band_energy(int j) const {
    const Spectrum2D s = forward_transform(Kj0.at(j));
    const double lo = std::ldexp(0.5, j), hi = std::ldexp(2.0, j);
    double in = 0.0, out = 0.0;
    for (std::size_t a = 0; a < grid.M; ++a)
      for (std::size_t b = 0; b < grid.M; ++b) {
        const double r = std::hypot(grid.m_of(a) / grid.L, grid.m_of(b) / grid.L);
        const double e = std::norm(s(a, b));
        (r >= lo && r <= hi ? in : out) += e;
      }
    return in + out > 0.0 ? out / (in + out) : 0.0;
  }
};

namespace detail {

inline double grid_radius(const Grid2D& g, std::size_t a, std::size_t b) {
  return std::hypot(static_cast<double>(g.m_of(a)) / g.L, static_cast<double>(g.m_of(b)) / g.L);
}

/// fn(xi) on the grid points with lo <= |xi| <= hi, using fn(-xi) = conj fn(xi).
template <class Fn>
Spectrum2D hermitian_fill(const Grid2D& g, double lo, double hi, Fn&& fn) {
  Spectrum2D s(g);
  const long long half = static_cast<long long>(g.M / 2);
  for (std::size_t a = 0; a < g.M; ++a)
    for (std::size_t b = 0; b < g.M; ++b) {
      const double r = grid_radius(g, a, b);
      if (r < lo || r > hi) continue;
      const long long m1 = g.m_of(a), m2 = g.m_of(b);
      const bool mirrored = -m1 < half && -m2 < half;
      if (mirrored && (m1 < 0 || (m1 == 0 && m2 < 0))) continue;  // filled from its mirror
      const cplx v = fn(static_cast<double>(m1) / g.L, static_cast<double>(m2) / g.L);
      s(a, b) = v;
      if (mirrored) s(static_cast<std::size_t>(half - m1), static_cast<std::size_t>(half - m2)) = std::conj(v);
    }
  return s;
}

}  // namespace detail

/// K_0^ read at the grid frequencies of the bands in use, then
/// K^j_0 = Gamma_j * K_0 on the frequency side. Spatial samples of K_0 would
/// alias the angular roughness of Omega; the radial transform does not.
inline KernelDecomposition drf_decompose(const RoughKernel& kernel, const Grid2D& g, int j_min, int j_max) {
  detail::require_vanishing(kernel.omega());
  if (j_max < j_min) throw error(errc::invalid_argument, "empty j range");
  if (g.x0 != 0.0 || g.y0 != 0.0) throw error(errc::invalid_argument, "decomposition grid must be centered");
  if (g.L < 8.0) throw error(errc::out_of_range, "grid period must exceed the support of K_0 (L >= 8)");
  if (std::ldexp(2.0, j_max) > g.nyquist() + 1e-12)
    throw error(errc::nyquist_violation, "band 2^{j_max+1} exceeds the grid Nyquist frequency");
  if (std::ldexp(2.0, j_min) < 4.0 / g.L)
    throw error(errc::out_of_range, "band 2^{j_min} is not resolved by the grid period");
  KernelDecomposition dec{g, j_min, j_max, {}, {}, {}};
  dec.K0_hat = detail::hermitian_fill(g, std::ldexp(0.5, j_min), std::ldexp(2.0, j_max),
                                      [&](double a, double b) { return kernel.k0_hat(a, b); });
  for (int j = j_min; j <= j_max; ++j) {
    Spectrum2D s = dec.K0_hat;
    for (std::size_t a = 0; a < g.M; ++a)
      for (std::size_t b = 0; b < g.M; ++b) s(a, b) *= kernel.gamma()(std::ldexp(detail::grid_radius(g, a, b), -j));
    dec.Kj0.emplace(j, inverse_transform(s));
    dec.Kj0_hat.emplace(j, std::move(s));
  }
  return dec;
}

/// Relative sup difference between K^j_k built directly from
/// Gamma^(2^{-j-k} xi) K_0^(2^{-k} xi) and the dilate of K^j_0.
inline double self_similarity_residual(const KernelDecomposition& dec, const RoughKernel& kernel, int j, int k) {
  const auto& g = dec.grid;
  const double lo = std::ldexp(0.5, j + k), hi = std::ldexp(2.0, j + k);
  const Spectrum2D s = detail::hermitian_fill(g, lo, hi, [&](double a, double b) {
    const double gm = kernel.gamma()(std::ldexp(std::hypot(a, b), -j - k));
    return gm == 0.0 ? cplx{} : gm * kernel.k0_hat(std::ldexp(a, -k), std::ldexp(b, -k));
  });
  const SampledFunction2D direct = inverse_transform(s);
  const SampledFunction2D dilated = dec.piece(j, k);
  return max_abs_diff(direct.values, dilated.values) / max_abs(direct.values);
}

/// Relative residual of sum_j (K^j_0)^ = K_0^ on 2^{j_min} <= |xi| <= 2^{j_max}.
inline double telescoping_residual(const KernelDecomposition& dec) {
  const auto& g = dec.grid;
  const double lo = std::ldexp(1.0, dec.j_min), hi = std::ldexp(1.0, dec.j_max);
  double worst = 0.0, peak = 0.0;
  for (std::size_t a = 0; a < g.M; ++a)
    for (std::size_t b = 0; b < g.M; ++b) {
      const double r = detail::grid_radius(g, a, b);
      if (r < lo || r > hi) continue;
      cplx sum{};
      for (const auto& [j, s] : dec.Kj0_hat) sum += s(a, b);
      worst = std::max(worst, std::abs(sum - dec.K0_hat(a, b)));
      peak = std::max(peak, std::abs(dec.K0_hat(a, b)));
    }
  return peak > 0.0 ? worst / peak : worst;
}

// ---------------------------------------------------------------------------
// Multiplier bounds

struct MikhlinReport {
  int j = 0;
  double omega_l1 = 0.0;
  // sup over 1 <= |xi| <= 2 of |xi|^|alpha| |d^alpha (K^j)^| / (2^j ||Omega||_1),
  // alpha = (0,0), (1,0), (0,1), (2,0), (1,1), (0,2).
  std::array<double, 6> constants{};

  double max_constant() const { return *std::max_element(constants.begin(), constants.end()); }
};

/// (K^j)^ is invariant under xi -> 2 xi, so the annulus 1 <= |xi| <= 2
/// carries the whole supremum.
inline MikhlinReport mikhlin_check(const RoughKernel& kernel, int j, int radii = 24, int angles = 96) {
  if (j > 0) throw error(errc::invalid_argument, "the multiplier check covers j <= 0");
  MikhlinReport rep;
  rep.j = j;
  rep.omega_l1 = kernel.omega().l1();
  const int order[6] = {0, 1, 1, 2, 2, 2};
  for (int a = 0; a < radii; ++a) {
    const double r = std::pow(2.0, static_cast<double>(a) / radii);
    for (int b = 0; b < angles; ++b) {
      const double t = two_pi * (b + 0.5) / angles;
      const Jet2 jet = kernel.kj_jet(j, r * std::cos(t), r * std::sin(t));
      for (int q = 0; q < 6; ++q) rep.constants[q] = std::max(rep.constants[q], std::pow(r, order[q]) * std::abs(jet[q]));
    }
  }
  const double denom = std::ldexp(1.0, j) * rep.omega_l1;
  for (auto& c : rep.constants) c = denom > 0.0 ? c / denom : 0.0;
  return rep;
}

/// Log-log slope of max_theta |K_0^(r theta)| over r in [r_lo, r_hi].
inline LineFit small_xi_slope(const RoughKernel& kernel, double r_lo = 1e-3, double r_hi = 1e-1, int points = 21,
                              int angles = 64) {
  std::vector<double> r, v;
  for (int i = 0; i < points; ++i) {
    const double x = r_lo * std::pow(r_hi / r_lo, static_cast<double>(i) / (points - 1));
    double m = 0.0;
    for (int b = 0; b < angles; ++b) {
      const double t = two_pi * (b + 0.5) / angles;
      m = std::max(m, std::abs(kernel.k0_hat(x * std::cos(t), x * std::sin(t))));
    }
    r.push_back(x);
    v.push_back(m);
  }
  return fit_loglog(r, v);
}

// ---------------------------------------------------------------------------
// The operator T_Omega = sum_j T^j

using InputPair = std::pair<SampledFunction1D, SampledFunction1D>;

/// Seeded pairs of random functions with spectrum in xi_lo <= |xi| <= xi_hi.
inline std::vector<InputPair> random_dictionary(const Grid1D& g, std::size_t n, std::uint64_t seed, double xi_lo,
                                                double xi_hi) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  auto draw = [&] {
    Spectrum1D s(g);
    for (std::size_t j = 0; j < g.M; ++j) {
      const double xi = std::abs(g.xi(g.m_of(j)));
      if (xi >= xi_lo && xi <= xi_hi) s.coeffs[j] = cplx(nd(rng), nd(rng));
    }
    return inverse_transform(s);
  };
  std::vector<InputPair> out;
  for (std::size_t i = 0; i < n; ++i) {
    auto a = draw();
    auto b = draw();
    out.emplace_back(std::move(a), std::move(b));
  }
  return out;
}

/// Lower bound for the L^{p1} x L^{p2} -> L^p norm: the largest ratio over
/// the dictionary.
inline double estimate_bilinear_norm(const DyadicSymbol2D& m, const std::vector<InputPair>& dict, double p1 = 4.0,
                                     double p2 = 4.0, double p = 2.0) {
  double best = 0.0;
  for (const auto& [f1, f2] : dict) {
    const double den = lp_norm(f1, p1) * lp_norm(f2, p2);
    if (den == 0.0) continue;
    best = std::max(best, lp_norm(apply_bilinear(m, f1, f2), p) / den);
  }
  return best;
}

struct TOmegaResult {
  SampledFunction1D value;
  std::map<int, double> per_j_norm;  // ||T^j(f1, f2)||_2
};

inline TOmegaResult apply_T_omega(const RoughKernel& kernel, const SampledFunction1D& f1, const SampledFunction1D& f2,
                                  int j_min, int j_max) {
  detail::require_vanishing(kernel.omega());
  if (!(f1.grid == f2.grid)) throw error(errc::grid_mismatch, "inputs on different grids");
  const auto& g = f1.grid;
  const double r_lo = 1.0 / g.L, r_hi = std::sqrt(2.0) * g.nyquist();
  TOmegaResult out{SampledFunction1D(g), {}};
  for (int j = j_min; j <= j_max; ++j) {
    const auto piece = apply_bilinear(kernel.symbol(j, r_lo, r_hi), f1, f2);
    out.per_j_norm[j] = lp_norm(piece, 2.0);
    for (std::size_t i = 0; i < g.M; ++i) out.value.values[i] += piece.values[i];
  }
  return out;
}

/// Largest relative change of mean, L^1 norm and K_0^ at a few frequencies
/// when the sphere sampling doubles.
inline double sphere_refinement(const std::function<SphereFunction(std::size_t)>& make, std::size_t Q,
                                const BumpFamily& fam) {
  const SphereFunction a = make(Q), b = make(2 * Q);
  double worst = std::abs(a.mean() - b.mean()) / std::max(1.0, b.l1());
  worst = std::max(worst, std::abs(a.l1() - b.l1()) / std::max(1e-300, b.l1()));
  const RoughKernel ka(a, fam, 4.0), kb(b, fam, 4.0);
  double peak = 0.0, diff = 0.0;
  for (double r : {0.3, 0.9, 1.7, 3.1})
    for (double t : {0.1, 1.3, 2.9, 4.4}) {
      const cplx va = ka.k0_hat(r * std::cos(t), r * std::sin(t)), vb = kb.k0_hat(r * std::cos(t), r * std::sin(t));
      diff = std::max(diff, std::abs(va - vb));
      peak = std::max(peak, std::abs(vb));
    }
  return std::max(worst, peak > 0.0 ? diff / peak : diff);
}

}  // namespace dyadic
