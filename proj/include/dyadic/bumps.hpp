#pragma once

// Frequency-side C^infinity cutoffs: phi, psi, psi~, vartheta, Gamma, eta,
// beta. Every profile is radial, built from the transition
//
//   S(t) = e(t) / (e(t) + e(1 - t)),   e(t) = exp(-1/t) for t > 0, else 0,
//
// which is 0 for t <= 0, 1 for t >= 1 and smooth in between. The annulus
// profiles are differences of dilated cutoffs, so their dyadic sums
// telescope.

#include <array>
#include <cmath>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "dyadic/error.hpp"
#include "dyadic/grid.hpp"

namespace dyadic {

/// Smooth transition S and its first two derivatives.
struct Transition {
  static double e(double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; }

  static double value(double t) {
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    const double a = e(t), b = e(1.0 - t);
    return a / (a + b);
  }

  static double d1(double t) {
    if (t <= 0.0 || t >= 1.0) return 0.0;
    const double s = value(t);
    return s * (1.0 - s) * weight(t);
  }

  static double d2(double t) {
    if (t <= 0.0 || t >= 1.0) return 0.0;
    const double s = value(t);
    const double w = weight(t);
    const double dw = -2.0 / (t * t * t) + 2.0 / ((1.0 - t) * (1.0 - t) * (1.0 - t));
    const double ds = s * (1.0 - s) * w;
    return ds * (1.0 - 2.0 * s) * w + s * (1.0 - s) * dw;
  }

 private:
  static double weight(double t) { return 1.0 / (t * t) + 1.0 / ((1.0 - t) * (1.0 - t)); }
};

/// A radial profile r -> p(r) with derivatives in r and support metadata.
struct Profile {
  std::string name;
  std::function<double(double)> value;
  std::function<double(double)> d1;
  std::function<double(double)> d2;
  double support_lo = 0.0;  // p(r) = 0 for r < support_lo
  double support_hi = 0.0;  // p(r) = 0 for r > support_hi

  double operator()(double r) const { return value(std::abs(r)); }
  double at(double xi1, double xi2) const { return value(std::hypot(xi1, xi2)); }
};

namespace profiles {

/// 1 for r <= a, 0 for r >= b.
inline Profile cutoff(double a, double b, std::string name = "cutoff") {
  const double w = b - a;
  Profile p;
  p.name = std::move(name);
  p.value = [=](double r) { return 1.0 - Transition::value((r - a) / w); };
  p.d1 = [=](double r) { return -Transition::d1((r - a) / w) / w; };
  p.d2 = [=](double r) { return -Transition::d2((r - a) / w) / (w * w); };
  p.support_lo = 0.0;
  p.support_hi = b;
  return p;
}

/// cutoff(r / s_outer) - cutoff(r / s_inner), with base cutoff 1 on [0,1]
/// and 0 on [2, inf). Support [s_inner / ... ] is tracked explicitly.
inline Profile cutoff_difference(double outer_scale, double inner_scale, std::string name) {
  const Profile base = cutoff(1.0, 2.0);
  Profile p;
  p.name = std::move(name);
  p.value = [=](double r) { return base.value(r / outer_scale) - base.value(r / inner_scale); };
  p.d1 = [=](double r) { return base.d1(r / outer_scale) / outer_scale - base.d1(r / inner_scale) / inner_scale; };
  p.d2 = [=](double r) {
    return base.d2(r / outer_scale) / (outer_scale * outer_scale) -
           base.d2(r / inner_scale) / (inner_scale * inner_scale);
  };
  p.support_lo = inner_scale;
  p.support_hi = 2.0 * outer_scale;
  return p;
}

/// Rises on [a, b], equals 1 on [b, c], falls on [c, d].
inline Profile plateau(double a, double b, double c, double d, std::string name) {
  const double wr = b - a, wf = d - c;
  Profile p;
  p.name = std::move(name);
  p.value = [=](double r) {
    return Transition::value((r - a) / wr) * (1.0 - Transition::value((r - c) / wf));
  };
  p.d1 = [=](double r) {
    const double up = Transition::value((r - a) / wr), dn = 1.0 - Transition::value((r - c) / wf);
    return Transition::d1((r - a) / wr) / wr * dn - up * Transition::d1((r - c) / wf) / wf;
  };
  p.d2 = [=](double r) {
    const double up = Transition::value((r - a) / wr), dn = 1.0 - Transition::value((r - c) / wf);
    const double up1 = Transition::d1((r - a) / wr) / wr, dn1 = -Transition::d1((r - c) / wf) / wf;
    const double up2 = Transition::d2((r - a) / wr) / (wr * wr), dn2 = -Transition::d2((r - c) / wf) / (wf * wf);
    return up2 * dn + 2.0 * up1 * dn1 + up * dn2;
  };
  p.support_lo = a;
  p.support_hi = d;
  return p;
}

}  // namespace profiles

struct BumpParams {
  double eta_radius = 0.01;        // supp(eta^) in |xi| <= eta_radius
  double eta_plateau = 0.5;        // eta^ = 1 on |xi| <= eta_plateau * eta_radius
  std::array<double, 4> beta_edges{10.0 / 11.0, 20.0 / 21.0, 21.0 / 20.0, 11.0 / 10.0};
  int j_max = 6;                   // dyadic range [-j_max, j_max] used by validators
};

struct BumpFamily {
  Profile phi, psi, psi_tilde, vartheta, gamma, eta, beta;
  double C_partition = 1.0;
  double vartheta_sum = 0.0;  // value of sum_k vartheta^(2^k xi)
  int k0 = 1;
  BumpParams params;
  Grid1D grid;
  Grid2D grid2;

  /// The spatial profile on the family grid (real up to round-off).
  SampledFunction1D sampled(const Profile& p) const {
    return from_fourier(grid, [&p](double xi) { return cplx(p(xi)); });
  }
  SampledFunction2D sampled2(const Profile& p) const {
    return from_fourier(grid2, [&p](double a, double b) { return cplx(p.at(a, b)); });
  }

  /// psi^(2^{-k} xi): the multiplier of the k-th Littlewood-Paley piece.
  double psi_k(int k, double xi) const { return psi(std::ldexp(xi, -k)); }
  double phi_k(int k, double xi) const { return phi(std::ldexp(xi, -k)); }
};

/// Dyadic sum sum_{k in [k_lo, k_hi]} p(2^k xi).
inline double dyadic_sum(const Profile& p, double xi, int k_lo, int k_hi) {
  double s = 0.0;
  for (int k = k_lo; k <= k_hi; ++k) s += p(std::ldexp(xi, k));
  return s;
}

/// Smallest k0 with psi^(2^{-j} .) vanishing on supp(psi^) for |j| > k0.
inline int overlap_depth(const Profile& p) {
  const double ratio = std::log2(p.support_hi / p.support_lo);
  return static_cast<int>(std::ceil(ratio - 1e-12)) - 1;
}

inline BumpFamily make_family(const Grid1D& grid, const Grid2D& grid2, const BumpParams& params = {}) {
  if (params.j_max < 1) throw error(errc::invalid_argument, "j_max must be >= 1");
  if (grid.nyquist() < 4.0 || grid2.nyquist() < 4.0)
    throw error(errc::infeasible, "grid too coarse: Nyquist frequency must reach 4");
  if (grid.L < 4.0 || grid2.L < 4.0)
    throw error(errc::infeasible, "grid too small: frequency spacing must be <= 1/4");
  if (!(params.eta_radius > 0.0) || !(params.eta_plateau >= 0.0 && params.eta_plateau < 1.0))
    throw error(errc::invalid_argument, "eta parameters out of range");
  const auto& e = params.beta_edges;
  if (!(0.0 < e[0] && e[0] < e[1] && e[1] <= e[2] && e[2] < e[3]))
    throw error(errc::invalid_argument, "beta edges must be increasing");

  BumpFamily fam;
  fam.params = params;
  fam.grid = grid;
  fam.grid2 = grid2;
  fam.phi = profiles::cutoff(1.0, 2.0, "phi");
  fam.psi = profiles::cutoff_difference(1.0, 0.5, "psi");
  fam.gamma = profiles::cutoff_difference(1.0, 0.5, "Gamma");
  fam.vartheta = profiles::cutoff_difference(2.0, 0.25, "vartheta");

  // C is whatever the construction yields, read off at a generic frequency.
  fam.C_partition = dyadic_sum(fam.psi, 1.2345678, -4, 4);
  fam.vartheta_sum = dyadic_sum(fam.vartheta, 1.2345678, -6, 6);

  fam.k0 = overlap_depth(fam.psi);
  const double k0s = std::ldexp(1.0, fam.k0);
  const double C = fam.C_partition;
  fam.psi_tilde = profiles::cutoff_difference(k0s, 0.5 / k0s, "psi_tilde");
  {
    auto base = fam.psi_tilde;
    fam.psi_tilde.value = [base, C](double r) { return base.value(r) / C; };
    fam.psi_tilde.d1 = [base, C](double r) { return base.d1(r) / C; };
    fam.psi_tilde.d2 = [base, C](double r) { return base.d2(r) / C; };
  }

  const double er = params.eta_radius;
  fam.eta = profiles::cutoff(params.eta_plateau * er, er, "eta");
  fam.beta = profiles::plateau(e[0], e[1], e[2], e[3], "beta");
  return fam;
}

// ---------------------------------------------------------------------------
// Validation

struct Check {
  std::string name;
  double residual = 0.0;
  double tolerance = 0.0;
  bool passed() const { return residual <= tolerance; }
};

struct FamilyReport {
  std::vector<Check> checks;
  double C_partition = 0.0;
  double vartheta_sum = 0.0;
  int k0 = 0;

  bool all_passed() const {
    for (const auto& c : checks)
      if (!c.passed()) return false;
    return true;
  }
  const Check* find(const std::string& name) const {
    for (const auto& c : checks)
      if (c.name == name) return &c;
    return nullptr;
  }
};

namespace detail {

/// max |p(r)| over r outside [lo, hi], on a fine sweep around the support.
inline double outside_support(const Profile& p, double lo, double hi) {
  double worst = 0.0;
  const int n = 4000;
  for (int i = 0; i <= n; ++i) {
    const double r_in = lo * static_cast<double>(i) / n;  // [0, lo]
    if (r_in < lo) worst = std::max(worst, std::abs(p(r_in)));
    const double r_out = hi * (1.0 + 3.0 * static_cast<double>(i) / n);  // [hi, 4 hi]
    if (r_out > hi) worst = std::max(worst, std::abs(p(r_out)));
  }
  return worst;
}

inline double off_plateau(const Profile& p, double lo, double hi) {
  double worst = 0.0;
  const int n = 2000;
  for (int i = 0; i <= n; ++i) {
    const double r = lo + (hi - lo) * static_cast<double>(i) / n;
    worst = std::max(worst, std::abs(p(r) - 1.0));
  }
  return worst;
}

}  // namespace detail

inline constexpr double family_tolerance = 1e-8;

inline FamilyReport validate_family(const BumpFamily& fam, std::uint64_t seed = 12345) {
  FamilyReport rep;
  rep.C_partition = fam.C_partition;
  rep.vartheta_sum = fam.vartheta_sum;
  rep.k0 = fam.k0;
  const double tol = family_tolerance;
  const int J = fam.params.j_max;
  auto add = [&](std::string name, double r) { rep.checks.push_back({std::move(name), r, tol}); };

  add("phi_hat(0) = 1", std::abs(fam.phi(0.0) - 1.0));
  add("supp phi_hat in |xi| <= 2", detail::outside_support(fam.phi, 0.0, 2.0));
  add("supp psi_hat in 1/2 <= |xi| <= 2", detail::outside_support(fam.psi, 0.5, 2.0));

  // Partition of unity on grid frequencies and random frequencies of the
  // safe band 2^{-J+1} <= |xi| <= 2^{J-1}.
  {
    const double lo = std::ldexp(1.0, -J + 1), hi = std::ldexp(1.0, J - 1);
    double worst = 0.0;
    for (std::size_t j = 0; j < fam.grid.M; ++j) {
      const double xi = std::abs(fam.grid.xi(fam.grid.m_of(j)));
      if (xi < lo || xi > hi) continue;
      worst = std::max(worst, std::abs(dyadic_sum(fam.psi, xi, -J - 2, J + 2) - fam.C_partition));
    }
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(std::log2(lo), std::log2(hi));
    for (int i = 0; i < 100; ++i) {
      const double xi = std::exp2(u(rng));
      worst = std::max(worst, std::abs(dyadic_sum(fam.psi, xi, -J - 2, J + 2) - fam.C_partition));
    }
    add("sum_k psi_hat(2^k xi) = C", worst);
  }

  // psi~ reproduces on supp(psi^).
  add("psi_tilde_hat = 1 on supp psi_hat", detail::off_plateau(fam.psi_tilde, fam.psi.support_lo, fam.psi.support_hi));

  add("supp vartheta_hat in 1/4 <= |xi| <= 4", detail::outside_support(fam.vartheta, 0.25, 4.0));
  add("vartheta_hat = 1 on 1/2 <= |xi| <= 2", detail::off_plateau(fam.vartheta, 0.5, 2.0));
  {
    double worst = 0.0;
    for (int i = 0; i <= 512; ++i) {
      const double xi = std::exp2(static_cast<double>(i) / 512.0);
      worst = std::max(worst, std::abs(dyadic_sum(fam.vartheta, xi, -8, 8) - fam.vartheta_sum));
    }
    add("sum_k vartheta_hat(2^k xi) constant", worst);
  }

  add("supp Gamma_hat in 1/2 <= |xi| <= 2", detail::outside_support(fam.gamma, 0.5, 2.0));
  {
    // Telescoping on R^2: sum_{k=-5}^{5} Gamma^(2^{-k} xi) = 1 for 2^-4 <= |xi| <= 2^4.
    double worst = 0.0;
    std::mt19937_64 rng(seed + 1);
    std::uniform_real_distribution<double> lr(-4.0, 4.0), ang(0.0, two_pi);
    for (int i = 0; i < 400; ++i) {
      const double r = std::exp2(lr(rng)), t = ang(rng);
      const double a = r * std::cos(t), b = r * std::sin(t);
      double s = 0.0;
      for (int k = -5; k <= 5; ++k) s += fam.gamma.at(std::ldexp(a, -k), std::ldexp(b, -k));
      worst = std::max(worst, std::abs(s - 1.0));
    }
    add("sum_k Gamma_hat(2^-k xi) = 1", worst);
  }

  add("supp eta_hat in |xi| <= 1/100", detail::outside_support(fam.eta, 0.0, fam.params.eta_radius));
  const auto& e = fam.params.beta_edges;
  add("supp beta_hat in 10/11 <= |xi| <= 11/10", detail::outside_support(fam.beta, e[0], e[3]));
  add("beta_hat = 1 on 20/21 <= |xi| <= 21/20", detail::off_plateau(fam.beta, e[1], e[2]));
  {
    double worst = 0.0;
    for (std::size_t j = 0; j < fam.grid.M; ++j) {
      const double xi = fam.grid.xi(fam.grid.m_of(j));
      if (std::abs(xi) >= e[1] && std::abs(xi) <= e[2]) worst = std::max(worst, std::abs(fam.beta(xi) - 1.0));
    }
    add("beta_hat = 1 at grid frequencies in [20/21, 21/20]", worst);
  }

  // Radial profiles are even and real, hence real-valued in space.
  {
    double worst = 0.0;
    for (const Profile* p : {&fam.phi, &fam.psi, &fam.vartheta, &fam.beta}) {
      const auto s = fam.sampled(*p);
      for (const auto& v : s.values) worst = std::max(worst, std::abs(v.imag()));
    }
    rep.checks.push_back({"spatial profiles real", worst, 1e-12});
  }
  return rep;
}

}  // namespace dyadic
