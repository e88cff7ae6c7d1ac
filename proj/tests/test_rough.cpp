#include <gtest/gtest.h>

#include "dyadic/rough.hpp"

using namespace dyadic;

namespace {

const BumpFamily& family() {
  static const BumpFamily fam = make_family(Grid1D(64.0, 1024), Grid2D(16.0, 128));
  return fam;
}

constexpr std::size_t Q = 512;

double max_abs(const SphereFunction& f) { return f.linf(); }

SphereFunction minus(const SphereFunction& a, const SphereFunction& b) {
  std::vector<double> v(a.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = a[i] - b[i];
  return SphereFunction(std::move(v));
}

}  // namespace

// ---------------------------------------------------------------------------
// Sphere functions and level sets

TEST(Vanishing, OddOmegaUnchanged) {
  const auto om = omegas::odd_harmonics(Q, 4);
  EXPECT_LT(max_abs(minus(project_vanishing(om), om)), 1e-15);
}

TEST(Vanishing, ConstantBecomesZero) {
  const auto om = SphereFunction::from(Q, [](double) { return 1.0; });
  EXPECT_LT(max_abs(project_vanishing(om)), 1e-15);
}

TEST(Vanishing, RandomMeanRemoved) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-3.0, 5.0);
  std::vector<double> v(Q);
  for (auto& x : v) x = u(rng);
  EXPECT_LT(std::abs(project_vanishing(SphereFunction(v)).mean()), 1e-14);
}

TEST(LevelSplit, LevelBoundaries) {
  EXPECT_EQ(level_of(0.3), 0);
  EXPECT_EQ(level_of(-1.0), 0);
  EXPECT_EQ(level_of(1.5), 1);
  EXPECT_EQ(level_of(2.0), 1);
  EXPECT_EQ(level_of(2.0001), 2);
  EXPECT_EQ(level_of(-4.0), 2);
  EXPECT_EQ(level_of(1000.0), 10);
}

TEST(LevelSplit, BoundedOmegaHasOnlyLevelZero) {
  const auto om = omegas::odd_harmonics(Q, 1);
  const auto s = level_split(om);
  EXPECT_EQ(s.mu_max, 0);
  ASSERT_EQ(s.pieces.size(), 1u);
  EXPECT_LT(max_abs(minus(s.pieces.at(0), om)), 1e-15);
}

TEST(LevelSplit, TwoLevelOmegaIsSinglePiece) {
  const auto om = omegas::two_level(Q, 32.0);
  const auto s = level_split(om);
  EXPECT_EQ(s.mu_max, 5);
  for (const auto& [mu, p] : s.pieces) {
    if (mu == 5)
      EXPECT_LT(max_abs(minus(p, om)), 1e-13);
    else
      EXPECT_EQ(max_abs(p), 0.0) << mu;
  }
}

TEST(LevelSplit, InvariantsOnRoughOmega) {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const auto om = omegas::random_rough(2048, seed);
    const auto s = level_split(om);
    EXPECT_GE(s.mu_max, 2);
    for (const auto& [mu, p] : s.pieces) {
      EXPECT_LT(std::abs(p.mean()), 1e-10) << mu;
      EXPECT_LE(p.linf(), std::ldexp(2.0, mu) + 1e-12) << mu;
      EXPECT_LE(p.l1(), 2.0 * s.level_mass.at(mu) + 1e-14) << mu;
    }
    EXPECT_LT(max_abs(minus(s.total(), project_vanishing(om))), 1e-10);
  }
}

TEST(LevelSplit, RequiresVanishingMoment) {
  EXPECT_THROW(level_split(SphereFunction::from(Q, [](double t) { return 1.0 + std::cos(t); })), error);
}

// ---------------------------------------------------------------------------
// Radial transform

TEST(RadialTable, MatchesDirectQuadrature) {
  const auto& fam = family();
  const RadialTable tab(fam.gamma, 8.0);
  for (int d = 0; d <= 2; ++d)
    for (double t : {0.0, 1e-4, 0.013, -0.4, 1.0 / 3.0, 2.71, -5.9, 7.99}) {
      const cplx ref = RadialTable::direct(fam.gamma, d, t);
      EXPECT_LT(std::abs(tab(d, t) - ref), 1e-8 * std::max(1.0, std::abs(ref))) << d << " " << t;
    }
  EXPECT_THROW(tab(0, 8.5), error);
}

TEST(RoughKernel, ZeroOmegaGivesZero) {
  const RoughKernel k(SphereFunction(std::vector<double>(Q, 0.0)), family(), 4.0);
  EXPECT_EQ(k.k0_hat(0.3, -0.7), cplx{});
  EXPECT_EQ(k.kj_hat(-2, 1.1, 0.4), cplx{});
}

TEST(RoughKernel, AnalyticTransformMatchesSpatialSamples) {
  const RoughKernel k(omegas::odd_harmonics(2048, 1), family());
  const Grid2D g(64.0, 1024);
  const Spectrum2D s = forward_transform(k.shell_samples(g));
  double worst = 0.0, peak = 0.0;
  for (std::size_t a = 448; a < 576; a += 5)
    for (std::size_t b = 448; b < 576; b += 7) {
      const cplx v = k.k0_hat(g.m_of(a) / g.L, g.m_of(b) / g.L);
      worst = std::max(worst, std::abs(v - s(a, b)));
      peak = std::max(peak, std::abs(v));
    }
  // Spatial samples alias the tail of K_0^ beyond the grid band.
  EXPECT_LT(worst, 1e-4 * peak);
}

TEST(RoughKernel, JetMatchesFiniteDifferences) {
  const RoughKernel k(omegas::odd_harmonics(Q, 3), family(), 8.0);
  const double d = 1e-5;
  for (int j : {0, -2}) {
    for (auto [x1, x2] : {std::pair{1.1, 0.3}, std::pair{-0.7, 1.2}}) {
      const Jet2 jet = k.kj_jet(j, x1, x2);
      EXPECT_LT(std::abs(jet[0] - k.kj_hat(j, x1, x2)), 1e-12);
      const cplx d1 = (k.kj_hat(j, x1 + d, x2) - k.kj_hat(j, x1 - d, x2)) / (2 * d);
      const cplx d2 = (k.kj_hat(j, x1, x2 + d) - k.kj_hat(j, x1, x2 - d)) / (2 * d);
      const Jet2 p1 = k.kj_jet(j, x1 + d, x2), m1 = k.kj_jet(j, x1 - d, x2);
      const Jet2 p2 = k.kj_jet(j, x1, x2 + d), m2 = k.kj_jet(j, x1, x2 - d);
      const double scale = std::max(1e-3, std::abs(jet[1]) + std::abs(jet[2]));
      EXPECT_LT(std::abs(jet[1] - d1), 1e-6 * scale);
      EXPECT_LT(std::abs(jet[2] - d2), 1e-6 * scale);
      const double s2 = std::max(1e-3, std::abs(jet[3]) + std::abs(jet[5]));
      EXPECT_LT(std::abs(jet[3] - (p1[1] - m1[1]) / (2 * d)), 1e-5 * s2);
      EXPECT_LT(std::abs(jet[4] - (p2[1] - m2[1]) / (2 * d)), 1e-5 * s2);
      EXPECT_LT(std::abs(jet[5] - (p2[2] - m2[2]) / (2 * d)), 1e-5 * s2);
    }
  }
}

TEST(RoughKernel, DyadicInvarianceOfKj) {
  const RoughKernel k(omegas::random_rough(Q, 9), family(), 8.0);
  for (int j : {-3, -1, 0})
    for (double t : {0.2, 2.0, 4.1}) {
      const double x1 = std::cos(t), x2 = std::sin(t);
      const cplx a = k.kj_hat(j, x1, x2), b = k.kj_hat(j, 2 * x1, 2 * x2), c = k.kj_hat(j, 0.5 * x1, 0.5 * x2);
      EXPECT_LT(std::abs(a - b), 1e-12 * std::max(1.0, std::abs(a)));
      EXPECT_LT(std::abs(a - c), 1e-12 * std::max(1.0, std::abs(a)));
    }
}

// ---------------------------------------------------------------------------
// Decomposition

namespace {

const RoughKernel& rough_kernel() {
  static const RoughKernel k(omegas::random_rough(Q, 5), family());
  return k;
}

const KernelDecomposition& rough_decomposition() {
  static const KernelDecomposition d = drf_decompose(rough_kernel(), Grid2D(64.0, 512), -3, 1);
  return d;
}

}  // namespace

TEST(Decomposition, ZeroOmegaGivesZeroPieces) {
  const RoughKernel k(SphereFunction(std::vector<double>(Q, 0.0)), family());
  const auto d = drf_decompose(k, Grid2D(16.0, 128), -1, 1);
  for (const auto& [j, K] : d.Kj0) EXPECT_EQ(max_abs(K.values), 0.0);
}

TEST(Decomposition, BandsStayInTheirAnnuli) {
  const auto& d = rough_decomposition();
  for (int j = d.j_min; j <= d.j_max; ++j) EXPECT_LT(d.out_of_band_energy(j), 1e-6) << j;
}

TEST(Decomposition, TelescopesToK0) { EXPECT_LT(telescoping_residual(rough_decomposition()), 1e-7); }

TEST(Decomposition, SelfSimilarUnderDilation) {
  const auto& d = rough_decomposition();
  for (int k : {-2, -1}) EXPECT_LT(self_similarity_residual(d, rough_kernel(), 0, k), 1e-8) << k;
  // k > 0 spreads the spectrum through a zero-padded transform, which only
  // sees the fundamental domain of the periodized kernel.
  EXPECT_LT(self_similarity_residual(d, rough_kernel(), -1, 1), 1e-5);
}

TEST(Decomposition, L1NormsBoundedUniformlyInJ) {
  const auto& d = rough_decomposition();
  const double l1 = rough_kernel().omega().l1();
  std::vector<double> ratio;
  for (const auto& [j, K] : d.Kj0) ratio.push_back(lp_norm(K, 1.0) / l1);
  const auto [lo, hi] = std::minmax_element(ratio.begin(), ratio.end());
  EXPECT_LT(*hi / *lo, 2.0);
}

TEST(Decomposition, RejectsUnresolvedBands) {
  EXPECT_THROW(drf_decompose(rough_kernel(), Grid2D(64.0, 512), -3, 2), error);
  EXPECT_THROW(drf_decompose(rough_kernel(), Grid2D(8.0, 256), -3, 0), error);
  EXPECT_THROW(drf_decompose(rough_kernel(), Grid2D(4.0, 64), 0, 1), error);
}

// ---------------------------------------------------------------------------
// Multiplier bounds

TEST(Mikhlin, ReportsAllMultiIndices) {
  const auto rep = mikhlin_check(rough_kernel(), -1, 8, 32);
  EXPECT_EQ(rep.j, -1);
  for (double c : rep.constants) EXPECT_GT(c, 0.0);
  EXPECT_THROW(mikhlin_check(rough_kernel(), 1), error);
}

TEST(Mikhlin, ConstantsConvergeAsJDecreases) {
  // Deep in the small-frequency regime K_0^ is linear and the constants
  // settle; successive ratios approach 1.
  const RoughKernel k(omegas::odd_harmonics(Q, 1), family());
  const double c6 = mikhlin_check(k, -6, 12, 48).constants[0];
  const double c7 = mikhlin_check(k, -7, 12, 48).constants[0];
  const double c8 = mikhlin_check(k, -8, 12, 48).constants[0];
  EXPECT_LT(std::abs(c7 / c6 - 1.0), 0.1);
  EXPECT_LT(std::abs(c8 / c7 - 1.0), std::abs(c7 / c6 - 1.0) + 1e-3);
}

TEST(SmallXi, VanishingMomentGivesLinearDecay) {
  EXPECT_GE(small_xi_slope(RoughKernel(omegas::odd_harmonics(Q, 2), family(), 4.0)).slope, 0.9);
  EXPECT_GE(small_xi_slope(rough_kernel()).slope, 0.9);
  const RoughKernel even(SphereFunction::from(Q, [](double t) { return std::cos(2 * t); }), family(), 4.0);
  EXPECT_GE(small_xi_slope(even).slope, 0.9);
}

TEST(SmallXi, MissingMomentGivesFlatSpectrum) {
  const RoughKernel k(SphereFunction::from(Q, [](double t) { return 1.0 + std::cos(t); }), family(), 4.0);
  EXPECT_LE(small_xi_slope(k).slope, 0.2);
}

TEST(Sphere, QuadratureRefinementIsStable) {
  EXPECT_LT(sphere_refinement([](std::size_t q) { return omegas::odd_harmonics(q, 3); }, 2048, family()), 1e-6);
}

// ---------------------------------------------------------------------------
// T_Omega

TEST(TOmega, ZeroOmegaGivesZero) {
  const RoughKernel k(SphereFunction(std::vector<double>(Q, 0.0)), family());
  const auto dict = random_dictionary(Grid1D(16.0, 64), 1, 3, 0.1, 1.5);
  const auto r = apply_T_omega(k, dict[0].first, dict[0].second, -2, 1);
  EXPECT_EQ(max_abs(r.value.values), 0.0);
}

TEST(TOmega, SumOfPiecesEqualsTotal) {
  const RoughKernel k(omegas::odd_harmonics(Q, 2), family());
  const auto dict = random_dictionary(Grid1D(16.0, 64), 1, 8, 0.1, 1.5);
  const auto& [f1, f2] = dict[0];
  const auto all = apply_T_omega(k, f1, f2, -2, 1);
  SampledFunction1D sum(f1.grid);
  for (int j = -2; j <= 1; ++j) {
    const auto one = apply_T_omega(k, f1, f2, j, j);
    EXPECT_NEAR(one.per_j_norm.at(j), all.per_j_norm.at(j), 1e-14 * std::max(1.0, all.per_j_norm.at(j)));
    for (std::size_t i = 0; i < sum.values.size(); ++i) sum.values[i] += one.value.values[i];
  }
  EXPECT_LT(max_abs_diff(sum.values, all.value.values), 1e-12 * max_abs(all.value.values));
}

TEST(TOmega, SmoothOmegaDecaysGeometricallyInJ) {
  const RoughKernel k(omegas::odd_harmonics(Q, 1), family());
  const Grid1D g(16.0, 64);
  const auto dict = random_dictionary(g, 3, 17, 0.1, 1.9);
  std::vector<double> js, logn;
  for (int j = -8; j <= -5; ++j) {
    js.push_back(j);
    logn.push_back(std::log2(estimate_bilinear_norm(k.symbol(j, 1.0 / g.L, std::sqrt(2.0) * g.nyquist()), dict)));
  }
  const double ratio = std::exp2(fit_line(js, logn).slope);
  EXPECT_GE(ratio, 1.6);
  EXPECT_LE(ratio, 2.6);
}
