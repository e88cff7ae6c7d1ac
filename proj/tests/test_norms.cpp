#include <gtest/gtest.h>

#include <random>

#include "dyadic/norms.hpp"

using namespace dyadic;

namespace {

const BumpFamily& family() {
  static const BumpFamily fam = make_family(Grid1D(64.0, 1024), Grid2D(16.0, 128));
  return fam;
}

SampledFunction1D random_band(const Grid1D& g, std::mt19937_64& rng, double xi_lo, double xi_hi) {
  std::normal_distribution<double> n;
  Spectrum1D s(g);
  for (std::size_t j = 0; j < g.M; ++j) {
    const double xi = std::abs(g.xi(g.m_of(j)));
    if (xi >= xi_lo && xi <= xi_hi) s.coeffs[j] = cplx(n(rng), n(rng));
  }
  return inverse_transform(s);
}

SampledFunction1D shift_samples(const SampledFunction1D& f, std::size_t d) {
  SampledFunction1D out(f.grid);
  for (std::size_t i = 0; i < f.grid.M; ++i) out.values[(i + d) % f.grid.M] = f.values[i];
  return out;
}

}  // namespace

TEST(Lp, PlateauRefinement) {
  const double w = 3.0;
  const auto edge = profiles::plateau(-w / 2 - 0.25, -w / 2 + 0.25, w / 2 - 0.25, w / 2 + 0.25, "plateau");
  auto at = [&](std::size_t M, double p) {
    const Grid1D g(16.0, M);
    return lp_norm(sample(g, [&](double x) { return cplx(edge.value(x)); }), p);
  };
  for (double p : {1.0, 2.0, 3.0}) {
    EXPECT_NEAR(at(2048, p), at(4096, p), 1e-8 * at(4096, p));
    EXPECT_NEAR(at(4096, p), std::pow(w, 1.0 / p), 0.05 * std::pow(w, 1.0 / p));
  }
}

TEST(Lp, HomogeneityAndParseval) {
  const Grid1D g(16.0, 256);
  std::mt19937_64 rng(1);
  const auto f = random_band(g, rng, 0.0, 6.0);
  for (double p : {1.0, 2.5, 4.0, double(INFINITY)})
    EXPECT_NEAR(lp_norm(scale(f, cplx(-3.0, 4.0)), p), 5.0 * lp_norm(f, p), 1e-12 * 5.0 * lp_norm(f, p));
  const auto s = forward_transform(f);
  double e = 0.0;
  for (const auto& c : s.coeffs) e += std::norm(c);
  EXPECT_NEAR(lp_norm(f, 2.0), std::sqrt(e / g.L), 1e-10 * lp_norm(f, 2.0));
}

TEST(Lp, MultibandEvenPowersMatchDense) {
  MultibandFunction1D f(Grid1D(16.0, 256));
  std::mt19937_64 rng(2);
  std::normal_distribution<double> n;
  f.add_fourier_window(30.0, 31.0, [&](double) { return cplx(n(rng), n(rng)); });
  f.add_fourier_window(-0.5, 0.5, [&](double) { return cplx(n(rng), n(rng)); });
  const auto d = f.to_dense(4096);
  for (double p : {2.0, 4.0, 6.0}) EXPECT_NEAR(lp_norm(f, p), lp_norm(d, p), 1e-10 * lp_norm(d, p)) << p;
}

TEST(Hardy, SingleLpPieceRatioIsFrozen) {
  const auto& fam = family();
  const Grid1D g(64.0, 1024);
  std::mt19937_64 rng(3);
  const auto f = lp_piece(random_band(g, rng, 0.0, 7.0), 1, fam);
  const double ratio = hardy_norm(f, 2.0, fam).value / lp_norm(f, 2.0);
  // Calibrated once for this family and seed.
  EXPECT_GT(ratio, 1.0);
  EXPECT_LT(ratio, 1.6);
}

TEST(Hardy, HomogeneityAndTranslation) {
  const auto& fam = family();
  const Grid1D g(64.0, 1024);
  std::mt19937_64 rng(4);
  const auto f = random_band(g, rng, 0.1, 5.0);
  for (double p : {1.0, 2.0, 3.0}) {
    const double a = hardy_norm(f, p, fam).value;
    EXPECT_NEAR(hardy_norm(scale(f, 2.5), p, fam).value, 2.5 * a, 1e-12 * a);
    EXPECT_NEAR(hardy_norm(shift_samples(f, 77), p, fam).value, a, 1e-10 * a);
  }
}

TEST(Hardy, DominatesFinestPiece) {
  const auto& fam = family();
  const Grid1D g(64.0, 1024);
  std::mt19937_64 rng(5);
  const auto f = random_band(g, rng, 0.0, 5.0);
  const auto H = hardy_maximal(f, fam);
  const KRange r = hardy_k_range(f);
  Spectrum1D s = forward_transform(f);
  for (std::size_t j = 0; j < g.M; ++j) s.coeffs[j] *= fam.phi_k(r.hi, g.xi(g.m_of(j)));
  const auto top = inverse_transform(s);
  for (std::size_t i = 0; i < g.M; ++i) EXPECT_GE(H.values[i].real(), std::abs(top.values[i]) * (1 - 1e-14));
}

TEST(Hardy, WarnsOnNonzeroMean) {
  const auto& fam = family();
  const Grid1D g(64.0, 1024);
  const auto f = from_fourier(g, [&](double xi) { return cplx(fam.phi(xi)); });
  EXPECT_FALSE(hardy_norm(f, 1.0, fam).warnings.empty());
  std::mt19937_64 rng(6);
  EXPECT_TRUE(hardy_norm(random_band(g, rng, 0.5, 2.0), 1.0, fam).warnings.empty());
}

TEST(Bmo, ConstantAndHomogeneity) {
  const auto& fam = family();
  const Grid1D g(64.0, 1024);
  EXPECT_LT(bmo_norm(sample(g, [](double) { return cplx(4.0); }), fam).value, 1e-10);
  std::mt19937_64 rng(7);
  const auto f = random_band(g, rng, 0.0, 5.0);
  const double a = bmo_norm(f, fam).value;
  EXPECT_NEAR(bmo_norm(scale(f, -3.0), fam).value, 3.0 * a, 1e-12 * a);
}

TEST(Bmo, SupremizingIntervalMatchesScale) {
  const auto& fam = family();
  const Grid1D g(64.0, 1024);
  for (int k0 : {-1, 0, 1, 2}) {
    const auto f = from_fourier(g, [&](double xi) { return cplx(fam.psi_k(k0, xi)); });
    const auto rep = bmo_norm(f, fam);
    const double len = rep.diagnostics.at("sup_length");
    EXPECT_LE(std::abs(std::log2(len) + k0), 1.0) << k0;
  }
}

TEST(Bmo, BoundedByLinfWithStableConstant) {
  const auto& fam = family();
  const Grid1D g(64.0, 1024);
  std::vector<double> c;
  for (int t = 0; t < 8; ++t) {
    std::mt19937_64 rng(50 + t);
    const auto f = random_band(g, rng, 0.0, 6.0);
    c.push_back(bmo_norm(f, fam).value / lp_norm(f, INFINITY));
  }
  const double ref = c.front();
  for (double v : c) EXPECT_NEAR(v, ref, 0.2 * ref);
}

TEST(Orlicz, ClosedForms) {
  const auto c = SphereFunction::from(64, [](double) { return 2.75; });
  EXPECT_NEAR(orlicz_norm(c, 0.0).value, 2.75, 1e-9 * 2.75);
  const auto r = omegas::random_rough(2048, 3);
  EXPECT_NEAR(orlicz_norm(r, 0.0).value, r.l1(), 1e-9 * r.l1());
  EXPECT_EQ(orlicz_norm(SphereFunction(std::vector<double>(16, 0.0)), 1.0).value, 0.0);
}

TEST(Orlicz, AlphaTwoOnConstantMatchesFixedPoint) {
  const auto one = SphereFunction::from(32, [](double) { return 1.0; });
  const double bis = orlicz_norm(one, 2.0).value;
  double lam = 1.0;
  for (int i = 0; i < 200; ++i) lam = std::pow(std::log(std::numbers::e + 1.0 / lam), 2.0);
  EXPECT_NEAR(bis, lam, 1e-9 * lam);
}

TEST(Orlicz, ResidualAndMonotone) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto om = omegas::random_rough(1024, seed);
    double prev = 0.0;
    for (double a : {0.0, 1.0, 4.0 / 3.0, 2.0}) {
      const auto rep = orlicz_norm(om, a);
      EXPECT_LT(std::abs(luxemburg_functional(om, a, rep.value) - 1.0), 1e-9);
      EXPECT_GE(rep.value, prev);
      prev = rep.value;
    }
  }
}

TEST(DLambda, LambdaZeroIsL1AndMonotone) {
  const auto& fam = family();
  const auto K = fam.sampled(fam.beta);
  EXPECT_NEAR(d_lambda(K, 0.0).value, lp_norm(K, 1.0), 1e-12 * lp_norm(K, 1.0));
  double prev = 0.0;
  for (double l : {0.0, 0.5, 1.0, 2.0}) {
    const double v = d_lambda(K, l).value;
    EXPECT_GE(v, prev);
    prev = v;
  }
}

TEST(DLambda, ShiftedBetaScaling) {
  const auto& fam = make_family(Grid1D(2048.0, 16384), Grid2D(16.0, 128));
  auto K = fam.sampled(fam.beta);
  const double l1 = lp_norm(K, 1.0);
  for (int zeta = 8; zeta <= 24; zeta += 4) {
    K.grid.x0 = std::ldexp(1.0, zeta);
    for (double lambda : {1.0, 2.0}) {
      const double ratio = d_lambda(K, lambda).value / (std::pow(std::log(std::numbers::e + K.grid.x0), lambda) * l1);
      EXPECT_GE(ratio, 0.8) << zeta;
      EXPECT_LE(ratio, 1.25) << zeta;
    }
  }
}

TEST(DLambda, SeparableMatches2D) {
  const Grid1D g(8.0, 64);
  const auto a = sample(g, [](double x) { return cplx(std::exp(-x * x)); });
  auto b = sample(g, [](double x) { return cplx(std::exp(-2 * x * x)); });
  b.grid.x0 = 1.5;
  const Grid2D g2(8.0, 64, 0.0, 1.5);
  SampledFunction2D K(g2);
  for (std::size_t i = 0; i < 64; ++i)
    for (std::size_t j = 0; j < 64; ++j) K(i, j) = a.values[i] * b.values[j];
  for (double l : {0.0, 1.0, 2.0})
    EXPECT_NEAR(d_lambda_separable(a, b, l).value, d_lambda(K, l).value, 1e-12 * d_lambda(K, l).value);
}

TEST(Dlambda, SeparableBinningIsSecondOrder) {
  const Grid1D g(256.0, 4096, 300.0);
  const auto k = sample(g, [](double x) { return cplx(std::exp(-0.01 * (x - 300) * (x - 300)) * std::cos(6.0 * x)); });
  for (double l : {1.0, 2.0}) {
    const double exact = d_lambda_separable(k, k, l).value;
    EXPECT_NEAR(d_lambda_separable(k, k, l, 0.0, 1.0).value, exact, 1e-6 * exact);
  }
}
