#include <gtest/gtest.h>

#include <random>

#include "dyadic/bumps.hpp"
#include "dyadic/grid.hpp"

using namespace dyadic;

namespace {

std::vector<cplx> direct_dft(const SampledFunction1D& f) {
  const auto& g = f.grid;
  std::vector<cplx> c(g.M);
  for (std::size_t j = 0; j < g.M; ++j) {
    const double xi = g.xi(g.m_of(j));
    cplx acc{};
    for (std::size_t i = 0; i < g.M; ++i) acc += f.values[i] * std::polar(1.0, -two_pi * g.x(i) * xi);
    c[j] = acc * g.h();
  }
  return c;
}

SampledFunction1D random_bandlimited(const Grid1D& g, std::mt19937_64& rng, long long band) {
  std::normal_distribution<double> n;
  Spectrum1D s(g);
  for (long long m = -band; m <= band; ++m) s.coeffs[g.j_of(m)] = cplx(n(rng), n(rng));
  return inverse_transform(s);
}

double l1(const SampledFunction1D& f) {
  double a = 0.0;
  for (const auto& v : f.values) a += std::abs(v);
  return a * f.grid.h();
}

}  // namespace

TEST(Grid, RejectsBadShapes) {
  EXPECT_THROW(Grid1D(1.0, 100), error);
  EXPECT_THROW(Grid1D(-1.0, 64), error);
  EXPECT_THROW(Grid2D(1.0, 3), error);
}

TEST(Transform, ZeroMapsToZero) {
  const Grid1D g(8.0, 64);
  const auto s = forward_transform(SampledFunction1D(g));
  EXPECT_EQ(max_abs(s.coeffs), 0.0);
}

TEST(Transform, CharacterHasCoefficientL) {
  const Grid1D g(8.0, 64);
  for (long long m0 : {-32LL, -5LL, 0LL, 7LL, 31LL}) {
    const auto f = sample(g, [&](double x) { return std::polar(1.0, two_pi * x * m0 / g.L); });
    const auto s = forward_transform(f);
    for (std::size_t j = 0; j < g.M; ++j) {
      const cplx want = g.m_of(j) == m0 ? cplx(g.L) : cplx{};
      EXPECT_NEAR(std::abs(s.coeffs[j] - want), 0.0, 1e-12 * g.L) << m0;
    }
  }
}

TEST(Transform, MatchesDirectDft) {
  for (double x0 : {0.0, 0.37, -3.0}) {
    const Grid1D g(10.0, 128, x0);
    const auto f = sample(g, [](double x) { return cplx(std::exp(-x * x), 0.3 * x * std::exp(-x * x)); });
    const auto s = forward_transform(f);
    const auto d = direct_dft(f);
    EXPECT_LT(max_abs_diff(s.coeffs, d), 1e-10 * max_abs(d)) << x0;
  }
}

TEST(Transform, RoundTrip1D2D) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> n;
  const Grid1D g(5.0, 256, 1.25);
  SampledFunction1D f(g);
  for (auto& v : f.values) v = cplx(n(rng), n(rng));
  const auto back = inverse_transform(forward_transform(f));
  EXPECT_LT(max_abs_diff(back.values, f.values), 1e-12 * max_abs(f.values));

  const Grid2D g2(3.0, 32, 0.5, -0.25);
  SampledFunction2D F(g2);
  for (auto& v : F.values) v = cplx(n(rng), n(rng));
  const auto back2 = inverse_transform(forward_transform(F));
  EXPECT_LT(max_abs_diff(back2.values, F.values), 1e-12 * max_abs(F.values));
}

TEST(Transform, Parseval) {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> n;
  for (int trial = 0; trial < 10; ++trial) {
    const Grid1D g(7.0, 512);
    SampledFunction1D f(g);
    for (auto& v : f.values) v = cplx(n(rng), n(rng));
    const auto s = forward_transform(f);
    double a = 0.0, b = 0.0;
    for (const auto& v : f.values) a += std::norm(v);
    for (const auto& c : s.coeffs) b += std::norm(c);
    a *= g.h();
    b /= g.L;
    EXPECT_NEAR(a, b, 1e-10 * a);
  }
  const Grid2D g2(4.0, 64);
  SampledFunction2D F(g2);
  for (auto& v : F.values) v = cplx(n(rng), n(rng));
  const auto S = forward_transform(F);
  double a = 0.0, b = 0.0;
  for (const auto& v : F.values) a += std::norm(v);
  for (const auto& c : S.coeffs) b += std::norm(c);
  EXPECT_NEAR(a * g2.h() * g2.h(), b / (g2.L * g2.L), 1e-10 * a * g2.h() * g2.h());
}

TEST(Convolve, DeltaIsIdentity) {
  std::mt19937_64 rng(3);
  const Grid1D g(6.0, 128);
  const auto f = random_bandlimited(g, rng, 40);
  Spectrum1D one(g);
  for (auto& c : one.coeffs) c = 1.0;
  const auto out = convolve(f, inverse_transform(one));
  EXPECT_LT(max_abs_diff(out.values, f.values), 1e-12 * max_abs(f.values));
}

TEST(Convolve, DisjointSpectraGiveZero) {
  const Grid1D g(6.0, 128);
  const auto a = sample(g, [&](double x) { return std::polar(1.0, two_pi * x * 3.0 / g.L); });
  const auto b = sample(g, [&](double x) { return std::polar(1.0, two_pi * x * 9.0 / g.L); });
  EXPECT_LT(max_abs(convolve(a, b).values), 1e-12);
}

TEST(Convolve, MatchesQuadratureOracle) {
  std::mt19937_64 rng(4);
  const Grid1D g(4.0, 64);
  for (int trial = 0; trial < 5; ++trial) {
    const auto f = random_bandlimited(g, rng, 20);
    const auto k = random_bandlimited(g, rng, 20);
    const auto out = convolve(f, k);
    std::vector<cplx> ref(g.M);
    for (std::size_t i = 0; i < g.M; ++i)
      for (std::size_t l = 0; l < g.M; ++l) {
        const std::size_t d = (i + g.M + g.M / 2 - l) % g.M;
        ref[i] += f.values[l] * k.values[d] * g.h();
      }
    EXPECT_LT(max_abs_diff(out.values, ref), 1e-9 * max_abs(ref));
  }
}

TEST(Convolve, TheoremOnSpectra) {
  std::mt19937_64 rng(5);
  const Grid1D g(4.0, 256);
  const auto f = random_bandlimited(g, rng, 100);
  const auto k = random_bandlimited(g, rng, 100);
  const auto lhs = forward_transform(convolve(f, k));
  const auto a = forward_transform(f), b = forward_transform(k);
  double worst = 0.0, peak = 0.0;
  for (std::size_t j = 0; j < g.M; ++j) {
    worst = std::max(worst, std::abs(lhs.coeffs[j] - a.coeffs[j] * b.coeffs[j]));
    peak = std::max(peak, std::abs(a.coeffs[j] * b.coeffs[j]));
  }
  EXPECT_LT(worst, 1e-10 * peak);
}

TEST(Convolve, GridMismatchThrows) {
  EXPECT_THROW(convolve(SampledFunction1D(Grid1D(4.0, 64)), SampledFunction1D(Grid1D(4.0, 128))), error);
}

class DilateTest : public ::testing::TestWithParam<int> {};

TEST_P(DilateTest, PreservesIntegralAndL1) {
  const int j = GetParam();
  // Gaussian of width 2: spectrum below 1e-20 past |xi| = 2, negligible
  // tails on the torus even after a 4x spread.
  const Grid1D g(256.0, 4096);
  const auto h = sample(g, [](double x) { return cplx(std::exp(-pi * x * x / 4.0)); });
  const auto hj = dyadic_dilate(h, j);
  EXPECT_NEAR(std::abs(integral(hj) - integral(h)), 0.0, 1e-10);
  EXPECT_NEAR(l1(hj), l1(h), 1e-10 * l1(h));
}

INSTANTIATE_TEST_SUITE_P(Range, DilateTest, ::testing::Values(-2, -1, 0, 1, 2));

TEST(Dilate, ZeroIsIdentity) {
  std::mt19937_64 rng(6);
  const Grid1D g(8.0, 128);
  const auto f = random_bandlimited(g, rng, 30);
  EXPECT_EQ(dyadic_dilate(f, 0).values, f.values);
}

TEST(Dilate, AnnulusSupportDoubles) {
  const Grid1D g(128.0, 2048);
  const auto psi = profiles::cutoff_difference(1.0, 0.5, "psi");
  const auto h = from_fourier(g, [&](double xi) { return cplx(psi(xi)); });
  const auto s = forward_transform(dyadic_dilate(h, 1));
  double peak = max_abs(s.coeffs);
  for (std::size_t jj = 0; jj < g.M; ++jj) {
    const double xi = std::abs(g.xi(g.m_of(jj)));
    if (xi < 1.0 - 1e-12 || xi > 4.0 + 1e-12) {
      EXPECT_LT(std::abs(s.coeffs[jj]), 1e-8 * peak) << xi;
    }
  }
}

TEST(Dilate, NyquistViolationThrows) {
  const Grid1D g(16.0, 64);  // Nyquist 2
  const auto psi = profiles::cutoff_difference(1.0, 0.5, "psi");
  const auto h = from_fourier(g, [&](double xi) { return cplx(psi(xi)); });
  EXPECT_THROW(dyadic_dilate(h, 1), error);
}

TEST(Quadrature, ConstantGivesPeriod) {
  const Grid1D g(3.5, 64);
  const auto one = sample(g, [](double) { return cplx(1.0); });
  EXPECT_NEAR(quadrature(one, [](double) { return 1.0; }).real(), 3.5, 1e-12);
  const Grid2D g2(2.0, 16);
  const auto one2 = sample(g2, [](double, double) { return cplx(1.0); });
  EXPECT_NEAR(quadrature(one2, [](double, double) { return 1.0; }).real(), 4.0, 1e-12);
}

TEST(Quadrature, OddIntegrandVanishes) {
  const Grid1D g(16.0, 128);
  const auto f = sample(g, [](double x) { return cplx(x * std::exp(-x * x)); });
  EXPECT_NEAR(std::abs(quadrature(f, [](double) { return 1.0; })), 0.0, 1e-12);
}

TEST(Quadrature, RefinementAgrees) {
  const auto prof = profiles::cutoff(0.5, 1.0);
  auto at = [&](std::size_t M) {
    const Grid1D g(128.0, M);
    const auto f = from_fourier(g, [&](double xi) { return cplx(prof(xi)); });
    const auto sq = multiply(f, f);
    return quadrature(sq, [](double) { return 1.0; }).real();
  };
  EXPECT_NEAR(at(512), at(1024), 1e-8 * at(1024));
}
