#include <gtest/gtest.h>

#include <random>

#include "dyadic/bumps.hpp"
#include "dyadic/multiband.hpp"

using namespace dyadic;

namespace {

// Two bands around +-40/L and one at the origin, period 8, 64-sample base.
MultibandFunction1D example(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n;
  MultibandFunction1D f(Grid1D(8.0, 64));
  for (long long q : {-40LL, 0LL, 37LL}) {
    Band b = f.blank(q);
    b.lo = -10;
    b.hi = 10;
    for (long long s = b.lo; s <= b.hi; ++s) b.coeffs[f.idx(s)] = cplx(n(rng), n(rng));
    f.add(std::move(b));
  }
  return f;
}

}  // namespace

TEST(Multiband, ValuesMatchDense) {
  const auto f = example(1);
  const auto dense = f.to_dense(256);
  const auto v = f.values();
  // Base-grid points are every 4th dense point.
  for (std::size_t i = 0; i < 64; ++i) EXPECT_LT(std::abs(v[i] - dense.values[4 * i]), 1e-12 * max_abs(dense.values));
  for (double x : {-3.9, -0.1, 0.0, 1.37, 3.99})
    EXPECT_LT(std::abs(f.evaluate(x) - evaluate(forward_transform(dense), x)), 1e-11);
}

TEST(Multiband, ProductMatchesDense) {
  const auto f = example(2), g = example(3);
  // Product bands overlap; merged windows need a wider base.
  EXPECT_THROW(product(f, g), error);
  MultibandFunction1D fw(Grid1D(8.0, 256)), gw(Grid1D(8.0, 256));
  for (const auto& b : f.bands()) {
    Band nb = fw.blank(b.carrier);
    nb.lo = b.lo; nb.hi = b.hi;
    for (long long s = b.lo; s <= b.hi; ++s) nb.coeffs[fw.idx(s)] = b.coeffs[f.idx(s)];
    fw.add(nb);
  }
  for (const auto& b : g.bands()) {
    Band nb = gw.blank(b.carrier);
    nb.lo = b.lo; nb.hi = b.hi;
    for (long long s = b.lo; s <= b.hi; ++s) nb.coeffs[gw.idx(s)] = b.coeffs[g.idx(s)];
    gw.add(nb);
  }
  const auto p = product(fw, gw);
  const auto dense = multiply(fw.to_dense(512), gw.to_dense(512));
  const auto pd = p.to_dense(512);
  EXPECT_LT(max_abs_diff(pd.values, dense.values), 1e-11 * max_abs(dense.values));
}

TEST(Multiband, InnerIsParseval) {
  const auto f = example(4), g = example(5);
  const auto a = f.to_dense(256), b = g.to_dense(256);
  cplx ref{};
  for (std::size_t i = 0; i < 256; ++i) ref += a.values[i] * std::conj(b.values[i]);
  ref *= a.grid.h();
  EXPECT_LT(std::abs(inner(f, g) - ref), 1e-10 * std::abs(ref));
}

TEST(Multiband, ConjAndTranslate) {
  const auto f = example(6);
  const auto c = f.conj().to_dense(256);
  const auto d = f.to_dense(256);
  for (std::size_t i = 0; i < 256; ++i) EXPECT_LT(std::abs(c.values[i] - std::conj(d.values[i])), 1e-12);
  const auto t = f.translate(0.7).to_dense(256);
  const auto td = translate(d, 0.7);
  EXPECT_LT(max_abs_diff(t.values, td.values), 1e-11);
}

TEST(Multiband, FarCarrierPhaseIsExact) {
  // A single character at m = 2^40 + 3 evaluated at base points.
  MultibandFunction1D f(Grid1D(16.0, 32));
  const long long q = (1LL << 40) + 3;
  Band b = f.blank(q);
  b.lo = b.hi = 0;
  b.coeffs[f.idx(0)] = 16.0;
  f.add(std::move(b));
  const auto v = f.values();
  for (std::size_t i = 0; i < 32; ++i) {
    const long long k = static_cast<long long>(i) - 16;  // x = k/2
    const long long turns = ((k * 3) % 32 + 32) % 32;    // q x / L = k q / 32, 2^40 k/32 integer
    EXPECT_LT(std::abs(v[i] - std::polar(1.0, two_pi * turns / 32.0)), 1e-13);
  }
}

TEST(Multiband, OverlappingBandsMerge) {
  MultibandFunction1D f(Grid1D(8.0, 64));
  Band a = f.blank(100), b = f.blank(105);
  a.lo = -3; a.hi = 3; b.lo = -3; b.hi = 3;
  for (long long s = -3; s <= 3; ++s) { a.coeffs[f.idx(s)] = 1.0; b.coeffs[f.idx(s)] = 2.0; }
  f.add(a);
  f.add(b);
  ASSERT_EQ(f.bands().size(), 1u);
  EXPECT_EQ(f.bands()[0].abs_lo(), 97);
  EXPECT_EQ(f.bands()[0].abs_hi(), 108);
}

TEST(Multiband, WindowOverflowThrows) {
  MultibandFunction1D f(Grid1D(8.0, 64));
  Band a = f.blank(0), b = f.blank(40);
  a.lo = -20; a.hi = 20; b.lo = -20; b.hi = 20;
  for (long long s = -20; s <= 20; ++s) { a.coeffs[f.idx(s)] = 1.0; b.coeffs[f.idx(s)] = 1.0; }
  f.add(a);
  EXPECT_THROW(f.add(b), error);
}

TEST(Multiband, FourierWindowMatchesSpectrum) {
  const auto fam = make_family(Grid1D(64.0, 2048), Grid2D(16.0, 128));
  MultibandFunction1D f(Grid1D(64.0, 512));
  f.add_fourier_window(-2.5, 2.5, [&](double xi) { return cplx(fam.psi(xi)); });
  const auto dense = fam.sampled(fam.psi);
  const auto mine = f.to_dense(2048);
  EXPECT_LT(max_abs_diff(mine.values, dense.values), 1e-12);
}
