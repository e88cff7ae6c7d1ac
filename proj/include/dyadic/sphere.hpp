#pragma once

// Functions on the unit circle S^1 sampled at theta_i = 2 pi i / Q with the
// normalized measure nu(S^1) = 1, so every quadrature weight is 1/Q.

#include <cmath>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "dyadic/error.hpp"
#include "dyadic/grid.hpp"

namespace dyadic {

class SphereFunction {
 public:
  SphereFunction() = default;
  explicit SphereFunction(std::vector<double> samples) : values_(std::move(samples)) {
    if (values_.size() < 2 || values_.size() % 2 != 0)
      throw error(errc::invalid_argument, "sphere sample count must be even and >= 2");
  }

  static SphereFunction from(std::size_t Q, const std::function<double(double)>& omega) {
    std::vector<double> v(Q);
    for (std::size_t i = 0; i < Q; ++i) v[i] = omega(theta_of(i, Q));
    return SphereFunction(std::move(v));
  }

  static double theta_of(std::size_t i, std::size_t Q) { return two_pi * static_cast<double>(i) / static_cast<double>(Q); }

  std::size_t size() const { return values_.size(); }
  double theta(std::size_t i) const { return theta_of(i, values_.size()); }
  double weight() const { return 1.0 / static_cast<double>(values_.size()); }
  const std::vector<double>& values() const { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }

  /// Piecewise-linear interpolation in theta.
  double at(double theta) const {
    const double Q = static_cast<double>(values_.size());
    double t = theta / two_pi;
    t -= std::floor(t);
    const double u = t * Q;
    const std::size_t i = static_cast<std::size_t>(u) % values_.size();
    const double w = u - std::floor(u);
    return (1.0 - w) * values_[i] + w * values_[(i + 1) % values_.size()];
  }

  double integrate(const std::function<double(double)>& g) const {
    double s = 0.0;
    for (double v : values_) s += g(v);
    return s * weight();
  }

  double mean() const { return integrate([](double v) { return v; }); }
  double l1() const { return integrate([](double v) { return std::abs(v); }); }
  double linf() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
  }

 private:
  std::vector<double> values_;
};

/// Omega minus its nu-mean.
inline SphereFunction project_vanishing(const SphereFunction& omega) {
  const double mu = omega.mean();
  std::vector<double> v = omega.values();
  for (auto& x : v) x -= mu;
  return SphereFunction(std::move(v));
}

namespace omegas {

/// sum of cos((2l+1) theta) / (2l+1) for l < harmonics: odd, mean zero.
inline SphereFunction odd_harmonics(std::size_t Q, int harmonics) {
  return SphereFunction::from(Q, [harmonics](double t) {
    double s = 0.0;
    for (int l = 0; l < harmonics; ++l) s += std::cos((2 * l + 1) * t) / (2 * l + 1);
    return s;
  });
}

/// +a on the upper half circle, -a on the lower half.
inline SphereFunction two_level(std::size_t Q, double a) {
  return SphereFunction::from(Q, [a](double t) { return t < pi ? a : -a; });
}

/// Spike of height `height` on an arc of measure 1/height around theta = 0,
/// balanced by a constant: near-L^1 family with finite L log L norms.
inline SphereFunction spike(std::size_t Q, double height) {
  const double width = pi / height;  // arc measure 1/height in normalized units
  auto raw = SphereFunction::from(Q, [=](double t) {
    const double d = std::min(t, two_pi - t);
    return d < width ? height : 0.0;
  });
  return project_vanishing(raw);
}

/// Seeded random samples with a heavy tail, projected to mean zero.
inline SphereFunction random_rough(std::size_t Q, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n;
  std::vector<double> v(Q);
  for (auto& x : v) {
    const double g = n(rng);
    x = g * std::exp(0.75 * n(rng));
  }
  return project_vanishing(SphereFunction(std::move(v)));
}

}  // namespace omegas

}  // namespace dyadic
