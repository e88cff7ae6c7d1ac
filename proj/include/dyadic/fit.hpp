#pragma once

#include <cmath>
#include <vector>

#include "dyadic/error.hpp"

namespace dyadic {

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;  // root mean square of y - (slope x + intercept)
};

/// Ordinary least squares y = slope x + intercept.
inline LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw error(errc::invalid_argument, "line fit needs two or more points");
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) sx += x[i], sy += y[i];
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw error(errc::invalid_argument, "line fit needs distinct abscissae");
  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double r = 0;
  for (std::size_t i = 0; i < x.size(); ++i) r += std::pow(y[i] - f.slope * x[i] - f.intercept, 2);
  f.residual = std::sqrt(r / n);
  return f;
}

/// Fit of log y against log x.
inline LineFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y) {
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw error(errc::invalid_argument, "log-log fit needs positive data");
    lx.push_back(std::log(x[i]));
    ly.push_back(std::log(y[i]));
  }
  return fit_line(lx, ly);
}

}  // namespace dyadic
