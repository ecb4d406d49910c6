#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

namespace g2lab {

// least-squares slope of log2(y) against log2(x)
inline double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("loglog_slope: need >= 2 points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log2(x[i]), ly = std::log2(std::abs(y[i]));
    sx += lx; sy += ly; sxx += lx * lx; sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

// smallest c with |y_i| <= c * env_i for all i
inline double fitted_envelope_constant(const std::vector<double>& y, const std::vector<double>& env) {
  double c = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) c = std::max(c, std::abs(y[i]) / env[i]);
  return c;
}

}  // namespace g2lab
