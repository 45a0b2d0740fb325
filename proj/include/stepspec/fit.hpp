#pragma once

#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

namespace stepspec {

/// Richardson extrapolation for a quantity with error C*delta^order,
/// sampled at delta (coarse) and delta/2 (fine).
inline double richardson(double coarse, double fine, double order = 2.0) {
  const double w = std::pow(2.0, order);
  return (w * fine - coarse) / (w - 1.0);
}

/// Observed convergence order from three grid-halving samples.
inline double observed_order(double f0, double f1, double f2) {
  const double r = std::abs(f0 - f1) / std::abs(f1 - f2);
  return std::log2(r);
}

/// Least squares for a handful of basis columns via normal equations with
/// Gaussian elimination; sizes here are 2-3 coefficients over <= 10 samples.
inline std::vector<double> least_squares(const std::vector<std::vector<double>>& cols,
                                         std::span<const double> y) {
  const std::size_t k = cols.size();
  const std::size_t m = y.size();
  for (const auto& c : cols)
    if (c.size() != m) throw std::invalid_argument("least_squares: ragged columns");
  std::vector<std::vector<double>> a(k, std::vector<double>(k + 1, 0.0));
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j)
      for (std::size_t r = 0; r < m; ++r) a[i][j] += cols[i][r] * cols[j][r];
    for (std::size_t r = 0; r < m; ++r) a[i][k] += cols[i][r] * y[r];
  }
  for (std::size_t p = 0; p < k; ++p) {
    std::size_t piv = p;
    for (std::size_t i = p + 1; i < k; ++i)
      if (std::abs(a[i][p]) > std::abs(a[piv][p])) piv = i;
    std::swap(a[p], a[piv]);
    if (a[p][p] == 0.0) throw std::invalid_argument("least_squares: singular normal matrix");
    for (std::size_t i = p + 1; i < k; ++i) {
      const double f = a[i][p] / a[p][p];
      for (std::size_t j = p; j <= k; ++j) a[i][j] -= f * a[p][j];
    }
  }
  std::vector<double> x(k, 0.0);
  for (std::size_t ip = k; ip-- > 0;) {
    double s = a[ip][k];
    for (std::size_t j = ip + 1; j < k; ++j) s -= a[ip][j] * x[j];
    x[ip] = s / a[ip][ip];
  }
  return x;
}

/// Slope of log|y| against log x.
inline double loglog_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("loglog_slope: need matching samples, >= 2");
  const std::size_t m = x.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < m; ++i) {
    const double lx = std::log(std::abs(x[i]));
    const double ly = std::log(std::abs(y[i]));
    sx += lx; sy += ly; sxx += lx * lx; sxy += lx * ly;
  }
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

}  // namespace stepspec
