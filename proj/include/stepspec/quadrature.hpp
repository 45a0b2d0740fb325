#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "stepspec/grid.hpp"

namespace stepspec {

enum class Side { left, right };

/// Trapezoidal rule over the full grid, optional pointwise weight.
inline double quadrature(const Grid& g, std::span<const double> f,
                         std::span<const double> weight = {}) {
  if (f.size() != static_cast<std::size_t>(g.n))
    throw std::invalid_argument("quadrature: length mismatch with grid");
  if (!weight.empty() && weight.size() != f.size())
    throw std::invalid_argument("quadrature: weight length mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    double v = f[i];
    if (!weight.empty()) v *= weight[i];
    const bool end = (i == 0 || i + 1 == f.size());
    s += end ? 0.5 * v : v;
  }
  return s * g.delta;
}

/// Trapezoidal rule for an integrand with a jump at the tau = 0 node:
/// `f` holds the branch-consistent values away from 0, and the two one-sided
/// limits at the node are supplied separately.  Equivalent to running the
/// trapezoid independently on [lo, 0] and [0, hi].
inline double quadrature_two_sided(const Grid& g, std::span<const double> f,
                                   double f0_left, double f0_right) {
  if (f.size() != static_cast<std::size_t>(g.n))
    throw std::invalid_argument("quadrature: length mismatch with grid");
  const int i0 = g.zero_index();
  double s = 0.5 * f[0];
  for (int i = 1; i < i0; ++i) s += f[static_cast<std::size_t>(i)];
  s += 0.5 * (f0_left + f0_right);
  for (int i = i0 + 1; i + 1 < g.n; ++i) s += f[static_cast<std::size_t>(i)];
  s += 0.5 * f[static_cast<std::size_t>(g.n - 1)];
  return s * g.delta;
}

inline double inner(const Grid& g, std::span<const double> f, std::span<const double> h) {
  if (f.size() != h.size() || f.size() != static_cast<std::size_t>(g.n))
    throw std::invalid_argument("inner: length mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const bool end = (i == 0 || i + 1 == f.size());
    s += (end ? 0.5 : 1.0) * f[i] * h[i];
  }
  return s * g.delta;
}

/// One-sided second-order three-point derivative at the tau = 0 node.
inline double derivative_at_zero(const Grid& g, std::span<const double> f, Side side) {
  if (f.size() != static_cast<std::size_t>(g.n))
    throw std::invalid_argument("derivative_at_zero: length mismatch with grid");
  const int i0 = g.zero_index();
  const double d = g.delta;
  if (side == Side::right) {
    if (i0 + 2 >= g.n)
      throw std::invalid_argument("derivative_at_zero: fewer than 3 nodes on the right");
    return (-3.0 * f[i0] + 4.0 * f[i0 + 1] - f[i0 + 2]) / (2.0 * d);
  }
  if (i0 - 2 < 0)
    throw std::invalid_argument("derivative_at_zero: fewer than 3 nodes on the left");
  return (3.0 * f[i0] - 4.0 * f[i0 - 1] + f[i0 - 2]) / (2.0 * d);
}

/// Central first derivative on the full grid, one-sided at the ends.
inline std::vector<double> gradient(const Grid& g, std::span<const double> f) {
  if (f.size() != static_cast<std::size_t>(g.n))
    throw std::invalid_argument("gradient: length mismatch with grid");
  const double d = g.delta;
  std::vector<double> out(f.size());
  for (std::size_t i = 1; i + 1 < f.size(); ++i) out[i] = (f[i + 1] - f[i - 1]) / (2.0 * d);
  out.front() = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * d);
  out.back() = (3.0 * f[f.size() - 1] - 4.0 * f[f.size() - 2] + f[f.size() - 3]) / (2.0 * d);
  return out;
}

}  // namespace stepspec
