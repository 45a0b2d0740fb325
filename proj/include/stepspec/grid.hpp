#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace stepspec {

/// Uniform grid on [lo, hi] with n nodes.  When the interval straddles the
/// origin, tau = 0 must fall exactly on a node: the step potentials are
/// continuous there but their derivative jumps, and keeping the kink on a
/// node preserves second-order accuracy of everything built on top.
struct Grid {
  double lo = 0.0;
  double hi = 1.0;
  int n = 2;
  double delta = 1.0;

  double node(int i) const { return lo + i * delta; }

  std::vector<double> nodes() const {
    std::vector<double> t(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) t[static_cast<std::size_t>(i)] = node(i);
    return t;
  }

  bool straddles_zero() const { return lo < 0.0 && hi > 0.0; }

  /// Index of the node at tau = 0 (valid for half-line grids starting at 0
  /// and for straddling grids).
  int zero_index() const {
    if (lo == 0.0) return 0;
    if (!straddles_zero())
      throw std::invalid_argument("grid: no node at tau = 0");
    const int i = static_cast<int>(std::llround(-lo / delta));
    if (i <= 0 || i >= n - 1 || std::abs(node(i)) > 1e-9 * delta * (1.0 + std::abs(lo)))
      throw std::invalid_argument("grid: tau = 0 is not a grid node");
    return i;
  }

  /// Grid with spacing exactly `delta`, endpoints snapped outward to node
  /// multiples so that 0 is a node whenever lo < 0 < hi.
  static Grid from_spacing(double lo, double hi, double delta) {
    if (!(delta > 0.0) || !(hi > lo))
      throw std::invalid_argument("grid: need hi > lo and delta > 0");
    Grid g;
    g.delta = delta;
    if (lo < 0.0 && hi > 0.0) {
      const int nn = static_cast<int>(std::ceil(-lo / delta - 1e-12));
      const int np = static_cast<int>(std::ceil(hi / delta - 1e-12));
      g.lo = -nn * delta;
      g.hi = np * delta;
      g.n = nn + np + 1;
    } else {
      const int m = static_cast<int>(std::ceil((hi - lo) / delta - 1e-12));
      g.lo = lo;
      g.hi = lo + m * delta;
      g.n = m + 1;
    }
    g.validate();
    return g;
  }

  static Grid with_count(double lo, double hi, int n) {
    if (n < 3 || !(hi > lo))
      throw std::invalid_argument("grid: need hi > lo and n >= 3");
    Grid g;
    g.lo = lo;
    g.hi = hi;
    g.n = n;
    g.delta = (hi - lo) / (n - 1);
    g.validate();
    return g;
  }

  void validate() const {
    if (!(hi > lo) || n < 3 || !(delta > 0.0))
      throw std::invalid_argument("grid: invalid extent");
    if (std::abs(delta - (hi - lo) / (n - 1)) > 1e-9 * delta)
      throw std::invalid_argument("grid: spacing inconsistent with endpoints");
    if (straddles_zero()) (void)zero_index();
  }
};

/// Discretization controls shared by all spectral computations.
///
/// The default half-widths follow the Gaussian decay of the eigenfunctions:
/// on the positive side the well of (xi + tau)^2 sits at -xi, so
/// L = |xi| + pos_margin; on the negative side the well of (xi + a tau)^2
/// sits at -xi/a with width 1/sqrt|a|, so the margin scales accordingly.
struct Discretization {
  double delta = 0.005;
  double pos_margin = 12.0;
  double neg_margin = 10.0;
  std::optional<double> half_width;  // overrides both margins when set
  double eig_tol = 1e-12;
  int inverse_iter_cap = 50;

  Discretization refined(double factor = 2.0) const {
    Discretization d = *this;
    d.delta = delta / factor;
    return d;
  }

  Discretization coarsened(double factor = 2.0) const {
    Discretization d = *this;
    d.delta = delta * factor;
    return d;
  }
};

}  // namespace stepspec
