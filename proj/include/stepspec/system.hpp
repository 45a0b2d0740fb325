#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <sstream>
#include <stdexcept>
#include <utility>
#include <vector>

#include "stepspec/grid.hpp"

namespace stepspec {

struct BoundarySpec {
  enum class Kind { dirichlet_both, robin_left_dirichlet_right };
  Kind kind = Kind::dirichlet_both;
  double gamma = 0.0;

  static BoundarySpec dirichlet() { return {}; }
  static BoundarySpec robin_left(double gamma) {
    return {Kind::robin_left_dirichlet_right, gamma};
  }
};

/// Symmetric tridiagonal discretization of -d^2/dtau^2 + V on a grid.
///
/// Unknowns are the grid nodes that carry degrees of freedom (Dirichlet nodes
/// are dropped).  A Robin condition u'(0) = gamma u(0) is eliminated through
/// a second-order ghost node; the resulting row is symmetrized by the
/// half-cell mass similarity, which is recorded in `first_scale`: the nodal
/// value at the first unknown equals first_scale * coefficient.  With that
/// convention delta * sum(y_i^2) equals the trapezoid integral of the nodal
/// function squared for every boundary type.
struct TridiagonalSystem {
  std::vector<double> diag;
  std::vector<double> offdiag;
  Grid grid;
  int first_node = 0;
  double first_scale = 1.0;

  int size() const { return static_cast<int>(diag.size()); }

  /// Coefficient vector -> nodal grid function (Dirichlet nodes filled with 0).
  std::vector<double> embed(std::span<const double> coeff) const {
    if (coeff.size() != diag.size())
      throw std::invalid_argument("embed: coefficient length mismatch");
    std::vector<double> u(static_cast<std::size_t>(grid.n), 0.0);
    for (std::size_t i = 0; i < coeff.size(); ++i)
      u[static_cast<std::size_t>(first_node) + i] = coeff[i];
    u[static_cast<std::size_t>(first_node)] *= first_scale;
    return u;
  }

  /// Nodal grid function -> coefficient vector.
  std::vector<double> restrict_to_coeff(std::span<const double> u) const {
    if (u.size() != static_cast<std::size_t>(grid.n))
      throw std::invalid_argument("restrict: grid function length mismatch");
    std::vector<double> y(diag.size());
    for (std::size_t i = 0; i < y.size(); ++i)
      y[i] = u[static_cast<std::size_t>(first_node) + i];
    y[0] /= first_scale;
    return y;
  }

  /// y <- (A - shift*M) x with diagonal mass M (empty mass means identity).
  std::vector<double> apply_shifted(std::span<const double> x, double shift,
                                    std::span<const double> mass = {}) const {
    const std::size_t m = diag.size();
    if (x.size() != m) throw std::invalid_argument("apply: length mismatch");
    std::vector<double> y(m, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
      double v = (diag[i] - shift * (mass.empty() ? 1.0 : mass[i])) * x[i];
      if (i > 0) v += offdiag[i - 1] * x[i - 1];
      if (i + 1 < m) v += offdiag[i] * x[i + 1];
      y[i] = v;
    }
    return y;
  }
};

/// Stiffness plus strictly positive diagonal mass weights (the weighted
/// inner product of the curvature model; unit mass reproduces the plain path).
struct GeneralizedSystem {
  TridiagonalSystem stiffness;
  std::vector<double> mass;

  GeneralizedSystem() = default;
  GeneralizedSystem(TridiagonalSystem s, std::vector<double> m)
      : stiffness(std::move(s)), mass(std::move(m)) {
    if (mass.size() != stiffness.diag.size())
      throw std::invalid_argument("generalized system: mass length mismatch");
    for (double w : mass)
      if (!(w > 0.0)) throw std::invalid_argument("generalized system: mass must be positive");
  }
};

/// Second-order central-difference operator for -u'' + V u with the given
/// boundary conditions.  Robin-left requires grid.lo == 0.
template <class Potential>
TridiagonalSystem build_fd_operator(const Grid& grid, Potential&& potential,
                                    const BoundarySpec& bc) {
  grid.validate();
  const double d = grid.delta;
  const double inv2 = 1.0 / (d * d);
  auto vat = [&](int i) {
    const double v = potential(grid.node(i));
    if (!std::isfinite(v)) {
      std::ostringstream os;
      os << "build_fd_operator: potential not finite at node " << i
         << " (tau = " << grid.node(i) << ")";
      throw std::invalid_argument(os.str());
    }
    return v;
  };

  TridiagonalSystem sys;
  sys.grid = grid;
  if (bc.kind == BoundarySpec::Kind::dirichlet_both) {
    const int m = grid.n - 2;
    if (m < 1) throw std::invalid_argument("build_fd_operator: grid too small");
    sys.first_node = 1;
    sys.diag.resize(static_cast<std::size_t>(m));
    sys.offdiag.assign(static_cast<std::size_t>(m - 1), -inv2);
    for (int i = 0; i < m; ++i) sys.diag[static_cast<std::size_t>(i)] = 2.0 * inv2 + vat(i + 1);
    return sys;
  }
  if (bc.kind == BoundarySpec::Kind::robin_left_dirichlet_right) {
    if (grid.lo != 0.0)
      throw std::invalid_argument("build_fd_operator: Robin-left requires grid.lo == 0");
    const int m = grid.n - 1;
    if (m < 2) throw std::invalid_argument("build_fd_operator: grid too small");
    sys.first_node = 0;
    sys.first_scale = std::sqrt(2.0);
    sys.diag.resize(static_cast<std::size_t>(m));
    sys.offdiag.assign(static_cast<std::size_t>(m - 1), -inv2);
    // ghost elimination u(-d) = u(d) - 2 d gamma u(0), then the half-cell
    // mass similarity: row 0 keeps the ghost eigenvalues while staying
    // symmetric with off-diagonal -sqrt(2)/d^2.
    sys.diag[0] = 2.0 * inv2 + 2.0 * bc.gamma / d + vat(0);
    sys.offdiag[0] = -std::sqrt(2.0) * inv2;
    for (int i = 1; i < m; ++i) sys.diag[static_cast<std::size_t>(i)] = 2.0 * inv2 + vat(i);
    return sys;
  }
  throw std::invalid_argument("build_fd_operator: unsupported boundary combination");
}

}  // namespace stepspec
