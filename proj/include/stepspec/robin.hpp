#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "stepspec/eigen.hpp"
#include "stepspec/fit.hpp"
#include "stepspec/grid.hpp"
#include "stepspec/minimize.hpp"
#include "stepspec/quadrature.hpp"
#include "stepspec/system.hpp"

namespace stepspec {

/// Half-line oscillator -d^2/dtau^2 + (tau + xi)^2 with u'(0) = gamma u(0).
struct RobinParams {
  double gamma = 0.0;
  double xi = 0.0;

  RobinParams(double gamma_, double xi_) : gamma(gamma_), xi(xi_) {
    if (!std::isfinite(gamma) || !std::isfinite(xi))
      throw std::invalid_argument("RobinParams: gamma and xi must be finite");
  }
};

inline Grid robin_grid(const RobinParams& p, const Discretization& disc = {}) {
  const double L = disc.half_width ? *disc.half_width : std::abs(p.xi) + disc.pos_margin;
  return Grid::from_spacing(0.0, L, disc.delta);
}

inline TridiagonalSystem robin_operator(const RobinParams& p, const Discretization& disc = {}) {
  const Grid g = robin_grid(p, disc);
  auto V = [xi = p.xi](double tau) { return (tau + xi) * (tau + xi); };
  return build_fd_operator(g, V, BoundarySpec::robin_left(p.gamma));
}

/// j-th eigenpair (j >= 1) with the trace convention u(0) > 0.
inline EigenPair robin_eig(const RobinParams& p, int j, const Discretization& disc = {}) {
  if (j < 1) throw std::invalid_argument("robin_eig: j must be >= 1");
  auto pairs = eigs_smallest(robin_operator(p, disc), j, disc.eig_tol, disc.inverse_iter_cap);
  return pairs[static_cast<std::size_t>(j - 1)];
}

inline double robin_value(const RobinParams& p, int j, const Discretization& disc = {}) {
  return smallest_eigenvalues(robin_operator(p, disc), j,
                              disc.eig_tol)[static_cast<std::size_t>(j - 1)];
}

/// Trace formula d(lambda)/d(xi) = (lambda - xi^2 + gamma^2) u(0)^2.
inline double dlambda_dxi(const RobinParams& p, const EigenPair& pair) {
  const double u0 = pair.vector.front();
  return (pair.value - p.xi * p.xi + p.gamma * p.gamma) * u0 * u0;
}

/// Trace formula d(lambda)/d(gamma) = u(0)^2 (strictly positive).
inline double dlambda_dgamma(const RobinParams& /*p*/, const EigenPair& pair) {
  const double u0 = pair.vector.front();
  return u0 * u0;
}

/// Minimum of the lowest Robin band over xi.
struct DeGennesPoint {
  double gamma = 0.0;
  double theta = 0.0;      // Theta(gamma)
  double xi_min = 0.0;     // argmin, always negative
  double curvature = 0.0;  // d^2/dxi^2 lambda at the minimum
};

namespace detail {

/// Exact derivative of the discrete lowest Robin eigenvalue in xi:
/// d(lambda)/d(xi) = 2 <(tau + xi) u, u> with the half-cell mass at 0.
inline double robin_derivative_discrete(double gamma, double xi, const Discretization& disc) {
  const RobinParams p{gamma, xi};
  const EigenPair pair = robin_eig(p, 1, disc);
  const Grid g = robin_grid(p, disc);
  std::vector<double> f(pair.vector.size());
  for (int i = 0; i < g.n; ++i) {
    const double t = g.node(i);
    f[static_cast<std::size_t>(i)] =
        (t + xi) * pair.vector[static_cast<std::size_t>(i)] * pair.vector[static_cast<std::size_t>(i)];
  }
  return 2.0 * quadrature(g, f);
}

}  // namespace detail

/// Brent over a scan bracket of xi |-> lambda(gamma, xi), then a polish on
/// the exact discrete derivative; curvature from a 5-point stencil.
inline DeGennesPoint de_gennes(double gamma, const Discretization& disc = {}) {
  if (!std::isfinite(gamma)) throw std::invalid_argument("de_gennes: gamma must be finite");
  auto f = [&](double xi) { return robin_value(RobinParams{gamma, xi}, 1, disc); };
  const ScanBracket sb = scan_for_minimum(f, -4.0 - std::abs(gamma), 2.0, 0.1);
  auto [xmin, fmin] = brent_minimize(f, sb.lo, sb.mid, sb.hi, 1e-10);

  auto g = [&](double xi) { return detail::robin_derivative_discrete(gamma, xi, disc); };
  const double w = 2e-4;
  double glo = g(xmin - w), ghi = g(xmin + w);
  if (glo < 0.0 && ghi > 0.0) {
    xmin = bisect_root(g, xmin - w, xmin + w, glo, ghi);
    fmin = f(xmin);
  }

  DeGennesPoint out;
  out.gamma = gamma;
  out.theta = fmin;
  out.xi_min = xmin;
  // curvature by central 5-point second difference, Richardson over step/2
  auto second = [&](double s) {
    return (-f(xmin - 2 * s) + 16 * f(xmin - s) - 30 * fmin + 16 * f(xmin + s) -
            f(xmin + 2 * s)) /
           (12.0 * s * s);
  };
  const double s0 = 1e-3;
  out.curvature = richardson(second(s0), second(s0 / 2), 4.0);
  return out;
}

/// de Gennes constant Theta_0 = Theta(0).
inline double theta0(const Discretization& disc = {}) { return de_gennes(0.0, disc).theta; }

}  // namespace stepspec
