#pragma once

#include <cmath>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "stepspec/eigen.hpp"
#include "stepspec/grid.hpp"
#include "stepspec/minimize.hpp"
#include "stepspec/quadrature.hpp"
#include "stepspec/system.hpp"

namespace stepspec {

/// Field ratio of the step: sigma(tau) = 1 on R+, a on R-.
struct StepParams {
  double a;

  explicit StepParams(double a_) : a(a_) {
    if (!(a >= -1.0 && a < 1.0) || a == 0.0)
      throw std::invalid_argument("StepParams: a must lie in [-1,1) and a != 0");
  }

  double sigma(double tau) const { return tau < 0.0 ? a : 1.0; }
};

/// Potential of the fiber operator: tau -> (xi + sigma(tau) tau)^2.
/// Continuous at the jump; the node value at tau = 0 is xi^2 either way.
inline auto step_potential(const StepParams& p, double xi) {
  return [p, xi](double tau) {
    const double s = p.sigma(tau);
    const double v = xi + s * tau;
    return v * v;
  };
}

/// Truncation of R to [-L_neg, L_pos] around the two potential wells: the
/// positive-side well sits at -xi, the negative-side well at -xi/a with
/// Gaussian width 1/sqrt|a|.
inline Grid step_grid(const StepParams& p, double xi, const Discretization& disc = {}) {
  if (disc.half_width) {
    const double L = *disc.half_width;
    return Grid::from_spacing(-L, L, disc.delta);
  }
  const double sa = std::sqrt(std::abs(p.a));
  double lpos = disc.pos_margin;
  if (xi < 0.0) lpos += -xi;
  double lneg = disc.pos_margin;
  const double well_neg = -xi / p.a;
  if (well_neg < 0.0) lneg = std::max(lneg, -well_neg + disc.neg_margin / sa);
  return Grid::from_spacing(-lneg, lpos, disc.delta);
}

/// Per-xi record of the lowest band: energy, boundary traces and the Robin
/// trace gamma(xi) = phi'(0+)/phi(0).
struct BandPoint {
  double xi = 0.0;
  double mu = 0.0;
  double phi0 = 0.0;
  double dphi0_left = 0.0;
  double dphi0_right = 0.0;
  double gamma = 0.0;
  Grid grid;
  std::optional<double> mu_excited;  // second eigenvalue on request (spectral gap)
};

inline TridiagonalSystem step_operator(const StepParams& p, double xi,
                                       const Discretization& disc = {}) {
  return build_fd_operator(step_grid(p, xi, disc), step_potential(p, xi),
                           BoundarySpec::dirichlet());
}

inline BandPoint band_point(const StepParams& p, double xi, const Discretization& disc = {},
                            bool with_second = false) {
  const TridiagonalSystem sys = step_operator(p, xi, disc);
  const auto pairs = eigs_smallest(sys, with_second ? 2 : 1, disc.eig_tol, disc.inverse_iter_cap);
  BandPoint bp;
  bp.xi = xi;
  bp.grid = sys.grid;
  bp.mu = pairs[0].value;
  const std::vector<double>& phi = pairs[0].vector;
  bp.phi0 = phi[static_cast<std::size_t>(sys.grid.zero_index())];
  bp.dphi0_left = derivative_at_zero(sys.grid, phi, Side::left);
  bp.dphi0_right = derivative_at_zero(sys.grid, phi, Side::right);
  bp.gamma = bp.dphi0_right / bp.phi0;
  if (with_second) bp.mu_excited = pairs[1].value;
  return bp;
}

/// Lowest eigenvalue only (cheap path for scans and minimization).
inline double band_value(const StepParams& p, double xi, const Discretization& disc = {}) {
  return smallest_eigenvalues(step_operator(p, xi, disc), 1, disc.eig_tol)[0];
}

struct BandCurveFailure {
  double xi;
  std::string message;
};

struct BandCurve {
  std::vector<BandPoint> points;
  std::vector<BandCurveFailure> failures;
};

/// One BandPoint per xi, input order preserved; per-point failures are
/// collected and the remaining points still returned.
inline BandCurve band_curve(const StepParams& p, std::span<const double> xi_values,
                            const Discretization& disc = {}) {
  BandCurve out;
  for (double xi : xi_values) {
    if (!std::isfinite(xi)) {
      out.failures.push_back({xi, "xi not finite"});
      continue;
    }
    try {
      out.points.push_back(band_point(p, xi, disc));
    } catch (const std::exception& e) {
      out.failures.push_back({xi, e.what()});
    }
  }
  return out;
}

/// Derivative trace formula: mu'(xi) = (1 - 1/a) (phi'(0)^2 + (mu - xi^2) phi(0)^2),
/// with phi'(0) the right-sided trace.
inline double mu_prime_analytic(const BandPoint& bp, const StepParams& p) {
  const double d = bp.dphi0_right;
  return (1.0 - 1.0 / p.a) * (d * d + (bp.mu - bp.xi * bp.xi) * bp.phi0 * bp.phi0);
}

namespace detail {

/// Exact derivative of the discrete band function at xi (Hellmann-Feynman on
/// the discrete pencil): d(mu)/d(xi) = 2 <(sigma tau + xi) phi, phi>.
inline double band_derivative_discrete(const StepParams& p, double xi,
                                       const Discretization& disc) {
  const TridiagonalSystem sys = step_operator(p, xi, disc);
  const auto pairs = eigs_smallest(sys, 1, disc.eig_tol, disc.inverse_iter_cap);
  const Grid& g = sys.grid;
  const std::vector<double>& phi = pairs[0].vector;
  std::vector<double> f(phi.size());
  for (int i = 0; i < g.n; ++i) {
    const double t = g.node(i);
    f[static_cast<std::size_t>(i)] =
        (p.sigma(t) * t + xi) * phi[static_cast<std::size_t>(i)] * phi[static_cast<std::size_t>(i)];
  }
  return 2.0 * quadrature(g, f);
}

struct LocatedMinimum {
  double zeta;
  double mu;
  int scan_minima;
};

/// Coarse scan + Brent + a derivative-root polish.  The polish matters:
/// value-based Brent cannot localize a flat quadratic minimum beyond
/// sqrt(solver noise), while the discrete eigenvalue derivative is exact.
inline LocatedMinimum locate_minimum(const StepParams& p, const Discretization& disc,
                                     double scan_lo = -6.0, double scan_hi = 1.0,
                                     double scan_step = 0.05) {
  Discretization scan_disc = disc;
  scan_disc.delta = std::max(disc.delta, 0.01);
  auto f_scan = [&](double xi) { return band_value(p, xi, scan_disc); };
  const ScanBracket sb = scan_for_minimum(f_scan, scan_lo, scan_hi, scan_step);

  auto f = [&](double xi) { return band_value(p, xi, disc); };
  auto [xmin, fmin] = brent_minimize(f, sb.lo, sb.mid, sb.hi, 1e-10);

  auto g = [&](double xi) { return band_derivative_discrete(p, xi, disc); };
  const double w = 2e-4;
  double lo = xmin - w, hi = xmin + w;
  double glo = g(lo), ghi = g(hi);
  if (glo < 0.0 && ghi > 0.0) {
    const double zeta = bisect_root(g, lo, hi, glo, ghi);
    return {zeta, f(zeta), sb.local_minima};
  }
  return {xmin, fmin, sb.local_minima};  // derivative bracket failed; keep Brent point
}

}  // namespace detail

}  // namespace stepspec
