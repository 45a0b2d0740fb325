#pragma once

#include <cmath>
#include <span>
#include <sstream>
#include <vector>

#include "stepspec/fit.hpp"
#include "stepspec/robin.hpp"
#include "stepspec/stepband.hpp"

namespace stepspec {

struct BandMinChecks {
  bool unique_bracket = false;   // exactly one descending->ascending transition on the scan
  bool zeta_negative = false;
  bool mu2_positive = false;
  bool mu2_matches_closed = false;  // |FD - closed| <= 1% of closed
  bool lower_bound = false;         // |a| Theta0 < beta
  bool upper_bound = false;         // beta < |a|   (equality allowed at a = -1)
  bool below_theta0 = false;        // beta < Theta0 (equality allowed at a = -1)
  bool gamma_negative = false;      // phi'(0) < 0  (zero allowed at a = -1)

  bool all() const {
    return unique_bracket && zeta_negative && mu2_positive && mu2_matches_closed &&
           lower_bound && upper_bound && below_theta0 && gamma_negative;
  }
};

/// Minimum of the lowest band: location, value, curvature (finite differences
/// and the closed form 2 (1/a - 1) zeta phi(0)^2), and the Robin trace there.
struct BandMinimum {
  double a = 0.0;
  double zeta = 0.0;
  double beta = 0.0;
  double mu2 = 0.0;         // second derivative by central 5-point differences
  double mu2_closed = 0.0;  // 2 (1/a - 1) zeta phi(0)^2
  double gamma_min = 0.0;   // phi'(0)/phi(0) at the minimum
  double phi0 = 0.0;
  double dphi0 = 0.0;       // right-sided trace
  double theta0_ref = 0.0;  // de Gennes constant used by the bound checks
  int scan_minima = 0;
  BandMinChecks checks;
};

inline BandMinimum minimize_band(double a, const Discretization& disc = {}) {
  if (a > 0.0 && a < 1.0) {
    std::ostringstream os;
    os << "minimize_band: for a = " << a
       << " in (0,1) the band does not achieve a minimum (inf mu_a = a is only "
          "approached as xi -> +infinity)";
    throw std::invalid_argument(os.str());
  }
  const StepParams p{a};  // rejects a outside [-1,1) and a == 0

  const auto loc = detail::locate_minimum(p, disc);
  const BandPoint bp = band_point(p, loc.zeta, disc);

  BandMinimum m;
  m.a = a;
  m.zeta = loc.zeta;
  m.beta = loc.mu;
  m.phi0 = bp.phi0;
  m.dphi0 = bp.dphi0_right;
  m.gamma_min = bp.gamma;
  m.scan_minima = loc.scan_minima;
  m.mu2_closed = 2.0 * (1.0 / a - 1.0) * m.zeta * m.phi0 * m.phi0;

  auto f = [&](double xi) { return band_value(p, xi, disc); };
  auto second = [&](double s) {
    return (-f(m.zeta - 2 * s) + 16 * f(m.zeta - s) - 30 * m.beta + 16 * f(m.zeta + s) -
            f(m.zeta + 2 * s)) /
           (12.0 * s * s);
  };
  const double s0 = 1e-3;
  m.mu2 = richardson(second(s0), second(s0 / 2), 4.0);

  m.theta0_ref = theta0(disc);
  const double at_endpoint = (a == -1.0) ? 1e-6 : 0.0;
  m.checks.unique_bracket = (loc.scan_minima == 1);
  m.checks.zeta_negative = (m.zeta < 0.0);
  m.checks.mu2_positive = (m.mu2 > 0.0 && m.mu2_closed > 0.0);
  m.checks.mu2_matches_closed = std::abs(m.mu2 - m.mu2_closed) <= 0.01 * m.mu2_closed;
  m.checks.lower_bound = (std::abs(a) * m.theta0_ref < m.beta);
  m.checks.upper_bound = (m.beta < std::abs(a) + at_endpoint);
  m.checks.below_theta0 = (m.beta < m.theta0_ref + at_endpoint);
  m.checks.gamma_negative = (a == -1.0) ? (std::abs(m.gamma_min) <= 1e-6) : (m.gamma_min < 0.0);
  return m;
}

/// Residual of the critical-point identity (beta - zeta^2) phi(0)^2 + phi'(0)^2,
/// which vanishes at the band minimum.
inline double critical_identity_check(const BandMinimum& m, const BandPoint& point) {
  if (std::abs(point.xi - m.zeta) > 1e-9 * (1.0 + std::abs(m.zeta)))
    throw std::invalid_argument("critical_identity_check: point not computed at zeta");
  const double d = point.dphi0_right;
  return (m.beta - m.zeta * m.zeta) * point.phi0 * point.phi0 + d * d;
}

struct BoundsRow {
  double a = 0.0;
  double lower = 0.0;  // |a| Theta0
  double beta = 0.0;
  double abs_a = 0.0;
  double theta0 = 0.0;
  bool lower_ok = false;
  bool upper_ok = false;  // beta < min(|a|, Theta0)
};

/// Per-a table of the two-sided bound |a| Theta0 < beta_a < min(|a|, Theta0).
inline std::vector<BoundsRow> bounds_table(std::span<const double> a_values,
                                           const Discretization& disc = {}) {
  const double th0 = theta0(disc);
  std::vector<BoundsRow> rows;
  rows.reserve(a_values.size());
  for (double a : a_values) {
    if (!(a >= -1.0 && a < 0.0))
      throw std::invalid_argument("bounds_table: a values must lie in [-1, 0)");
    const BandMinimum m = minimize_band(a, disc);
    BoundsRow r;
    r.a = a;
    r.abs_a = std::abs(a);
    r.theta0 = th0;
    r.lower = r.abs_a * th0;
    r.beta = m.beta;
    if (a == -1.0) {
      r.lower_ok = r.lower < r.beta;
      r.upper_ok = std::abs(r.beta - th0) <= 1e-6;  // boundary case beta_{-1} = Theta0
    } else {
      r.lower_ok = r.lower < r.beta;
      r.upper_ok = r.beta < std::min(r.abs_a, r.theta0);
    }
    rows.push_back(r);
  }
  return rows;
}

}  // namespace stepspec
