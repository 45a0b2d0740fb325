#pragma once

#include <cmath>
#include <functional>
#include <sstream>
#include <utility>
#include <vector>

#include "stepspec/errors.hpp"

namespace stepspec {

/// Result of a coarse scan for a minimum: bracket around the smallest sample
/// plus a count of robust descending-to-ascending transitions (local minima
/// at scan resolution, ignoring flat noise runs below `flat_eps`).
struct ScanBracket {
  double lo = 0.0, mid = 0.0, hi = 0.0;
  double f_mid = 0.0;
  int local_minima = 0;
  std::vector<double> xs, fs;
};

template <class F>
ScanBracket scan_for_minimum(F&& f, double lo, double hi, double step,
                             double flat_eps = 1e-9) {
  ScanBracket sb;
  for (double x = lo; x <= hi + 0.5 * step; x += step) {
    sb.xs.push_back(x);
    sb.fs.push_back(f(x));
  }
  const std::size_t m = sb.xs.size();
  std::size_t imin = 0;
  for (std::size_t i = 1; i < m; ++i)
    if (sb.fs[i] < sb.fs[imin]) imin = i;
  if (imin == 0 || imin + 1 == m) {
    std::ostringstream os;
    os << "scan_for_minimum: no interior dip in [" << lo << ", " << hi
       << "] (min sample at boundary x=" << sb.xs[imin] << ", f=" << sb.fs[imin]
       << ", ends f=" << sb.fs.front() << ", " << sb.fs.back() << ")";
    throw solver_error(os.str(), lo, hi);
  }
  // count sign transitions of forward differences with flat-run suppression
  int state = 0;  // last robust slope sign
  for (std::size_t i = 0; i + 1 < m; ++i) {
    const double d = sb.fs[i + 1] - sb.fs[i];
    const int s = (d > flat_eps) ? 1 : (d < -flat_eps ? -1 : 0);
    if (s == 0) continue;
    if (state == -1 && s == 1) ++sb.local_minima;
    state = s;
  }
  sb.lo = sb.xs[imin - 1];
  sb.mid = sb.xs[imin];
  sb.hi = sb.xs[imin + 1];
  sb.f_mid = sb.fs[imin];
  return sb;
}

/// Brent minimization (golden section with parabolic steps) on a bracket
/// lo < mid < hi with f(mid) below both ends.  Returns (x, f(x)).
template <class F>
std::pair<double, double> brent_minimize(F&& f, double lo, double mid, double hi,
                                         double xtol = 1e-10, int max_iter = 200) {
  const double golden = 0.3819660112501051;
  double a = lo, b = hi;
  double x = mid, w = mid, v = mid;
  double fx = f(x), fw = fx, fv = fx;
  double d = 0.0, e = 0.0;
  for (int it = 0; it < max_iter; ++it) {
    const double xm = 0.5 * (a + b);
    const double tol1 = xtol + 1e-15 * std::abs(x);
    const double tol2 = 2.0 * tol1;
    if (std::abs(x - xm) <= tol2 - 0.5 * (b - a)) return {x, fx};
    double u;
    if (std::abs(e) > tol1) {
      // parabolic fit through x, w, v
      const double r = (x - w) * (fx - fv);
      double q = (x - v) * (fx - fw);
      double p = (x - v) * q - (x - w) * r;
      q = 2.0 * (q - r);
      if (q > 0.0) p = -p;
      q = std::abs(q);
      const double etemp = e;
      e = d;
      if (std::abs(p) >= std::abs(0.5 * q * etemp) || p <= q * (a - x) || p >= q * (b - x)) {
        e = (x >= xm) ? a - x : b - x;
        d = golden * e;
      } else {
        d = p / q;
        u = x + d;
        if (u - a < tol2 || b - u < tol2) d = std::copysign(tol1, xm - x);
      }
    } else {
      e = (x >= xm) ? a - x : b - x;
      d = golden * e;
    }
    u = (std::abs(d) >= tol1) ? x + d : x + std::copysign(tol1, d);
    const double fu = f(u);
    if (fu <= fx) {
      if (u >= x) a = x; else b = x;
      v = w; fv = fw;
      w = x; fw = fx;
      x = u; fx = fu;
    } else {
      if (u < x) a = u; else b = u;
      if (fu <= fw || w == x) {
        v = w; fv = fw;
        w = u; fw = fu;
      } else if (fu <= fv || v == x || v == w) {
        v = u; fv = fu;
      }
    }
  }
  throw solver_error("brent_minimize: iteration cap reached", a, b);
}

/// Bisection for a root of a monotone-through-zero function on [lo, hi];
/// the sign change is required.  Used to polish minimizers through exact
/// discrete eigenvalue derivatives, which localize far better than values.
template <class F>
double bisect_root(F&& f, double lo, double hi, double flo, double fhi,
                   int iters = 60) {
  if (!(flo <= 0.0 && fhi >= 0.0) && !(flo >= 0.0 && fhi <= 0.0))
    throw solver_error("bisect_root: no sign change on bracket", lo, hi);
  const bool increasing = fhi >= flo;
  for (int i = 0; i < iters && hi - lo > 1e-13 * (1.0 + std::abs(lo)); ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if ((fm > 0.0) == increasing) hi = mid;
    else lo = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace stepspec
