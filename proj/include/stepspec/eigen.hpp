#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <sstream>
#include <vector>

#include "stepspec/errors.hpp"
#include "stepspec/system.hpp"

namespace stepspec {

/// Eigenvalue with its nodal grid eigenfunction (length grid.n).  The vector
/// is normalized to unit trapezoid/mass-weighted L2 norm and sign-fixed so the
/// value at tau = 0 (origin node on half-line grids) is positive.
struct EigenPair {
  double value = 0.0;
  std::vector<double> vector;
};

namespace detail {

struct SymTridiag {
  std::vector<double> d;  // diagonal
  std::vector<double> e;  // off-diagonal
};

inline double norm1(const SymTridiag& t) {
  double m = 0.0;
  const std::size_t n = t.d.size();
  for (std::size_t i = 0; i < n; ++i) {
    double s = std::abs(t.d[i]);
    if (i > 0) s += std::abs(t.e[i - 1]);
    if (i + 1 < n) s += std::abs(t.e[i]);
    m = std::max(m, s);
  }
  return m;
}

/// Number of eigenvalues strictly below x (Sturm sequence via LDL pivots).
inline int sturm_count(const SymTridiag& t, double x) {
  const std::size_t n = t.d.size();
  int count = 0;
  double q = t.d[0] - x;
  if (q < 0.0) ++count;
  for (std::size_t i = 1; i < n; ++i) {
    const double denom = (q == 0.0) ? -1e-300 : q;
    q = t.d[i] - x - t.e[i - 1] * t.e[i - 1] / denom;
    if (q < 0.0) ++count;
  }
  return count;
}

/// k-th smallest eigenvalue (0-based) by bisection on the Sturm count.
inline double bisect_eigenvalue(const SymTridiag& t, int k, double tol) {
  const std::size_t n = t.d.size();
  double lo = t.d[0], hi = t.d[0];
  for (std::size_t i = 0; i < n; ++i) {
    double r = 0.0;
    if (i > 0) r += std::abs(t.e[i - 1]);
    if (i + 1 < n) r += std::abs(t.e[i]);
    lo = std::min(lo, t.d[i] - r);
    hi = std::max(hi, t.d[i] + r);
  }
  for (int it = 0; it < 400; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (sturm_count(t, mid) >= k + 1) hi = mid;
    else lo = mid;
    if (hi - lo <= tol + 8.0 * std::numeric_limits<double>::epsilon() *
                             std::max(std::abs(lo), std::abs(hi)))
      return 0.5 * (lo + hi);
  }
  throw solver_error("eigenvalue bisection did not converge", lo, hi);
}

/// LU factorization of T - shift*I with partial pivoting (gttrf layout:
/// multipliers in dl, fill-in second superdiagonal in du2).
struct TridiagLU {
  std::vector<double> dl, dd, du, du2;
  std::vector<int> piv;  // 1 if rows i, i+1 swapped at step i

  void factor(const SymTridiag& t, double shift) {
    const std::size_t n = t.d.size();
    dd.resize(n); dl.assign(n > 0 ? n - 1 : 0, 0.0);
    du.assign(n > 0 ? n - 1 : 0, 0.0); du2.assign(n > 1 ? n - 2 : 0, 0.0);
    piv.assign(n > 0 ? n - 1 : 0, 0);
    for (std::size_t i = 0; i < n; ++i) dd[i] = t.d[i] - shift;
    for (std::size_t i = 0; i + 1 < n; ++i) { dl[i] = t.e[i]; du[i] = t.e[i]; }
    const double tiny = 1e-300;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      if (std::abs(dd[i]) >= std::abs(dl[i])) {
        if (dd[i] == 0.0) dd[i] = tiny;
        const double m = dl[i] / dd[i];
        dl[i] = m;
        dd[i + 1] -= m * du[i];
        if (i + 2 < n) du2[i] = 0.0;
      } else {
        const double m = dd[i] / dl[i];
        dd[i] = dl[i];
        dl[i] = m;
        const double tmp = du[i];
        du[i] = dd[i + 1];
        dd[i + 1] = tmp - m * dd[i + 1];
        if (i + 2 < n) {
          du2[i] = du[i + 1];
          du[i + 1] = -m * du[i + 1];
        }
        piv[i] = 1;
      }
    }
    if (dd[n - 1] == 0.0) dd[n - 1] = tiny;
  }

  void solve(std::vector<double>& b) const {
    const std::size_t n = dd.size();
    for (std::size_t i = 0; i + 1 < n; ++i) {
      if (piv[i]) std::swap(b[i], b[i + 1]);
      b[i + 1] -= dl[i] * b[i];
    }
    b[n - 1] /= dd[n - 1];
    if (n >= 2) b[n - 2] = (b[n - 2] - du[n - 2] * b[n - 1]) / dd[n - 2];
    for (int i = static_cast<int>(n) - 3; i >= 0; --i) {
      const auto u = static_cast<std::size_t>(i);
      b[u] = (b[u] - du[u] * b[u + 1] - du2[u] * b[u + 2]) / dd[u];
    }
  }
};

inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double nrm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

/// Inverse iteration for the eigenvector of an already-bisected eigenvalue,
/// with re-orthogonalization against previously computed vectors.
inline std::vector<double> inverse_iteration(const SymTridiag& t, double lambda,
                                             const std::vector<std::vector<double>>& prev,
                                             double tol, int cap) {
  const std::size_t n = t.d.size();
  TridiagLU lu;
  lu.factor(t, lambda);
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i)
    x[i] = 1.0 + 0.3 * std::sin(2.399963229728653 * static_cast<double>(i));
  for (const auto& p : prev) {
    const double c = dot(x, p);
    for (std::size_t i = 0; i < n; ++i) x[i] -= c * p[i];
  }
  double nx = nrm2(x);
  for (double& v : x) v /= nx;

  const double scale = norm1(t) + std::abs(lambda);
  const double target = std::max(tol * (1.0 + std::abs(lambda)),
                                 100.0 * std::numeric_limits<double>::epsilon() * scale);
  std::vector<double> best = x;
  double best_resid = std::numeric_limits<double>::infinity();
  for (int it = 0; it < cap; ++it) {
    lu.solve(x);
    for (const auto& p : prev) {
      const double c = dot(x, p);
      for (std::size_t i = 0; i < n; ++i) x[i] -= c * p[i];
    }
    nx = nrm2(x);
    if (!(nx > 0.0) || !std::isfinite(nx))
      throw solver_error("inverse iteration lost the vector", lambda, lambda);
    for (double& v : x) v /= nx;
    // residual ||(T - lambda) x||
    double r2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double v = (t.d[i] - lambda) * x[i];
      if (i > 0) v += t.e[i - 1] * x[i - 1];
      if (i + 1 < n) v += t.e[i] * x[i + 1];
      r2 += v * v;
    }
    const double resid = std::sqrt(r2);
    if (resid < best_resid) {
      best_resid = resid;
      best = x;
    }
    if (resid <= target) return best;
  }
  if (best_resid <= 1e4 * target) return best;  // clustered case: accept the best iterate
  std::ostringstream os;
  os << "inverse iteration stalled (residual " << best_resid << ", target " << target << ")";
  throw solver_error(os.str(), lambda, lambda);
}

/// Symmetrized pencil: plain systems pass mass = {}, generalized systems are
/// conjugated by the inverse square roots of the mass entries (tridiagonality
/// is preserved).
inline SymTridiag symmetrize(const TridiagonalSystem& sys, std::span<const double> mass) {
  SymTridiag t;
  const std::size_t n = sys.diag.size();
  t.d.resize(n);
  t.e.resize(n > 0 ? n - 1 : 0);
  if (mass.empty()) {
    t.d = sys.diag;
    t.e = sys.offdiag;
    return t;
  }
  for (std::size_t i = 0; i < n; ++i) t.d[i] = sys.diag[i] / mass[i];
  for (std::size_t i = 0; i + 1 < n; ++i)
    t.e[i] = sys.offdiag[i] / std::sqrt(mass[i] * mass[i + 1]);
  return t;
}

inline void fix_sign(const TridiagonalSystem& sys, std::vector<double>& nodal) {
  int ref = -1;
  if (sys.grid.straddles_zero() || sys.grid.lo == 0.0) ref = sys.grid.zero_index();
  double probe = 0.0;
  if (ref >= 0) probe = nodal[static_cast<std::size_t>(ref)];
  double amax = 0.0;
  std::size_t imax = 0;
  for (std::size_t i = 0; i < nodal.size(); ++i)
    if (std::abs(nodal[i]) > amax) { amax = std::abs(nodal[i]); imax = i; }
  const double key = (std::abs(probe) > 1e-10 * amax) ? probe : nodal[imax];
  if (key < 0.0)
    for (double& v : nodal) v = -v;
}

inline std::vector<EigenPair> eig_pairs(const TridiagonalSystem& sys,
                                        std::span<const double> mass, int k, double tol,
                                        int iter_cap) {
  const int n = sys.size();
  if (k < 1 || k >= n) throw std::invalid_argument("eigs: need 1 <= k < n");
  if (!(tol > 0.0)) throw std::invalid_argument("eigs: tol must be positive");
  const SymTridiag t = symmetrize(sys, mass);
  std::vector<EigenPair> out;
  std::vector<std::vector<double>> prev;
  double last = -std::numeric_limits<double>::infinity();
  for (int j = 0; j < k; ++j) {
    const double lam0 = bisect_eigenvalue(t, j, tol);
    std::vector<double> z = inverse_iteration(t, lam0, prev, tol, iter_cap);
    // Rayleigh quotient sharpens the value past bisection resolution
    double rq = 0.0;
    for (int i = 0; i < n; ++i) {
      double v = t.d[static_cast<std::size_t>(i)] * z[static_cast<std::size_t>(i)];
      if (i > 0) v += t.e[static_cast<std::size_t>(i - 1)] * z[static_cast<std::size_t>(i - 1)];
      if (i + 1 < n) v += t.e[static_cast<std::size_t>(i)] * z[static_cast<std::size_t>(i + 1)];
      rq += z[static_cast<std::size_t>(i)] * v;
    }
    if (!(rq > last)) throw solver_error("eigenvalues not strictly increasing", last, rq);
    last = rq;
    prev.push_back(z);

    // back-transform and normalize: delta * sum(m z^2) is the trapezoid norm
    std::vector<double> y = z;
    if (!mass.empty())
      for (std::size_t i = 0; i < y.size(); ++i) y[i] /= std::sqrt(mass[i]);
    const double nrm = std::sqrt(sys.grid.delta) * nrm2(z);
    for (double& v : y) v /= nrm;
    std::vector<double> nodal = sys.embed(y);
    fix_sign(sys, nodal);
    out.push_back({rq, std::move(nodal)});
  }
  return out;
}

inline std::vector<double> eig_values(const TridiagonalSystem& sys,
                                      std::span<const double> mass, int k, double tol) {
  const int n = sys.size();
  if (k < 1 || k >= n) throw std::invalid_argument("eigs: need 1 <= k < n");
  if (!(tol > 0.0)) throw std::invalid_argument("eigs: tol must be positive");
  const SymTridiag t = symmetrize(sys, mass);
  std::vector<double> vals(static_cast<std::size_t>(k));
  for (int j = 0; j < k; ++j) vals[static_cast<std::size_t>(j)] = bisect_eigenvalue(t, j, tol);
  return vals;
}

}  // namespace detail

inline std::vector<EigenPair> eigs_smallest(const TridiagonalSystem& sys, int k,
                                            double tol = 1e-12, int iter_cap = 50) {
  return detail::eig_pairs(sys, {}, k, tol, iter_cap);
}

inline std::vector<EigenPair> eigs_smallest(const GeneralizedSystem& sys, int k,
                                            double tol = 1e-12, int iter_cap = 50) {
  return detail::eig_pairs(sys.stiffness, sys.mass, k, tol, iter_cap);
}

/// Values-only path for scans and minimizations (no inverse iteration).
inline std::vector<double> smallest_eigenvalues(const TridiagonalSystem& sys, int k,
                                                double tol = 1e-12) {
  return detail::eig_values(sys, {}, k, tol);
}

inline std::vector<double> smallest_eigenvalues(const GeneralizedSystem& sys, int k,
                                                double tol = 1e-12) {
  return detail::eig_values(sys.stiffness, sys.mass, k, tol);
}

}  // namespace stepspec
