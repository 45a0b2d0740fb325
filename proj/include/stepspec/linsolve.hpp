#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <sstream>
#include <vector>

#include "stepspec/eigen.hpp"
#include "stepspec/system.hpp"

namespace stepspec {

namespace detail {

/// Solve the bordered system [[T, c], [c^T, 0]] [y; s] = [r; 0] where T is
/// tridiagonal (possibly numerically singular on span{phi}) and c the border
/// column.  Gaussian elimination with partial pivoting among adjacent
/// tridiagonal rows; the dense border row is updated alongside.  O(n).
inline std::vector<double> bordered_tridiag_solve(std::vector<double> dd,
                                                  std::vector<double> dl,
                                                  std::vector<double> du,
                                                  std::vector<double> col,
                                                  std::vector<double> row,
                                                  std::vector<double> rhs) {
  const std::size_t n = dd.size();
  std::vector<double> du2(n > 1 ? n - 2 + 1 : 0, 0.0);
  double corner = 0.0;
  double brow = 0.0;  // border rhs
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (std::abs(dl[i]) > std::abs(dd[i])) {
      std::swap(dd[i], dl[i]);
      const double t_du = du[i];
      du[i] = dd[i + 1];
      dd[i + 1] = t_du;
      if (i + 2 < n) {
        du2[i] = du[i + 1];
        du[i + 1] = 0.0;
      }
      std::swap(col[i], col[i + 1]);
      std::swap(rhs[i], rhs[i + 1]);
    }
    if (dd[i] == 0.0) dd[i] = 1e-300;
    {
      const double f = dl[i] / dd[i];
      dd[i + 1] -= f * du[i];
      if (i + 2 < n) du[i + 1] -= f * du2[i];
      col[i + 1] -= f * col[i];
      rhs[i + 1] -= f * rhs[i];
    }
    {
      const double f = row[i] / dd[i];
      row[i + 1] -= f * du[i];
      if (i + 2 < n) row[i + 2] -= f * du2[i];
      corner -= f * col[i];
      brow -= f * rhs[i];
    }
  }
  // final 2x2 block in (y_{n-1}, s)
  double a11 = dd[n - 1], a12 = col[n - 1], b1 = rhs[n - 1];
  double a21 = row[n - 1], a22 = corner, b2 = brow;
  if (std::abs(a21) > std::abs(a11)) {
    std::swap(a11, a21);
    std::swap(a12, a22);
    std::swap(b1, b2);
  }
  if (a11 == 0.0) a11 = 1e-300;
  const double f = a21 / a11;
  a22 -= f * a12;
  b2 -= f * b1;
  if (a22 == 0.0) a22 = 1e-300;
  const double s = b2 / a22;
  std::vector<double> y(n);
  y[n - 1] = (b1 - a12 * s) / a11;
  for (int ii = static_cast<int>(n) - 2; ii >= 0; --ii) {
    const auto i = static_cast<std::size_t>(ii);
    double v = rhs[i] - du[i] * y[i + 1] - col[i] * s;
    if (i + 2 < n) v -= du2[i] * y[i + 2];
    y[i] = v / dd[i];
  }
  return y;
}

}  // namespace detail

/// Solve (A - shift*M) x = rhs subject to <x, phi>_mass = 0, where phi is the
/// normalized eigenvector of the pencil at energy `shift`.  rhs must already
/// be orthogonal to phi; an rhs parallel to phi maps to the zero function.
/// Inputs and output are nodal grid functions.
inline std::vector<double> constrained_solve(const TridiagonalSystem& sys, double shift,
                                             std::span<const double> mass,
                                             std::span<const double> rhs,
                                             std::span<const double> phi,
                                             double ortho_tol = 1e-8) {
  const Grid& g = sys.grid;
  std::vector<double> yr = sys.restrict_to_coeff(rhs);
  std::vector<double> yp = sys.restrict_to_coeff(phi);
  const std::size_t n = yr.size();
  auto mdot = [&](std::span<const double> u, std::span<const double> v) {
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      sum += (mass.empty() ? 1.0 : mass[i]) * u[i] * v[i];
    return sum * g.delta;
  };
  const double pp = mdot(yp, yp);
  const double rp = mdot(yr, yp);
  const double rr = mdot(yr, yr);
  if (!(pp > 0.0)) throw std::invalid_argument("constrained_solve: phi vanishes");

  // parallel branch: rhs == c*phi maps to zero
  {
    double perp2 = rr - rp * rp / pp;
    if (perp2 < 0.0) perp2 = 0.0;
    if (perp2 <= 1e-24 * std::max(rr, 1e-300))
      return std::vector<double>(static_cast<std::size_t>(g.n), 0.0);
  }
  if (std::abs(rp) > ortho_tol * std::sqrt(rr * pp)) {
    std::ostringstream os;
    os << "constrained_solve: rhs not orthogonal to phi (<rhs,phi> = " << rp << ")";
    throw std::invalid_argument(os.str());
  }

  // bordered system on T = A - shift*M with border column M*phi
  std::vector<double> dd(n), dl(n > 0 ? n - 1 : 0), du(n > 0 ? n - 1 : 0), col(n);
  for (std::size_t i = 0; i < n; ++i) {
    dd[i] = sys.diag[i] - shift * (mass.empty() ? 1.0 : mass[i]);
    col[i] = (mass.empty() ? 1.0 : mass[i]) * yp[i];
  }
  for (std::size_t i = 0; i + 1 < n; ++i) { dl[i] = sys.offdiag[i]; du[i] = sys.offdiag[i]; }
  std::vector<double> y =
      detail::bordered_tridiag_solve(std::move(dd), std::move(dl), std::move(du), col, col, yr);

  // sweep out residual parallel leakage
  const double yphi = mdot(y, yp) / pp;
  for (std::size_t i = 0; i < n; ++i) y[i] -= yphi * yp[i];
  return sys.embed(y);
}

inline std::vector<double> constrained_solve(const TridiagonalSystem& sys, double shift,
                                             std::span<const double> rhs,
                                             std::span<const double> phi,
                                             double ortho_tol = 1e-8) {
  return constrained_solve(sys, shift, {}, rhs, phi, ortho_tol);
}

inline std::vector<double> constrained_solve(const GeneralizedSystem& sys, double shift,
                                             std::span<const double> rhs,
                                             std::span<const double> phi,
                                             double ortho_tol = 1e-8) {
  return constrained_solve(sys.stiffness, shift, sys.mass, rhs, phi, ortho_tol);
}

}  // namespace stepspec
