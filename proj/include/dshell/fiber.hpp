#pragma once

// Fiber-wise oracle for the shell operator.
//
// After a Fourier transform along the line, the operator at momentum p acts
// on spinors of the transverse variable x2 as
//
//   A(p) = sigma_1 p - i sigma_2 d/dx2 + m sigma_3     (x2 != 0)
//
// with the point transmission condition
//
//   i sigma_2 (f(0+) - f(0-)) = (eta/2) (f(0+) + f(0-)).
//
// For z in the fiber gap (-sqrt(p^2+m^2), sqrt(p^2+m^2)) the decaying
// solutions are v_+ e^{-kappa x2} (x2 > 0) and v_- e^{kappa x2} (x2 < 0),
// kappa = sqrt(p^2+m^2-z^2), with (sigma_1 p +- i kappa sigma_2 + m sigma_3) v = z v.
// z is a fiber eigenvalue iff the 2x2 matching system for the amplitudes
// (alpha, beta) is singular. Nothing here touches the Fourier symbols; the
// agreement with the closed-form dispersion curve is a genuine cross-check.

#include <array>
#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dshell/errors.hpp"
#include "dshell/numerics.hpp"
#include "dshell/params.hpp"
#include "dshell/quadrature.hpp"
#include "dshell/tolerances.hpp"

namespace dshell {

struct FiberSolution {
  double p = 0.0;
  double z = 0.0;
  double kappa = 0.0;
  Spinor v_plus{};   // boundary vector of the solution decaying into x2 > 0
  Spinor v_minus{};  // ... into x2 < 0
  cplx match_det{};
  // Kernel amplitudes of the matching system, normalised so that the fiber
  // eigenfunction has unit L^2 norm; zero when the system is regular.
  cplx alpha{};
  cplx beta{};

  /// max over both half-lines of |(sigma_1 p +- i kappa sigma_2 + m sigma_3 - z) v| / |v|.
  double eigen_residual(double m) const {
    const Mat2C iks = pauli(2) * cplx(0.0, kappa);
    const Mat2C base = pauli(1) * cplx(p) + pauli(3) * cplx(m) - Mat2C::identity() * cplx(z);
    const Spinor rp = (base + iks) * v_plus;
    const Spinor rm = (base - iks) * v_minus;
    return std::max(norm(rp) / norm(v_plus), norm(rm) / norm(v_minus));
  }

  /// Squared L^2 norm of alpha v_+ e^{-kappa x2} (+) beta v_- e^{kappa x2}.
  double norm_squared() const {
    return (std::norm(alpha) * std::pow(norm(v_plus), 2) +
            std::norm(beta) * std::pow(norm(v_minus), 2)) /
           (2.0 * kappa);
  }
};

namespace detail {

inline double fiber_gap(const ShellParams& params, double p) {
  return std::sqrt(p * p + params.m() * params.m());
}

// Boundary vectors. Each half-line eigenvector has two polynomial forms,
// (p+kappa, z-m) ~ (z+m, p-kappa) above and (p-kappa, z-m) ~ (z+m, p+kappa)
// below; each form vanishes somewhere in the gap (e.g. (p-kappa, z-m) at
// z = m, p > 0). Choosing the form by the sign of p keeps both vectors
// nonzero for every z in the gap, so the matching determinant has no
// spurious zeros and varies continuously in z.
inline Spinor upper_vector(double p, double z, double m, double kappa) {
  return p >= 0.0 ? Spinor{p + kappa, z - m} : Spinor{z + m, p - kappa};
}
inline Spinor lower_vector(double p, double z, double m, double kappa) {
  return p <= 0.0 ? Spinor{p - kappa, z - m} : Spinor{z + m, p + kappa};
}

// Columns of the matching system  (i sigma_2 - eta/2) v_+ alpha - (i sigma_2 + eta/2) v_- beta = 0.
inline Mat2C matching_matrix(double eta, const Spinor& vp, const Spinor& vm) {
  const Mat2C is2{0.0, 1.0, -1.0, 0.0};  // i sigma_2
  const Mat2C half = Mat2C::identity() * cplx(0.5 * eta);
  const Spinor c1 = (is2 - half) * vp;
  const Spinor c2 = (is2 + half) * vm;
  return {c1[0], -c2[0], c1[1], -c2[1]};
}

// Numerator and denominator of the quasi-mode residual, integrated together.
struct Moments {
  double num = 0.0, den = 0.0;
  Moments& operator+=(const Moments& o) { num += o.num; den += o.den; return *this; }
  friend Moments operator*(double s, Moments m) { m.num *= s; m.den *= s; return m; }
  friend Moments operator+(Moments a, const Moments& b) { return a += b; }
  friend Moments operator-(const Moments& a, const Moments& b) { return {a.num - b.num, a.den - b.den}; }
  friend double abs(const Moments& m) { return std::max(std::abs(m.num), std::abs(m.den)); }
};

}  // namespace detail

/// Decaying solutions and matching data at momentum p and real energy z in
/// the open fiber gap.
inline FiberSolution fiber_solve(const ShellParams& params, double p, double z) {
  const double gap = detail::fiber_gap(params, p);
  if (!(std::abs(z) < gap)) {
    throw PreconditionError("fiber_solve: z must lie in the open fiber gap (-sqrt(p^2+m^2), sqrt(p^2+m^2))");
  }
  const double m = params.m();
  FiberSolution s;
  s.p = p;
  s.z = z;
  s.kappa = std::sqrt((gap - z) * (gap + z));
  s.v_plus = detail::upper_vector(p, z, m, s.kappa);
  s.v_minus = detail::lower_vector(p, z, m, s.kappa);
  s.match_det = detail::matching_matrix(params.eta(), s.v_plus, s.v_minus).det();
  return s;
}

/// Determinant of the fiber matching system; zero exactly at fiber eigenvalues.
inline cplx matching_det(const ShellParams& params, double p, double z) {
  if (params.free()) throw PreconditionError("matching_det: requires eta != 0");
  return fiber_solve(params, p, z).match_det;
}

/// Brackets [z_i, z_{i+1}] where Re matching_det(p, .) changes sign on the
/// uniform scan grid covering 99.9% of the open fiber gap.
inline std::vector<std::pair<double, double>> fiber_sign_brackets(const ShellParams& params, double p) {
  const double gap = detail::fiber_gap(params, p);
  const double edge = gap * (1.0 - tol::kGapMargin);
  const int n = tol::kScanNodes;
  std::vector<std::pair<double, double>> brackets;
  double z_prev = -edge;
  double f_prev = fiber_solve(params, p, z_prev).match_det.real();
  for (int i = 1; i < n; ++i) {
    const double z = -edge + 2.0 * edge * i / (n - 1);
    const double f = fiber_solve(params, p, z).match_det.real();
    if (f_prev == 0.0) {
      brackets.emplace_back(z_prev, z_prev);
    } else if ((f_prev < 0.0) != (f < 0.0) && f != 0.0) {
      brackets.emplace_back(z_prev, z);
    }
    z_prev = z;
    f_prev = f;
  }
  if (f_prev == 0.0) brackets.emplace_back(z_prev, z_prev);
  return brackets;
}

/// The fiber eigenvalue at momentum p (sign scan + bisection to 1e-12), or
/// nullopt when the matching determinant does not change sign in the gap.
inline std::optional<double> fiber_eigenvalue(const ShellParams& params, double p) {
  if (params.free() || params.critical()) {
    throw PreconditionError("fiber_eigenvalue: requires eta not in {0, 2, -2}");
  }
  const auto brackets = fiber_sign_brackets(params, p);
  if (brackets.empty()) return std::nullopt;
  auto [lo, hi] = brackets.front();
  if (lo == hi) return lo;
  const bool lo_negative = fiber_solve(params, p, lo).match_det.real() < 0.0;
  while (hi - lo > tol::kBisectionAbs) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double f = fiber_solve(params, p, mid).match_det.real();
    if (f == 0.0) return mid;
    if ((f < 0.0) == lo_negative) lo = mid; else hi = mid;
  }
  return 0.5 * (lo + hi);
}

/// Fiber eigenfunction at momentum p with unit L^2 norm in x2.
inline std::optional<FiberSolution> fiber_mode(const ShellParams& params, double p) {
  const auto z = fiber_eigenvalue(params, p);
  if (!z) return std::nullopt;
  FiberSolution s = fiber_solve(params, p, *z);
  const Mat2C a = detail::matching_matrix(params.eta(), s.v_plus, s.v_minus);
  // Null vector of the (numerically) singular system from its larger row.
  const bool first = std::abs(a.a11) + std::abs(a.a12) >= std::abs(a.a21) + std::abs(a.a22);
  cplx alpha = first ? a.a12 : a.a22;
  cplx beta = first ? -a.a11 : -a.a21;
  s.alpha = alpha;
  s.beta = beta;
  const double n = std::sqrt(s.norm_squared());
  s.alpha /= n;
  s.beta /= n;
  return s;
}

/// max |matching_det(p, 0)| over the grid; analytically zero at eta = +-2.
inline double kernel_at_zero_scan(const ShellParams& params, std::span<const double> p_grid) {
  if (!params.critical()) {
    throw PreconditionError("kernel_at_zero_scan: requires critical coupling eta = +-2");
  }
  double worst = 0.0;
  for (const double p : p_grid) {
    if (detail::fiber_gap(params, p) == 0.0) continue;  // empty gap (m = 0, p = 0)
    worst = std::max(worst, std::abs(fiber_solve(params, p, 0.0).match_det));
  }
  return worst;
}

/// min |matching_det(p, z)| over the grid (points with an empty gap skipped).
inline double min_matching_det(const ShellParams& params, double z, std::span<const double> p_grid) {
  double best = std::numeric_limits<double>::infinity();
  for (const double p : p_grid) {
    if (!(std::abs(z) < detail::fiber_gap(params, p))) continue;
    best = std::min(best, std::abs(fiber_solve(params, p, z).match_det));
  }
  return best;
}

/// Relative residual ||(A_eta - z(p0)) f_w|| / ||f_w|| of the wave packet
///   f_w(x) = int g_w(p) e^{i p x1} u_p(x2) dp
/// built from unit fiber eigenfunctions u_p, where |g_w|^2 is the Gaussian
/// density of standard deviation w centred at p0. By Plancherel,
///   R(w)^2 = int |g_w|^2 (z(p) - z(p0))^2 ||u_p||^2 dp / int |g_w|^2 ||u_p||^2 dp.
inline double quasimode_residual(const ShellParams& params, double p0, double w) {
  if (params.free() || params.critical()) {
    throw PreconditionError("quasimode_residual: requires eta not in {0, 2, -2}");
  }
  if (!(w > 0.0)) throw PreconditionError("quasimode_residual: width must be positive");
  const auto centre = fiber_mode(params, p0);
  if (!centre) throw PreconditionError("quasimode_residual: no fiber eigenvalue at p0");
  const double z0 = centre->z;
  auto integrand = [&](double p) {
    const auto mode = fiber_mode(params, p);
    if (!mode) throw PreconditionError("quasimode_residual: dispersion curve leaves the scan window");
    const double u = (p - p0) / w;
    const double density = std::exp(-0.5 * u * u);
    const double weight = density * mode->norm_squared();
    const double dz = mode->z - z0;
    return detail::Moments{weight * dz * dz, weight};
  };
  const auto res = quad::tanh_sinh(integrand, p0 - 8.0 * w, p0 + 8.0 * w, 1e-10, 0.0, 4);
  return std::sqrt(res.value.num / res.value.den);
}

}  // namespace dshell
