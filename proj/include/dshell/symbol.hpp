#pragma once

// Fourier symbols of the line operators. With F the unitary transform along
// the line (kernel e^{-ipx}/sqrt(2 pi)) every operator below acts as
// multiplication by a 2x2 matrix function of the momentum p:
//
//   C_z        ->  chat(p)      = (sigma_1 p + m sigma_3 + z) / (2 kappa)
//   Theta      ->  theta_ref(p) = -sqrt(p^2+1) [ 1/eta + Re chat_zeta(p) ]
//   M(z)       ->  weyl(p)      =  sqrt(p^2+1) [ chat_z(p) - Re chat_zeta(p) ]
//   Theta-M(z) ->  theta_z(p)   = -sqrt(p^2+1) [ 1/eta + chat_z(p) ]
//
// where kappa = sqrt(p^2 + m^2 - z^2) on the principal branch. Under the
// opposite transform convention the off-diagonal entries flip with p -> -p;
// determinants, spectra and diagnostics are unchanged.

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dshell/errors.hpp"
#include "dshell/numerics.hpp"
#include "dshell/params.hpp"
#include "dshell/tolerances.hpp"

namespace dshell {

/// Momentum p, spectral parameter z and the radical kappa = sqrt(p^2+m^2-z^2).
struct SymbolPoint {
  double p = 0.0;
  cplx z{};
  cplx kappa{1.0, 0.0};

  /// Throws DomainError when p^2 + m^2 - z^2 lies on (-inf, 0].
  static SymbolPoint make(const ShellParams& params, double p, cplx z) {
    const double m = params.m();
    return {p, z, branch_sqrt(cplx(p * p + m * m) - z * z)};
  }
};

namespace detail {

inline void require_coupling(const ShellParams& params, const char* what) {
  if (params.free()) {
    throw DomainError(std::string(what) + ": undefined for eta = 0 (free operator)");
  }
}

inline double bracket(double p) { return std::sqrt(p * p + 1.0); }

}  // namespace detail

/// Symbol of C_z at momentum p.
inline Mat2C chat(const ShellParams& params, const SymbolPoint& pt) {
  const double m = params.m();
  const cplx s = 1.0 / (2.0 * pt.kappa);
  return {(pt.z + m) * s, pt.p * s, pt.p * s, (pt.z - m) * s};
}

inline Mat2C chat(const ShellParams& params, double p, cplx z) {
  return chat(params, SymbolPoint::make(params, p, z));
}

/// Default reference point zeta = i (1 + |m|) in the resolvent set of A_0.
inline cplx default_zeta(const ShellParams& params) { return {0.0, 1.0 + params.abs_m()}; }

/// Symbol theta(p) of the self-adjoint boundary parameter Theta, built with
/// the reference point zeta (Im zeta != 0). Real symmetric for real p.
inline Mat2C theta_ref(const ShellParams& params, cplx zeta, double p) {
  detail::require_coupling(params, "theta_ref");
  if (zeta.imag() == 0.0) {
    throw PreconditionError("theta_ref: reference point zeta must lie off the real axis");
  }
  const Mat2C inner = Mat2C::identity() * cplx(1.0 / params.eta()) + real_part(chat(params, p, zeta));
  return inner * cplx(-detail::bracket(p));
}

/// Symbol of the Weyl function M(z) = Lambda (C_z - (C_zeta + C_conj(zeta))/2) Lambda.
inline Mat2C weyl_symbol(const ShellParams& params, cplx z, cplx zeta, double p) {
  const Mat2C diff = chat(params, p, z) - real_part(chat(params, p, zeta));
  return diff * cplx(detail::bracket(p));
}

/// Symbol of Theta - M(z).
inline Mat2C theta_z(const ShellParams& params, const SymbolPoint& pt) {
  detail::require_coupling(params, "theta_z");
  const Mat2C inner = Mat2C::identity() * cplx(1.0 / params.eta()) + chat(params, pt);
  return inner * cplx(-detail::bracket(pt.p));
}

/// det theta_z(p) = (p^2+1) [ 1/eta^2 + z/(eta kappa) - 1/4 ].
inline cplx det_theta(const ShellParams& params, const SymbolPoint& pt) {
  detail::require_coupling(params, "det_theta");
  const double eta = params.eta();
  return (pt.p * pt.p + 1.0) * (1.0 / (eta * eta) + pt.z / (eta * pt.kappa) - 0.25);
}

/// c_z(p) = (4 - eta^2) kappa + 4 eta z; zero exactly on the dispersion curve.
inline cplx c_func(const ShellParams& params, const SymbolPoint& pt) {
  detail::require_coupling(params, "c_func");
  const double eta = params.eta();
  return (4.0 - eta * eta) * pt.kappa + 4.0 * eta * pt.z;
}

/// Closed-form inverse of theta_z. Throws SingularityError when
/// |c_z(p)| <= 1e-13 (1 + |z| + |p|), i.e. at (or numerically on) a
/// spectral point.
inline Mat2C theta_inv(const ShellParams& params, const SymbolPoint& pt) {
  const cplx c = c_func(params, pt);
  const double threshold = tol::kSingularC * (1.0 + std::abs(pt.z) + std::abs(pt.p));
  if (std::abs(c) <= threshold) {
    throw SingularityError("theta_inv: c_z(p) vanishes at p = " + std::to_string(pt.p) +
                           "; z is a spectral point of the symbol");
  }
  const double eta = params.eta();
  const double m = params.m();
  const cplx two_kappa = 2.0 * pt.kappa;
  const Mat2C body{two_kappa + eta * (pt.z - m), cplx(-eta * pt.p), cplx(-eta * pt.p),
                   two_kappa + eta * (pt.z + m)};
  return body * (-2.0 * eta / (c * detail::bracket(pt.p)));
}

/// Zeros p_-, p_+ of c_{x+i0} for x on the free essential spectrum, or
/// nullopt when there are none (eta = +-2 or x eta / (eta^2 - 4) < 0).
inline std::optional<std::pair<double, double>> p_crit(const ShellParams& params, double x) {
  detail::require_coupling(params, "p_crit");
  if (std::abs(x) < params.abs_m()) {
    throw PreconditionError("p_crit: requires |x| >= |m| (x on the free essential spectrum)");
  }
  if (params.critical()) return std::nullopt;
  const double eta = params.eta();
  const double q = eta * eta - 4.0;
  if (x * eta / q < 0.0 || x == 0.0) return std::nullopt;
  const double ratio = (eta * eta + 4.0) / q;
  const double radicand = ratio * ratio * x * x - params.m() * params.m();
  if (radicand < 0.0) return std::nullopt;
  const double r = std::sqrt(radicand);
  return std::make_pair(-r, r);
}

struct LimitRow {
  double y;
  double value;
};

/// For each y: sup over the grid of || y theta_{x+iy}^{-1}(p) ||_2.
///
/// When c_{x+i0} has zeros p_+-, grid points with |p - p_+-| < sqrt(y) are
/// excluded: on that shrinking window y theta^{-1} stays O(1), and the decay
/// to zero holds on the complement (the strong limit is zero because the
/// window's measure vanishes).
inline std::vector<LimitRow> limit_sup_diag(const ShellParams& params, double x,
                                            std::span<const double> y_list,
                                            std::span<const double> p_grid) {
  detail::require_coupling(params, "limit_sup_diag");
  if (std::abs(x) < params.abs_m()) {
    throw PreconditionError("limit_sup_diag: x must lie in (-inf,-|m|] u [|m|,inf)");
  }
  const auto zeros = p_crit(params, x);
  std::vector<LimitRow> rows;
  rows.reserve(y_list.size());
  for (const double y : y_list) {
    if (!(y > 0.0)) throw PreconditionError("limit_sup_diag: y values must be positive");
    const cplx z(x, y);
    const double window = std::sqrt(y);
    double sup = 0.0;
    for (const double p : p_grid) {
      if (zeros && (std::abs(p - zeros->first) < window || std::abs(p - zeros->second) < window)) {
        continue;
      }
      const auto pt = SymbolPoint::make(params, p, z);
      sup = std::max(sup, y * op_norm(theta_inv(params, pt)));
    }
    rows.push_back({y, sup});
  }
  return rows;
}

/// For each y: max over `nodes` equally spaced points of [a, b] of the
/// largest |Im| entry of theta_{x+iy}^{-1}(p). The interval must sit strictly
/// inside (-sqrt(x^2-m^2), sqrt(x^2-m^2)) and away from p_+-.
inline std::vector<LimitRow> limit_im_diag(const ShellParams& params, double x, double a, double b,
                                           std::span<const double> y_list,
                                           std::size_t nodes = 401) {
  detail::require_coupling(params, "limit_im_diag");
  const double m = params.m();
  if (!(std::abs(x) > params.abs_m())) {
    throw PreconditionError("limit_im_diag: requires |x| > |m|");
  }
  const double pmax = std::sqrt(x * x - m * m);
  if (!(a <= b) || !(-pmax < a) || !(b < pmax)) {
    throw PreconditionError("limit_im_diag: interval must lie strictly inside (-sqrt(x^2-m^2), sqrt(x^2-m^2))");
  }
  if (const auto zeros = p_crit(params, x)) {
    for (const double pz : {zeros->first, zeros->second}) {
      if (a <= pz && pz <= b) throw PreconditionError("limit_im_diag: interval contains p_+-");
    }
  }
  std::vector<double> ps;
  if (a == b || nodes < 2) {
    ps.push_back(a);
  } else {
    for (std::size_t i = 0; i < nodes; ++i) {
      ps.push_back(a + (b - a) * static_cast<double>(i) / static_cast<double>(nodes - 1));
    }
  }
  std::vector<LimitRow> rows;
  for (const double y : y_list) {
    if (!(y > 0.0)) throw PreconditionError("limit_im_diag: y values must be positive");
    double best = 0.0;
    for (const double p : ps) {
      const Mat2C inv = theta_inv(params, SymbolPoint::make(params, p, cplx(x, y)));
      best = std::max({best, std::abs(inv.a11.imag()), std::abs(inv.a12.imag()),
                       std::abs(inv.a21.imag()), std::abs(inv.a22.imag())});
    }
    rows.push_back({y, best});
  }
  return rows;
}

}  // namespace dshell
