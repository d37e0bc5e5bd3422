#pragma once

// Modified Bessel functions of the second kind, orders 0 and 1, for complex
// arguments with Re w > 0, from
//
//   K_nu(w) = int_0^inf exp(-w cosh t) cosh(nu t) dt
//           = e^{-w} int_0^inf exp(-2 w sinh^2(t/2)) cosh(nu t) dt.
//
// The integrand is entire and decays double exponentially, so the plain
// trapezoid rule converges geometrically in 1/h; the step is halved until
// successive sums agree. No series or asymptotic expansions are used here.

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>

#include "dshell/errors.hpp"
#include "dshell/numerics.hpp"
#include "dshell/quadrature.hpp"
#include "dshell/tolerances.hpp"

namespace dshell {

struct BesselPair {
  cplx k0;
  cplx k1;
  // |w| > 30 (result dominated by the e^{-w} underflow scale) or the
  // trapezoid sums did not settle.
  bool accuracy_warning = false;
};

struct BesselValue {
  cplx value;
  bool accuracy_warning = false;
};

namespace detail {

// Decay exponent beyond which the scaled integrand is below e^{-50}.
inline constexpr double kBesselTailExponent = 50.0;

// K_0 and K_1 integrands share every node; accumulate them together.
struct KPair {
  cplx k0, k1;
  KPair& operator+=(const KPair& o) { k0 += o.k0; k1 += o.k1; return *this; }
  friend KPair operator*(double h, KPair a) { a.k0 *= h; a.k1 *= h; return a; }
  friend KPair operator+(KPair a, const KPair& b) { return a += b; }
  friend KPair operator-(const KPair& a, const KPair& b) { return {a.k0 - b.k0, a.k1 - b.k1}; }
  friend double abs(const KPair& a) { return std::max(std::abs(a.k0), std::abs(a.k1)); }
};

template <class W>
BesselPair bessel_k01_impl(W w, double re_w) {
  auto tail = [re_w](double t) {
    const double s = std::sinh(0.5 * t);
    return 2.0 * re_w * s * s - t > kBesselTailExponent;
  };
  auto integrand = [w](double t) {
    const double s = std::sinh(0.5 * t);
    const cplx e(std::exp(-2.0 * w * s * s));
    return KPair{e, e * std::cosh(t)};
  };
  const auto res = quad::trapezoid_half_line(integrand, tail, 0.5, tol::kBesselQuadRel);
  const cplx scale = std::exp(-cplx(w));
  return {scale * res.value.k0, scale * res.value.k1, !res.converged};
}

}  // namespace detail

/// K_0(w) and K_1(w) together (one quadrature pass).
inline BesselPair bessel_k01(cplx w) {
  if (!(w.real() > 0.0)) {
    throw DomainError("bessel_k: requires Re w > 0, got w = (" + std::to_string(w.real()) + ", " +
                      std::to_string(w.imag()) + ")");
  }
  BesselPair out = w.imag() == 0.0 ? detail::bessel_k01_impl(w.real(), w.real())
                                   : detail::bessel_k01_impl(w, w.real());
  if (std::abs(w) > tol::kBesselWarnAbs) out.accuracy_warning = true;
  return out;
}

inline BesselValue bessel_k_checked(int order, cplx w) {
  if (order != 0 && order != 1) {
    throw PreconditionError("bessel_k: order must be 0 or 1, got " + std::to_string(order));
  }
  const BesselPair pair = bessel_k01(w);
  return {order == 0 ? pair.k0 : pair.k1, pair.accuracy_warning};
}

/// K_order(w) for order in {0, 1}, Re w > 0.
inline cplx bessel_k(int order, cplx w) { return bessel_k_checked(order, w).value; }

}  // namespace dshell
