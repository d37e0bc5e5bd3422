#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <type_traits>

#include "dshell/errors.hpp"

namespace dshell {

using cplx = std::complex<double>;

inline constexpr cplx kI{0.0, 1.0};
inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr double kEulerGamma = 0.577215664901532860606512090082402431;

/// Dense 2x2 matrix, row-major. Holds Pauli matrices, Fourier symbols and
/// Green's kernel values.
template <class T>
struct Mat2 {
  T a11{}, a12{}, a21{}, a22{};

  static constexpr Mat2 identity() { return {T(1), T(0), T(0), T(1)}; }
  static constexpr Mat2 zero() { return {}; }
  static constexpr Mat2 diag(T d1, T d2) { return {d1, T(0), T(0), d2}; }

  constexpr T& operator()(int r, int c) {
    return r == 0 ? (c == 0 ? a11 : a12) : (c == 0 ? a21 : a22);
  }
  constexpr const T& operator()(int r, int c) const {
    return r == 0 ? (c == 0 ? a11 : a12) : (c == 0 ? a21 : a22);
  }

  constexpr T det() const { return a11 * a22 - a12 * a21; }
  constexpr T trace() const { return a11 + a22; }
  constexpr Mat2 transpose() const { return {a11, a21, a12, a22}; }

  Mat2& operator+=(const Mat2& o) {
    a11 += o.a11; a12 += o.a12; a21 += o.a21; a22 += o.a22;
    return *this;
  }
  Mat2& operator-=(const Mat2& o) {
    a11 -= o.a11; a12 -= o.a12; a21 -= o.a21; a22 -= o.a22;
    return *this;
  }
  Mat2& operator*=(T s) {
    a11 *= s; a12 *= s; a21 *= s; a22 *= s;
    return *this;
  }

  friend Mat2 operator+(Mat2 a, const Mat2& b) { return a += b; }
  friend Mat2 operator-(Mat2 a, const Mat2& b) { return a -= b; }
  friend Mat2 operator-(const Mat2& a) { return {-a.a11, -a.a12, -a.a21, -a.a22}; }
  friend Mat2 operator*(Mat2 a, T s) { return a *= s; }
  friend Mat2 operator*(T s, Mat2 a) { return a *= s; }
  friend Mat2 operator*(double s, Mat2 a) requires(!std::is_same_v<T, double>) { return a *= T(s); }
  friend Mat2 operator*(Mat2 a, double s) requires(!std::is_same_v<T, double>) { return a *= T(s); }
  friend Mat2 operator*(const Mat2& a, const Mat2& b) {
    return {a.a11 * b.a11 + a.a12 * b.a21, a.a11 * b.a12 + a.a12 * b.a22,
            a.a21 * b.a11 + a.a22 * b.a21, a.a21 * b.a12 + a.a22 * b.a22};
  }
  friend std::array<T, 2> operator*(const Mat2& a, const std::array<T, 2>& v) {
    return {a.a11 * v[0] + a.a12 * v[1], a.a21 * v[0] + a.a22 * v[1]};
  }
  friend bool operator==(const Mat2&, const Mat2&) = default;

  /// Throws SingularityError when the determinant is exactly zero.
  Mat2 inverse() const {
    const T d = det();
    if (d == T(0)) throw SingularityError("Mat2::inverse: singular matrix");
    const T inv = T(1) / d;
    return {a22 * inv, -a12 * inv, -a21 * inv, a11 * inv};
  }
};

using Mat2C = Mat2<cplx>;
using Mat2R = Mat2<double>;
using Spinor = std::array<cplx, 2>;

inline Mat2C conj(const Mat2C& a) {
  return {std::conj(a.a11), std::conj(a.a12), std::conj(a.a21), std::conj(a.a22)};
}
inline Mat2C adjoint(const Mat2C& a) { return conj(a).transpose(); }

// Entrywise real / imaginary parts, returned as complex matrices with zero
// imaginary component so they compose with the rest of the algebra.
inline Mat2C real_part(const Mat2C& a) {
  return {a.a11.real(), a.a12.real(), a.a21.real(), a.a22.real()};
}
inline Mat2C imag_part(const Mat2C& a) {
  return {a.a11.imag(), a.a12.imag(), a.a21.imag(), a.a22.imag()};
}

inline double max_abs(const Mat2C& a) {
  return std::max({std::abs(a.a11), std::abs(a.a12), std::abs(a.a21), std::abs(a.a22)});
}
// Magnitude used by the adaptive quadrature convergence tests.
inline double abs(const Mat2C& a) { return max_abs(a); }

inline double frobenius(const Mat2C& a) {
  return std::sqrt(std::norm(a.a11) + std::norm(a.a12) + std::norm(a.a21) + std::norm(a.a22));
}

/// Spectral (operator 2-) norm, closed form for 2x2.
inline double op_norm(const Mat2C& a) {
  const double f2 = std::norm(a.a11) + std::norm(a.a12) + std::norm(a.a21) + std::norm(a.a22);
  const double d = std::abs(a.det());
  const double disc = std::max(0.0, f2 * f2 - 4.0 * d * d);
  return std::sqrt(0.5 * (f2 + std::sqrt(disc)));
}

inline double norm(const Spinor& v) { return std::sqrt(std::norm(v[0]) + std::norm(v[1])); }

/// Square root holomorphic on C \ (-inf, 0] with Re > 0.
///
/// Points on the closed negative real axis (including 0) are rejected instead
/// of being assigned a one-sided limit.
inline cplx branch_sqrt(cplx w) {
  if (w.imag() == 0.0 && !(w.real() > 0.0)) {
    throw DomainError(
        "branch_sqrt: argument on the cut (-inf, 0]; the branch is holomorphic on "
        "C \\ (-inf, 0] with Re sqrt(w) > 0");
  }
  if (w.imag() == 0.0) return {std::sqrt(w.real()), 0.0};
  return std::sqrt(w);
}

/// Pauli matrix sigma_k; sigma_0 is the identity.
inline Mat2C pauli(int k) {
  switch (k) {
    case 0: return {1.0, 0.0, 0.0, 1.0};
    case 1: return {0.0, 1.0, 1.0, 0.0};
    case 2: return {0.0, -kI, kI, 0.0};
    case 3: return {1.0, 0.0, 0.0, -1.0};
    default:
      throw std::out_of_range("pauli: index must be in {0,1,2,3}, got " + std::to_string(k));
  }
}

/// sigma . x = sigma_1 x_1 + sigma_2 x_2
inline Mat2C sigma_dot(double x1, double x2) {
  return {0.0, cplx(x1, -x2), cplx(x1, x2), 0.0};
}

inline double relative_error(cplx got, cplx want) {
  const double scale = std::abs(want);
  return scale == 0.0 ? std::abs(got) : std::abs(got - want) / scale;
}

}  // namespace dshell
