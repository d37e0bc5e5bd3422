#pragma once

// Free-resolvent kernel of the 2D Dirac operator A_0 = -i sigma.grad + m sigma_3:
//
//   G_z(x) = (i k / 2pi) K_1(k|x|) (sigma.x)/|x| + (1/2pi) K_0(k|x|) (z + m sigma_3),
//   k = sqrt(m^2 - z^2),
//
// and its numerical checks: the pointwise PDE residual, the K_0 Fourier pair
// along the line, and a quadrature for (A_0 - z)^{-1} f with compactly
// supported f.

#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "dshell/bessel.hpp"
#include "dshell/errors.hpp"
#include "dshell/numerics.hpp"
#include "dshell/quadrature.hpp"

namespace dshell {

using Point2 = std::array<double, 2>;

/// k = sqrt(m^2 - z^2); throws DomainError for z in sigma(A_0).
inline cplx green_decay(double m, cplx z) {
  const cplx w = cplx(m * m) - z * z;
  if (w.imag() == 0.0 && !(w.real() > 0.0)) {
    throw DomainError("green_kernel: z lies in the spectrum (-inf,-|m|] u [|m|,inf) of the free operator");
  }
  return branch_sqrt(w);
}

inline Mat2C green_kernel(double m, cplx z, Point2 x) {
  const double r = std::hypot(x[0], x[1]);
  if (r == 0.0) throw DomainError("green_kernel: x = 0 is the kernel singularity");
  const cplx k = green_decay(m, z);
  const BesselPair kk = bessel_k01(k * r);
  const Mat2C odd = sigma_dot(x[0] / r, x[1] / r) * (kI * k * kk.k1 / (2.0 * kPi));
  const Mat2C even = (Mat2C::identity() * z + pauli(3) * cplx(m)) * (kk.k0 / (2.0 * kPi));
  return odd + even;
}

/// (-i sigma.grad + m sigma_3 - z) applied to a matrix-valued function U by
/// second-order central differences with step h (each column independently).
template <class U>
Mat2C apply_free_dirac(U&& u, double m, cplx z, Point2 x, double h) {
  const Mat2C d1 = (u(Point2{x[0] + h, x[1]}) - u(Point2{x[0] - h, x[1]})) * cplx(0.5 / h);
  const Mat2C d2 = (u(Point2{x[0], x[1] + h}) - u(Point2{x[0], x[1] - h})) * cplx(0.5 / h);
  const Mat2C centre = u(x);
  return (pauli(1) * d1 + pauli(2) * d2) * (-kI) + (pauli(3) * cplx(m) - Mat2C::identity() * z) * centre;
}

/// Finite-difference residual of the free Dirac equation for G_z at x != 0.
inline Mat2C pde_residual(double m, cplx z, Point2 x, double h) {
  const double r = std::hypot(x[0], x[1]);
  if (r == 0.0) throw DomainError("pde_residual: x = 0 is the kernel singularity");
  if (!(h > 0.0) || !(h < r / 4.0)) {
    throw PreconditionError("pde_residual: step error, need 0 < h < |x|/4");
  }
  green_decay(m, z);
  return apply_free_dirac([&](Point2 y) { return green_kernel(m, z, y); }, m, z, x, h);
}

/// Unitary Fourier transform of x -> K_0(kappa |x|) on the line,
///   sqrt(2/pi) int_0^inf K_0(kappa x) cos(p x) dx,
/// by adaptive tanh-sinh on fixed panels. K_0 values are memoised per node so
/// sweeping p reuses the expensive evaluations.
class K0FourierTransform {
 public:
  explicit K0FourierTransform(double kappa) : kappa_(kappa) {
    if (!(kappa > 0.0)) throw PreconditionError("K0FourierTransform: kappa must be positive");
    // K_0(t) < 1e-17 for t > 40.
    x_max_ = 40.0 / kappa;
  }

  double operator()(double p) {
    auto integrand = [&](double x) { return k0(x) * std::cos(p * x); };
    double total = 0.0;
    const int panels = static_cast<int>(std::ceil(x_max_ / kPanel));
    for (int i = 0; i < panels; ++i) {
      const double a = i * kPanel;
      total += quad::tanh_sinh(integrand, a, a + kPanel, 1e-12, 1e-16, 6).value;
    }
    return std::sqrt(2.0 / kPi) * total;
  }

  /// sqrt(pi/2) / sqrt(p^2 + kappa^2)
  double closed_form(double p) const { return std::sqrt(0.5 * kPi) / std::hypot(p, kappa_); }

 private:
  static constexpr double kPanel = 0.25;

  double k0(double x) {
    const auto it = cache_.find(x);
    if (it != cache_.end()) return it->second;
    const double v = bessel_k01(cplx(kappa_ * x)).k0.real();
    cache_.emplace(x, v);
    return v;
  }

  double kappa_;
  double x_max_;
  std::unordered_map<double, double> cache_;
};

/// Max relative error of the K_0 Fourier pair over the grid.
inline double fourier_pair_check(double kappa, std::span<const double> p_grid) {
  K0FourierTransform ft(kappa);
  double worst = 0.0;
  for (const double p : p_grid) {
    const double want = ft.closed_form(p);
    worst = std::max(worst, std::abs(ft(p) - want) / want);
  }
  return worst;
}

/// A 2-spinor field sampled at the centres of an nx x ny grid of square
/// cells of side h; cell (i, j) is centred at (x0 + i h, y0 + j h). The field
/// is taken to vanish outside the grid.
struct SpinorField {
  double x0 = 0.0, y0 = 0.0, h = 1.0;
  std::size_t nx = 0, ny = 0;
  std::vector<Spinor> values;  // index j * nx + i

  Point2 centre(std::size_t i, std::size_t j) const {
    return {x0 + static_cast<double>(i) * h, y0 + static_cast<double>(j) * h};
  }
  const Spinor& at(std::size_t i, std::size_t j) const { return values[j * nx + i]; }

  template <class F>
  static SpinorField sample(F&& f, double x0, double y0, double h, std::size_t nx, std::size_t ny) {
    SpinorField out{x0, y0, h, nx, ny, {}};
    out.values.reserve(nx * ny);
    for (std::size_t j = 0; j < ny; ++j)
      for (std::size_t i = 0; i < nx; ++i) out.values.push_back(f(out.centre(i, j)));
    return out;
  }
};

struct ResolventOutput {
  std::vector<Spinor> values;
  // Evaluation point within one cell of the boundary of the sampled support.
  std::vector<bool> accuracy_warning;
};

namespace detail {

// int over the axis-aligned square of side h centred at c of G_z(x - y) dy,
// for x inside or on the square: fan of four triangles with apex x, polar
// coordinates about the apex (the r dr measure absorbs the singularity).
inline Mat2C cell_integral_polar(double m, cplx z, Point2 x, Point2 c, double h) {
  static const quad::GaussLegendre angular(24);
  const double half = 0.5 * h;
  const std::array<Point2, 4> corners{Point2{c[0] - half, c[1] - half}, Point2{c[0] + half, c[1] - half},
                                      Point2{c[0] + half, c[1] + half}, Point2{c[0] - half, c[1] + half}};
  Mat2C total = Mat2C::zero();
  for (int e = 0; e < 4; ++e) {
    const Point2 a{corners[e][0] - x[0], corners[e][1] - x[1]};
    const Point2 b{corners[(e + 1) % 4][0] - x[0], corners[(e + 1) % 4][1] - x[1]};
    const double cross = a[0] * b[1] - a[1] * b[0];
    if (std::abs(cross) <= 1e-14 * h * h) continue;  // apex on this edge
    const double ta = std::atan2(a[1], a[0]);
    double tb = std::atan2(b[1], b[0]);
    while (tb - ta > kPi) tb -= 2.0 * kPi;
    while (tb - ta < -kPi) tb += 2.0 * kPi;
    // Edge line: n . y = cross / |b - a| with n the unit normal.
    const Point2 edge{b[0] - a[0], b[1] - a[1]};
    const double len = std::hypot(edge[0], edge[1]);
    const Point2 normal{edge[1] / len, -edge[0] / len};
    const double dist = (a[0] * normal[0] + a[1] * normal[1]);
    total += angular.integrate(
        [&](double theta) {
          const Point2 u{std::cos(theta), std::sin(theta)};
          const double reach = dist / (u[0] * normal[0] + u[1] * normal[1]);
          auto radial = [&](double r) {
            // y - x = r u, so the kernel argument is x - y = -r u.
            return green_kernel(m, z, Point2{-r * u[0], -r * u[1]}) * cplx(r);
          };
          return quad::tanh_sinh(radial, 0.0, reach, 1e-10, 0.0, 3).value;
        },
        ta, tb);
  }
  return total;
}

// Tensor Gauss-Legendre over the square, split into s x s sub-squares.
inline Mat2C cell_integral_tensor(double m, cplx z, Point2 x, Point2 c, double h, int split) {
  static const quad::GaussLegendre rule(6);
  const double sub = h / split;
  Mat2C total = Mat2C::zero();
  for (int a = 0; a < split; ++a) {
    for (int b = 0; b < split; ++b) {
      const double cx = c[0] - 0.5 * h + (a + 0.5) * sub;
      const double cy = c[1] - 0.5 * h + (b + 0.5) * sub;
      for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
          const Point2 y{cx + 0.5 * sub * rule.nodes[i], cy + 0.5 * sub * rule.nodes[j]};
          const double w = 0.25 * sub * sub * rule.weights[i] * rule.weights[j];
          total += green_kernel(m, z, Point2{x[0] - y[0], x[1] - y[1]}) * cplx(w);
        }
      }
    }
  }
  return total;
}

inline Spinor add_scaled(const Spinor& acc, const Mat2C& w, const Spinor& f) {
  const Spinor g = w * f;
  return {acc[0] + g[0], acc[1] + g[1]};
}

}  // namespace detail

/// (A_0 - z)^{-1} f at the evaluation points, treating f as constant on each
/// cell: cells far from x use the midpoint rule, cells within `near` cells
/// use tensor Gauss-Legendre, and the cell containing x is integrated in
/// polar coordinates about x. Most accurate when x is a cell centre.
inline ResolventOutput resolvent_apply(double m, cplx z, const SpinorField& f,
                                       std::span<const Point2> x_eval) {
  green_decay(m, z);
  if (f.values.size() != f.nx * f.ny || f.nx == 0 || f.ny == 0 || !(f.h > 0.0)) {
    throw PreconditionError("resolvent_apply: malformed SpinorField");
  }
  // Thresholds sit between integer cell rings so that rounding in cheb never
  // flips the rule for a point at a cell centre.
  constexpr double kPolar = 0.5 + 1e-9, kSplit = 1.5, kNear = 4.5;
  const double h = f.h;
  const double xmin = f.x0 - 0.5 * h, xmax = f.x0 + (static_cast<double>(f.nx) - 0.5) * h;
  const double ymin = f.y0 - 0.5 * h, ymax = f.y0 + (static_cast<double>(f.ny) - 0.5) * h;
  ResolventOutput out;
  out.values.reserve(x_eval.size());
  for (const Point2& x : x_eval) {
    Spinor acc{};
    for (std::size_t j = 0; j < f.ny; ++j) {
      for (std::size_t i = 0; i < f.nx; ++i) {
        const Spinor& fv = f.at(i, j);
        if (fv[0] == 0.0 && fv[1] == 0.0) continue;
        const Point2 c = f.centre(i, j);
        const Point2 d{x[0] - c[0], x[1] - c[1]};
        const double cheb = std::max(std::abs(d[0]), std::abs(d[1])) / h;
        Mat2C w;
        if (cheb <= kPolar) {
          w = detail::cell_integral_polar(m, z, x, c, h);
        } else if (cheb <= kSplit) {
          w = detail::cell_integral_tensor(m, z, x, c, h, 4);
        } else if (cheb <= kNear) {
          w = detail::cell_integral_tensor(m, z, x, c, h, 1);
        } else {
          w = green_kernel(m, z, d) * cplx(h * h);
        }
        acc = detail::add_scaled(acc, w, fv);
      }
    }
    out.values.push_back(acc);
    const double gap = std::min({std::abs(x[0] - xmin), std::abs(x[0] - xmax), std::abs(x[1] - ymin),
                                 std::abs(x[1] - ymax)});
    out.accuracy_warning.push_back(gap < h);
  }
  return out;
}

}  // namespace dshell
