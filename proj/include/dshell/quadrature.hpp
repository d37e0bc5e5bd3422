#pragma once

// Double-exponential quadrature.
//
//  * tanh_sinh: adaptive tanh-sinh rule on a finite interval; tolerates
//    integrable endpoint singularities (log, 1/sqrt).
//  * trapezoid_half_line: step-halving trapezoid rule for integrands on
//    [0, inf) that are even, analytic in a strip and decay double
//    exponentially (the integral representation of K_nu is the customer).
//  * gauss_legendre: fixed n-point rule, used for tensor-product cell
//    integrals of smooth integrands.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <type_traits>
#include <vector>

#include "dshell/numerics.hpp"

namespace dshell::quad {

template <class T>
struct Result {
  T value{};
  double error = 0.0;  // |last refinement difference|, an a-posteriori estimate
  bool converged = false;
  std::size_t evaluations = 0;
};

namespace detail {

template <class T>
double magnitude(const T& v) {
  using std::abs;
  return static_cast<double>(abs(v));
}

struct TanhSinhNode {
  double offset;      // position in (-1, 1) relative to the interval centre
  double complement;  // 1 - |offset|, kept separately to avoid cancellation
  double weight;
};

inline constexpr int kMaxLevel = 7;
inline constexpr double kTMax = 4.0;  // complement ~1e-37: captures 1/sqrt tails

// levels[k] holds only the nodes new at level k (t = j h, j odd for k > 0).
inline const std::vector<std::vector<TanhSinhNode>>& tanh_sinh_table() {
  static const auto table = [] {
    std::vector<std::vector<TanhSinhNode>> levels(kMaxLevel + 1);
    for (int k = 0; k <= kMaxLevel; ++k) {
      const double h = std::ldexp(1.0, -k);
      const int jmax = static_cast<int>(kTMax / h);
      for (int j = 0; j <= jmax; ++j) {
        if (k > 0 && j % 2 == 0) continue;
        const double t = j * h;
        const double s = 0.5 * kPi * std::sinh(t);
        const double ch = std::cosh(s);
        const double u = std::tanh(s);
        const double comp = 1.0 / (std::exp(s) * ch);  // 1 - tanh(s)
        const double w = 0.5 * kPi * std::cosh(t) / (ch * ch);
        levels[k].push_back({u, comp, w});
      }
    }
    return levels;
  }();
  return table;
}

template <class F, class T>
Result<T> tanh_sinh_single(F& f, double a, double b, double rel_tol, double abs_tol) {
  const auto& table = tanh_sinh_table();
  const double c = 0.5 * (a + b);
  const double r = 0.5 * (b - a);
  Result<T> res;
  T sum{};
  T previous{};
  for (int k = 0; k <= kMaxLevel; ++k) {
    for (const auto& node : table[k]) {
      if (node.offset == 0.0) {
        sum += node.weight * f(c);
        ++res.evaluations;
        continue;
      }
      const double d = r * node.complement;  // distance from the nearer endpoint
      // skip nodes that round onto an endpoint
      if (a + d != a) {
        sum += node.weight * f(a + d);
        ++res.evaluations;
      }
      if (b - d != b) {
        sum += node.weight * f(b - d);
        ++res.evaluations;
      }
    }
    const double h = std::ldexp(1.0, -k);
    const T estimate = r * h * sum;
    if (k > 0) {
      res.error = magnitude(estimate - previous);
      res.value = estimate;
      if (k >= 3 && res.error <= std::max(rel_tol * magnitude(estimate), abs_tol)) {
        res.converged = true;
        return res;
      }
    }
    previous = estimate;
  }
  res.value = previous;
  return res;
}

template <class F, class T>
Result<T> tanh_sinh_recursive(F& f, double a, double b, double rel_tol, double abs_tol, int depth) {
  Result<T> whole = tanh_sinh_single<F, T>(f, a, b, rel_tol, abs_tol);
  if (whole.converged || depth == 0) return whole;
  const double mid = 0.5 * (a + b);
  Result<T> left = tanh_sinh_recursive<F, T>(f, a, mid, rel_tol, 0.5 * abs_tol, depth - 1);
  Result<T> right = tanh_sinh_recursive<F, T>(f, mid, b, rel_tol, 0.5 * abs_tol, depth - 1);
  Result<T> out;
  out.value = left.value + right.value;
  out.error = left.error + right.error;
  out.converged = left.converged && right.converged;
  out.evaluations = whole.evaluations + left.evaluations + right.evaluations;
  return out;
}

}  // namespace detail

/// Adaptive tanh-sinh quadrature of f over [a, b]. The integrand is never
/// evaluated exactly at an endpoint. Non-converged panels are bisected up to
/// `max_depth` times.
template <class F>
auto tanh_sinh(F&& f, double a, double b, double rel_tol = 1e-12, double abs_tol = 0.0,
               int max_depth = 10) {
  using T = std::decay_t<std::invoke_result_t<F&, double>>;
  if (a == b) return Result<T>{T{}, 0.0, true, 0};
  if (a > b) {
    auto r = tanh_sinh(f, b, a, rel_tol, abs_tol, max_depth);
    r.value = T{} - r.value;
    return r;
  }
  return detail::tanh_sinh_recursive<F, T>(f, a, b, rel_tol, abs_tol, max_depth);
}

/// Trapezoid rule for an even integrand on [0, inf):
///   int_0^inf f(t) dt  ~  h (f(0)/2 + sum_{j>=1} f(j h)),
/// halving h until two successive estimates agree to rel_tol. `tail(t)`
/// returns true once every remaining term is negligible; summation stops at
/// the first such node.
template <class F, class Tail>
auto trapezoid_half_line(F&& f, Tail&& tail, double h0 = 0.5, double rel_tol = 1e-15,
                         int max_halvings = 9) {
  using T = std::decay_t<std::invoke_result_t<F&, double>>;
  Result<T> res;
  auto sum_nodes = [&](double h, int start, int stride) {
    T s{};
    for (int j = start;; j += stride) {
      const double t = j * h;
      if (tail(t)) break;
      s += f(t);
      ++res.evaluations;
    }
    return s;
  };
  double h = h0;
  T raw = 0.5 * f(0.0) + sum_nodes(h, 1, 1);  // sum without the factor h
  ++res.evaluations;
  T estimate = h * raw;
  for (int k = 0; k < max_halvings; ++k) {
    h *= 0.5;
    raw += sum_nodes(h, 1, 2);
    const T refined = h * raw;
    res.error = detail::magnitude(refined - estimate);
    estimate = refined;
    if (k >= 1 && res.error <= rel_tol * detail::magnitude(refined)) {
      res.converged = true;
      break;
    }
  }
  res.value = estimate;
  return res;
}

/// n-point Gauss-Legendre nodes and weights on [-1, 1].
struct GaussLegendre {
  std::vector<double> nodes;
  std::vector<double> weights;

  explicit GaussLegendre(int n) : nodes(n), weights(n) {
    for (int i = 0; i < n; ++i) {
      double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
      double dp = 0.0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
          const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = pk;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        const double dx = p1 / dp;
        x -= dx;
        if (std::abs(dx) < 1e-16) break;
      }
      nodes[i] = x;
      weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
  }

  template <class F>
  auto integrate(F&& f, double a, double b) const {
    using T = std::decay_t<std::invoke_result_t<F&, double>>;
    const double c = 0.5 * (a + b), r = 0.5 * (b - a);
    T s{};
    for (std::size_t i = 0; i < nodes.size(); ++i) s += weights[i] * f(c + r * nodes[i]);
    return r * s;
  }
};

}  // namespace dshell::quad
