#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "dshell/errors.hpp"

namespace dshell {

/// count equally spaced nodes on [lo, hi], endpoints included.
inline std::vector<double> linear_grid(double lo, double hi, std::size_t count) {
  if (count < 2 || !(lo < hi)) {
    throw PreconditionError("linear_grid: need count >= 2 and lo < hi");
  }
  std::vector<double> g(count);
  const double step = (hi - lo) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) g[i] = lo + step * static_cast<double>(i);
  g.back() = hi;
  return g;
}

/// Symmetric momentum grid on [-p_max, p_max]: a uniform core on
/// [-p_max/10, p_max/10] holding about half the nodes, and geometric tails
/// out to +-p_max. The default (100, 4001) gives spacing 0.01 on [-10, 10].
inline std::vector<double> hybrid_grid(double p_max = 100.0, std::size_t count = 4001) {
  if (!(p_max > 0.0) || count < 5) {
    throw PreconditionError("hybrid_grid: need p_max > 0 and count >= 5");
  }
  const std::size_t n_tail = (count - 1) / 4;
  const std::size_t n_core = count - 2 * n_tail;
  const double core = 0.1 * p_max;
  std::vector<double> g;
  g.reserve(count);
  const double ratio = std::pow(p_max / core, 1.0 / static_cast<double>(n_tail));
  for (std::size_t k = n_tail; k >= 1; --k) g.push_back(-core * std::pow(ratio, static_cast<double>(k)));
  const auto mid = linear_grid(-core, core, n_core);
  g.insert(g.end(), mid.begin(), mid.end());
  for (std::size_t k = 1; k <= n_tail; ++k) g.push_back(core * std::pow(ratio, static_cast<double>(k)));
  if (n_tail > 0) {
    g.front() = -p_max;
    g.back() = p_max;
  }
  return g;
}

}  // namespace dshell
