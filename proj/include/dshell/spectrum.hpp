#pragma once

// Spectrum of the shell operator as a set: two closed rays (or the full line
// when m = 0), an inner band edge attached to one side of the gap for
// non-critical couplings, and the infinitely degenerate eigenvalue 0 at the
// critical couplings eta = +-2.

#include <cmath>
#include <limits>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "dshell/errors.hpp"
#include "dshell/params.hpp"

namespace dshell {

enum class ComponentKind { RayLeft, RayRight, FullLine, Point };
enum class SpectralType { Continuous, Eigenvalue };
enum class PointClass { Resolvent, Continuous, EigenvalueInfinite };

struct Multiplicity {
  bool infinite = false;
  std::size_t count = 0;  // meaningful when !infinite
  friend bool operator==(const Multiplicity&, const Multiplicity&) = default;
};

/// One connected piece of the spectrum. Rays are closed: RayLeft is
/// (-inf, hi], RayRight is [lo, inf), Point is {lo} (lo == hi).
struct SpectralComponent {
  ComponentKind kind = ComponentKind::FullLine;
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  bool closed = true;
  SpectralType type = SpectralType::Continuous;
  std::optional<Multiplicity> multiplicity;

  bool contains(double z) const { return lo <= z && z <= hi; }
  friend bool operator==(const SpectralComponent&, const SpectralComponent&) = default;

  static SpectralComponent ray_left(double endpoint) {
    return {ComponentKind::RayLeft, -std::numeric_limits<double>::infinity(), endpoint, true,
            SpectralType::Continuous, std::nullopt};
  }
  static SpectralComponent ray_right(double endpoint) {
    return {ComponentKind::RayRight, endpoint, std::numeric_limits<double>::infinity(), true,
            SpectralType::Continuous, std::nullopt};
  }
  static SpectralComponent full_line() { return {}; }
  static SpectralComponent infinite_eigenvalue(double value) {
    return {ComponentKind::Point, value, value, true, SpectralType::Eigenvalue,
            Multiplicity{true, 0}};
  }
};

struct SpectrumDescription {
  ShellParams params;
  std::vector<SpectralComponent> components;  // disjoint, sorted by lo

  bool same_set(const SpectrumDescription& other) const { return components == other.components; }
};

inline std::string_view to_string(ComponentKind k) {
  switch (k) {
    case ComponentKind::RayLeft: return "ray-left";
    case ComponentKind::RayRight: return "ray-right";
    case ComponentKind::FullLine: return "full-line";
    case ComponentKind::Point: return "point";
  }
  return "?";
}

inline std::string_view to_string(SpectralType t) {
  return t == SpectralType::Continuous ? "continuous" : "eigenvalue";
}

inline std::string_view to_string(PointClass c) {
  switch (c) {
    case PointClass::Resolvent: return "resolvent";
    case PointClass::Continuous: return "continuous";
    case PointClass::EigenvalueInfinite: return "eigenvalue-infinite";
  }
  return "?";
}

namespace detail {

inline void require_noncritical(const ShellParams& params, const char* what) {
  if (params.free() || params.critical()) {
    throw PreconditionError(std::string(what) + ": requires eta not in {0, 2, -2}");
  }
}

/// |eta^2 - 4| / (eta^2 + 4), from the exact fraction when available so the
/// value is identical for eta and -4/eta.
inline double edge_ratio(const ShellParams& params) {
  if (const auto& r = params.eta_exact()) {
    const __int128 n = r->num, d = r->den;
    const __int128 a = n * n - 4 * d * d;
    const __int128 b = n * n + 4 * d * d;
    if (const auto q = Ratio::make(a < 0 ? -a : a, b)) return q->value();
  }
  const double e2 = params.eta() * params.eta();
  return std::abs(e2 - 4.0) / (e2 + 4.0);
}

}  // namespace detail

/// Inner band edge |m| |eta^2 - 4| / (eta^2 + 4); |m| at eta = 0.
inline double band_edge(const ShellParams& params) {
  if (params.free()) return params.abs_m();
  if (params.critical()) return 0.0;
  return params.abs_m() * detail::edge_ratio(params);
}

/// z eta / (eta^2 - 4) > 0.
inline bool sign_condition(const ShellParams& params, double z) {
  detail::require_noncritical(params, "sign_condition");
  const double eta = params.eta();
  return z * eta / (eta * eta - 4.0) > 0.0;
}

/// In-gap branch of the dispersion curve det theta_z(p) = 0:
///   z(p) = s |eta^2-4| / (eta^2+4) sqrt(p^2 + m^2),  s = sign(eta (eta^2-4)).
inline double dispersion_z(const ShellParams& params, double p) {
  detail::require_noncritical(params, "dispersion_z");
  const double m = params.m();
  return params.band_side_sign() * detail::edge_ratio(params) * std::sqrt(p * p + m * m);
}

/// Momenta (-p, +p) on the dispersion curve at energy z, or nullopt when z
/// lies strictly inside the inner gap.
inline std::optional<std::pair<double, double>> dispersion_p(const ShellParams& params, double z) {
  detail::require_noncritical(params, "dispersion_p");
  if (!sign_condition(params, z)) {
    throw PreconditionError("dispersion_p: requires z eta / (eta^2 - 4) > 0");
  }
  const double scaled = std::abs(z) / detail::edge_ratio(params);
  const double am = params.abs_m();
  double radicand = (scaled - am) * (scaled + am);
  // z at the edge reproduces 0 only up to rounding of the ratio.
  if (std::abs(radicand) <= 8.0 * std::numeric_limits<double>::epsilon() * scaled * scaled) {
    radicand = 0.0;
  }
  if (radicand < 0.0) return std::nullopt;
  const double r = std::sqrt(radicand);
  return std::make_pair(-r, r);
}

/// sigma(A_eta) with spectral types.
inline SpectrumDescription full_spectrum(const ShellParams& params) {
  SpectrumDescription out{params, {}};
  const double am = params.abs_m();
  if (am == 0.0) {
    out.components.push_back(SpectralComponent::full_line());
    return out;
  }
  if (params.free()) {
    out.components = {SpectralComponent::ray_left(-am), SpectralComponent::ray_right(am)};
    return out;
  }
  if (params.critical()) {
    out.components = {SpectralComponent::ray_left(-am), SpectralComponent::infinite_eigenvalue(0.0),
                      SpectralComponent::ray_right(am)};
    return out;
  }
  const double edge = band_edge(params);
  if (params.band_side_sign() < 0) {
    out.components = {SpectralComponent::ray_left(-edge), SpectralComponent::ray_right(am)};
  } else {
    out.components = {SpectralComponent::ray_left(-am), SpectralComponent::ray_right(edge)};
  }
  return out;
}

/// Parameters with eta' = -4/eta and the same mass; exact when eta is known
/// as a fraction.
inline ShellParams symmetry_partner(const ShellParams& params) {
  if (params.free()) throw PreconditionError("symmetry_partner: undefined for eta = 0");
  if (const auto& r = params.eta_exact()) {
    if (const auto q = Ratio::make(-4 * static_cast<__int128>(r->den), r->num)) {
      return ShellParams::from_ratio(*q, params.m());
    }
  }
  return ShellParams::make(-4.0 / params.eta(), params.m());
}

inline PointClass classify_point(const ShellParams& params, double z) {
  for (const auto& c : full_spectrum(params).components) {
    if (!c.contains(z)) continue;
    return c.type == SpectralType::Eigenvalue ? PointClass::EigenvalueInfinite : PointClass::Continuous;
  }
  return PointClass::Resolvent;
}

}  // namespace dshell
