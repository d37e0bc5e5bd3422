#pragma once

// Property suites behind `dshell verify`. Each property reports a measured
// value, a threshold and a pass flag; properties that do not apply to the
// given parameters (eta = 0 for symbol checks, non-critical eta for the
// kernel scan, ...) are reported as not-applicable and do not fail the run.

#include <algorithm>
#include <array>
#include <cmath>
#include <charconv>
#include <limits>
#include <map>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "dshell/bessel.hpp"
#include "dshell/errors.hpp"
#include "dshell/fiber.hpp"
#include "dshell/greens.hpp"
#include "dshell/grid.hpp"
#include "dshell/numerics.hpp"
#include "dshell/params.hpp"
#include "dshell/serialize.hpp"
#include "dshell/spectrum.hpp"
#include "dshell/symbol.hpp"
#include "dshell/tolerances.hpp"

namespace dshell {

enum class Status { Pass, Fail, NotApplicable };
enum class Compare { AtMost, LessThan, AtLeast };

inline std::string_view to_string(Status s) {
  switch (s) {
    case Status::Pass: return "pass";
    case Status::Fail: return "fail";
    case Status::NotApplicable: return "not-applicable";
  }
  return "?";
}

inline std::string_view to_string(Compare c) {
  switch (c) {
    case Compare::AtMost: return "<=";
    case Compare::LessThan: return "<";
    case Compare::AtLeast: return ">=";
  }
  return "?";
}

struct Property {
  std::string name;  // "<suite>.<property>", also the --tol-override key
  double measured = 0.0;
  double threshold = 0.0;
  Compare compare = Compare::AtMost;
  Status status = Status::NotApplicable;
  std::string note;
};

struct VerifyReport {
  std::string suite;
  ShellParams params;
  std::vector<Property> properties;

  bool passed() const {
    return std::none_of(properties.begin(), properties.end(),
                        [](const Property& p) { return p.status == Status::Fail; });
  }
};

using Overrides = std::map<std::string, double, std::less<>>;

inline constexpr std::array<std::string_view, 6> kSuites{"symbol", "oracle", "critical", "limits",
                                                         "greens", "all"};

/// Every property name with its default threshold and comparison.
struct PropertySpec {
  std::string_view name;
  double threshold;
  Compare compare;
};

inline constexpr std::array<PropertySpec, 21> kPropertySpecs{{
    {"symbol.det_identity", tol::kSymbolIdentity, Compare::AtMost},
    {"symbol.inverse_identity", tol::kSymbolIdentity, Compare::AtMost},
    {"symbol.zeta_independence", tol::kSymbolIdentity, Compare::AtMost},
    {"symbol.hermitian", tol::kSymbolIdentity, Compare::AtMost},
    {"oracle.max_mismatch", tol::kOracleMismatch, Compare::AtMost},
    {"oracle.eigen_residual", tol::kEigenResidual, Compare::AtMost},
    {"oracle.absence", 0.0, Compare::AtMost},
    {"critical.kernel_at_zero", 1e-9, Compare::AtMost},
    {"critical.zero_is_eigenvalue", 1.0, Compare::AtLeast},
    {"critical.min_matching_det", tol::kDichotomyMin, Compare::AtLeast},
    {"limits.sup_ratio", tol::kLimitSupRatio, Compare::LessThan},
    {"limits.im_floor", tol::kLimitImFloor, Compare::AtLeast},
    {"limits.im_cauchy", tol::kLimitImCauchy, Compare::AtMost},
    {"greens.pde_residual", tol::kPdeResidualAbs, Compare::AtMost},
    {"greens.richardson_min", tol::kRichardsonLo, Compare::AtLeast},
    {"greens.richardson_max", tol::kRichardsonHi, Compare::AtMost},
    {"greens.fourier_pair", tol::kFourierPairRel, Compare::AtMost},
    {"greens.wronskian", tol::kWronskianRel, Compare::AtMost},
    {"greens.decay_rate", tol::kDecayRateRel, Compare::AtMost},
    {"greens.resolvent_round_trip", tol::kResolventRoundTrip, Compare::LessThan},
    {"greens.bessel_warning_free", 0.0, Compare::AtMost},
}};

inline const PropertySpec* find_property(std::string_view name) {
  for (const auto& s : kPropertySpecs) {
    if (s.name == name) return &s;
  }
  return nullptr;
}

/// Parses "KEY=VAL" into `out`; throws ParseError for unknown keys or bad values.
inline void add_override(Overrides& out, std::string_view text) {
  const auto eq = text.find('=');
  if (eq == std::string_view::npos) throw ParseError("--tol-override expects KEY=VAL, got '" + std::string(text) + "'");
  const std::string_view key = text.substr(0, eq);
  const std::string_view val = text.substr(eq + 1);
  if (!find_property(key)) throw ParseError("--tol-override: unknown property '" + std::string(key) + "'");
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(val.data(), val.data() + val.size(), v);
  if (ec != std::errc() || ptr != val.data() + val.size() || !std::isfinite(v)) {
    throw ParseError("--tol-override: bad value for '" + std::string(key) + "'");
  }
  out[std::string(key)] = v;
}

namespace detail {

class Recorder {
 public:
  Recorder(VerifyReport& report, const Overrides& overrides) : report_(report), overrides_(overrides) {}

  void measure(std::string_view name, double value, std::string note = {}) {
    Property p = make(name);
    p.measured = value;
    p.note = std::move(note);
    bool ok = false;
    switch (p.compare) {
      case Compare::AtMost: ok = value <= p.threshold; break;
      case Compare::LessThan: ok = value < p.threshold; break;
      case Compare::AtLeast: ok = value >= p.threshold; break;
    }
    p.status = ok ? Status::Pass : Status::Fail;
    report_.properties.push_back(std::move(p));
  }

  void skip(std::string_view name, std::string note) {
    Property p = make(name);
    p.measured = std::numeric_limits<double>::quiet_NaN();
    p.status = Status::NotApplicable;
    p.note = std::move(note);
    report_.properties.push_back(std::move(p));
  }

 private:
  Property make(std::string_view name) const {
    const PropertySpec* spec = find_property(name);
    Property p;
    p.name = std::string(name);
    p.threshold = spec->threshold;
    p.compare = spec->compare;
    if (const auto it = overrides_.find(name); it != overrides_.end()) p.threshold = it->second;
    return p;
  }

  VerifyReport& report_;
  const Overrides& overrides_;
};

// z drawn half from the real gap (if any) and half off the real axis.
inline cplx random_z(std::mt19937_64& rng, double abs_m, bool real_half) {
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  if (real_half && abs_m > 0.0) return {0.99 * abs_m * unit(rng), 0.0};
  const double y = 0.05 + 1.95 * std::abs(unit(rng));
  return {3.0 * unit(rng), unit(rng) < 0.0 ? -y : y};
}

inline void suite_symbol(Recorder& rec, const ShellParams& params) {
  const char* names[] = {"symbol.det_identity", "symbol.inverse_identity", "symbol.zeta_independence",
                         "symbol.hermitian"};
  if (params.free()) {
    for (const char* n : names) rec.skip(n, "eta = 0: Theta is undefined");
    return;
  }
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> pdist(-50.0, 50.0);
  const std::array<cplx, 4> zetas{cplx(0, 1), cplx(0, 2), cplx(1, 1), cplx(-3, 0.5)};
  const double eta = params.eta();
  double det_err = 0.0, inv_err = 0.0, zeta_err = 0.0, herm_err = 0.0;
  constexpr int kSamples = 1000;
  constexpr double kMaxCondition = 1e3;
  int ill_conditioned = 0;
  for (int i = 0; i < kSamples; ++i) {
    const double p = pdist(rng);
    const cplx z = random_z(rng, params.abs_m(), i % 2 == 0);
    const auto pt = SymbolPoint::make(params, p, z);
    const Mat2C th = theta_z(params, pt);
    const cplx closed = det_theta(params, pt);
    const double scale = (p * p + 1.0) * (1.0 / (eta * eta) + std::abs(z / (eta * pt.kappa)) + 0.25);
    det_err = std::max(det_err, std::abs(closed - th.det()) / scale);
    try {
      const Mat2C inv = theta_inv(params, pt);
      // The residual of any inverse is ~ eps * cond; near the dispersion curve
      // (or z -> 0 at eta = +-2) that says nothing about the formula.
      if (op_norm(th) * op_norm(inv) > kMaxCondition) {
        ++ill_conditioned;
      } else {
        inv_err = std::max(inv_err, max_abs(th * inv - Mat2C::identity()));
      }
    } catch (const SingularityError&) {
      ++ill_conditioned;
    }
    for (const cplx zeta : zetas) {
      const Mat2C diff = theta_ref(params, zeta, p) - weyl_symbol(params, z, zeta, p) - th;
      zeta_err = std::max(zeta_err, max_abs(diff) / std::sqrt(p * p + 1.0));
    }
    if (z.imag() == 0.0) {
      herm_err = std::max({herm_err, max_abs(imag_part(th)), std::abs(th.a12 - th.a21)});
    }
  }
  rec.measure(names[0], det_err, "max relative deviation, 1000 samples, |p| <= 50");
  rec.measure(names[1], inv_err,
              "max entrywise |theta theta^-1 - I|; " + std::to_string(ill_conditioned) +
                  " of 1000 samples skipped with condition number > 1e3");
  rec.measure(names[2], zeta_err, "zeta in {i, 2i, 1+i, -3+0.5i}, relative to sqrt(p^2+1)");
  if (params.abs_m() > 0.0) {
    rec.measure(names[3], herm_err, "real z in the gap: max |Im entry| and asymmetry");
  } else {
    rec.skip(names[3], "m = 0: the gap is empty");
  }
}

inline std::vector<double> oracle_momenta(const ShellParams& params) {
  std::vector<double> ps;
  for (int i = 0; i <= 40; ++i) {
    const double p = 0.25 * i;
    if (params.abs_m() == 0.0 && p == 0.0) continue;  // empty fiber gap
    ps.push_back(p);
  }
  return ps;
}

inline void suite_oracle(Recorder& rec, const ShellParams& params) {
  const char* names[] = {"oracle.max_mismatch", "oracle.eigen_residual", "oracle.absence"};
  if (params.free() || params.critical()) {
    for (const char* n : names) rec.skip(n, "requires eta not in {0, 2, -2}");
    return;
  }
  double mismatch = 0.0, residual = 0.0;
  int missing = 0, wrong_side = 0;
  for (const double p : oracle_momenta(params)) {
    for (const auto& [lo, hi] : fiber_sign_brackets(params, p)) {
      if (!sign_condition(params, 0.5 * (lo + hi))) ++wrong_side;
    }
    const auto mode = fiber_mode(params, p);
    if (!mode) {
      ++missing;
      continue;
    }
    mismatch = std::max(mismatch, std::abs(mode->z - dispersion_z(params, p)));
    residual = std::max(residual, mode->eigen_residual(params.m()));
  }
  rec.measure(names[0], missing ? std::numeric_limits<double>::infinity() : mismatch,
              "p in {0, 0.25, ..., 10}" + std::string(missing ? "; root missing at some p" : ""));
  rec.measure(names[1], residual, "relative eigenvector residual at the located roots");
  rec.measure(names[2], wrong_side, "sign changes of matching_det where z eta/(eta^2-4) <= 0");
}

inline void suite_critical(Recorder& rec, const ShellParams& params) {
  const auto grid = linear_grid(-50.0, 50.0, 2001);
  if (params.free()) {
    rec.skip("critical.kernel_at_zero", "eta = 0");
    rec.skip("critical.zero_is_eigenvalue", "eta = 0");
    rec.skip("critical.min_matching_det", "eta = 0");
    return;
  }
  if (params.critical()) {
    rec.measure("critical.kernel_at_zero", kernel_at_zero_scan(params, grid), "max |matching_det(p, 0)|, |p| <= 50");
    rec.measure("critical.zero_is_eigenvalue",
                classify_point(params, 0.0) == PointClass::EigenvalueInfinite ? 1.0 : 0.0,
                "1 when z = 0 is classified eigenvalue-infinite");
    rec.skip("critical.min_matching_det", "critical coupling");
    return;
  }
  rec.skip("critical.kernel_at_zero", "non-critical coupling");
  rec.skip("critical.zero_is_eigenvalue", "non-critical coupling");
  if (params.abs_m() == 0.0) {
    rec.skip("critical.min_matching_det", "m = 0: the fiber gap closes at p = 0");
  } else {
    rec.measure("critical.min_matching_det", min_matching_det(params, 0.0, grid), "min |matching_det(p, 0)|, |p| <= 50");
  }
}

inline void suite_limits(Recorder& rec, const ShellParams& params) {
  const char* names[] = {"limits.sup_ratio", "limits.im_floor", "limits.im_cauchy"};
  if (params.free() || params.abs_m() == 0.0) {
    for (const char* n : names) rec.skip(n, "requires eta != 0 and m != 0");
    return;
  }
  const double m = params.abs_m();
  const auto grid = hybrid_grid();
  const std::vector<double> ys{1e-1, 1e-5};
  double worst_ratio = 0.0;
  for (const double x : {m, -m, 1.5 * m, -1.5 * m}) {
    const auto rows = limit_sup_diag(params, x, ys, grid);
    worst_ratio = std::max(worst_ratio, rows[1].value / rows[0].value);
  }
  rec.measure(names[0], worst_ratio, "max over x in {+-m, +-1.5m} of sup(y=1e-5)/sup(y=1e-1)");
  const std::vector<double> y_small{1e-4, 1e-5, 1e-6, 1e-7, 1e-8};
  double floor = std::numeric_limits<double>::infinity(), cauchy = 0.0;
  for (const double x : {2.0 * m, -2.0 * m}) {
    // [-1, 1] when it fits strictly inside the allowed window and avoids p_+-.
    double a = std::min(1.0, 0.9 * std::sqrt(3.0) * m);
    if (const auto pc = p_crit(params, x)) a = std::min(a, 0.9 * pc->second);
    const auto rows = limit_im_diag(params, x, -a, a, y_small);
    floor = std::min(floor, rows.back().value);
    cauchy = std::max(cauchy, std::abs(rows.back().value - rows[rows.size() - 2].value));
  }
  rec.measure(names[1], floor, "x = +-2m, limit of max |Im theta^-1| on [-a, a], a <= 1");
  rec.measure(names[2], cauchy, "difference between y = 1e-7 and y = 1e-8");
}

// Gaussian test source for the resolvent round trip.
inline Spinor gaussian_source(Point2 x, double width) {
  const double e = std::exp(-(x[0] * x[0] + x[1] * x[1]) / (2.0 * width * width));
  return {cplx(e), cplx(0.5 * e, 0.3 * e)};
}

}  // namespace detail

/// Relative round-trip residual |(A_0 - z) R(z) f - f| / |f| at the point x,
/// with f a Gaussian of the given width sampled on cells of side h and the
/// free Dirac operator applied by central differences with step h.
inline double resolvent_round_trip(double m, cplx z, Point2 x, double h = 0.02, double width = 0.25) {
  const int n = 2 * static_cast<int>(std::ceil(5.0 * width / h)) + 1;
  const double x0 = -0.5 * (n - 1) * h;
  auto src = [width](Point2 y) { return detail::gaussian_source(y, width); };
  const auto f = SpinorField::sample(src, x0, x0, h, n, n);
  const std::vector<Point2> pts{x, {x[0] + h, x[1]}, {x[0] - h, x[1]}, {x[0], x[1] + h}, {x[0], x[1] - h}};
  const auto out = resolvent_apply(m, z, f, pts);
  const auto col = [&](std::size_t i) { return Mat2C{out.values[i][0], 0.0, out.values[i][1], 0.0}; };
  const Mat2C d1 = (col(1) - col(2)) * cplx(0.5 / h);
  const Mat2C d2 = (col(3) - col(4)) * cplx(0.5 / h);
  const Mat2C r = (pauli(1) * d1 + pauli(2) * d2) * (-kI) + (pauli(3) * cplx(m) - Mat2C::identity() * z) * col(0);
  const Spinor fx = src(x);
  return std::hypot(std::abs(r.a11 - fx[0]), std::abs(r.a21 - fx[1])) / norm(fx);
}

namespace detail {

inline void suite_greens(Recorder& rec, const ShellParams& params) {
  const double m = params.m();
  const double am = params.abs_m();
  // Spectral parameter inside the gap when there is one, otherwise off axis.
  const cplx z = am > 0.0 ? cplx(0.25 * am, 0.0) : cplx(0.0, 0.5);
  const cplx k = green_decay(m, z);

  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> rdist(0.5, 5.0), adist(0.0, 2.0 * kPi);
  double pde = 0.0, rmin = std::numeric_limits<double>::infinity(), rmax = 0.0;
  for (int i = 0; i < 20; ++i) {
    const double r = rdist(rng), a = adist(rng);
    const Point2 x{r * std::cos(a), r * std::sin(a)};
    pde = std::max(pde, max_abs(pde_residual(m, z, x, 1e-3)));
    const double coarse = max_abs(pde_residual(m, z, x, 1e-2));
    const double fine = max_abs(pde_residual(m, z, x, 5e-3));
    rmin = std::min(rmin, coarse / fine);
    rmax = std::max(rmax, coarse / fine);
  }
  rec.measure("greens.pde_residual", pde, "max entrywise residual at h = 1e-3, 20 points with |x| in [0.5, 5]");
  rec.measure("greens.richardson_min", rmin, "residual(h = 1e-2) / residual(h = 5e-3), 20 points");
  rec.measure("greens.richardson_max", rmax, "residual(h = 1e-2) / residual(h = 5e-3), 20 points");

  const auto pgrid = linear_grid(-20.0, 20.0, 81);
  double fourier = 0.0;
  for (const double kappa : {0.5, 1.0, 2.0}) fourier = std::max(fourier, fourier_pair_check(kappa, pgrid));
  rec.measure("greens.fourier_pair", fourier, "kappa in {0.5, 1, 2}, p in [-20, 20]");

  double wronskian = 0.0;
  bool warned = false;
  constexpr double d = 1e-4;
  for (const double x : {0.5, 1.0, 2.0, 5.0}) {
    const BesselPair at = bessel_k01(x);
    const double dk0 = (bessel_k01(x + d).k0.real() - bessel_k01(x - d).k0.real()) / (2.0 * d);
    wronskian = std::max(wronskian, std::abs(at.k1.real() + dk0) / at.k1.real());
    warned = warned || at.accuracy_warning;
  }
  rec.measure("greens.wronskian", wronskian, "|K1(x) + K0'(x)| / K1(x), x in {0.5, 1, 2, 5}");

  // Least-squares slope of log(sqrt(r) |G(r)|) over r in [5, 20]; the sqrt(r)
  // factor removes the algebraic prefactor of the Bessel asymptotics.
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  int n = 0;
  for (double r = 5.0; r <= 20.0 + 1e-12; r += 0.5, ++n) {
    const Mat2C g = green_kernel(m, z, Point2{r / std::sqrt(2.0), r / std::sqrt(2.0)});
    const double y = std::log(std::sqrt(r) * op_norm(g));
    sx += r;
    sy += y;
    sxx += r * r;
    sxy += r * y;
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  rec.measure("greens.decay_rate", std::abs(-slope - k.real()) / k.real(),
              "fitted decay rate vs Re sqrt(m^2 - z^2), r in [5, 20]");

  rec.measure("greens.resolvent_round_trip", resolvent_round_trip(m, cplx(0.0, 0.5), Point2{0.0, 0.0}),
              "Gaussian source width 0.25, h = 0.02, z = i/2, x = 0");
  rec.measure("greens.bessel_warning_free", warned ? 1.0 : 0.0, "1 if any Bessel evaluation above raised a warning");
}

}  // namespace detail

/// Runs one suite (or "all"); throws ParseError for an unknown suite name.
inline VerifyReport run_verify(std::string_view suite, const ShellParams& params, const Overrides& overrides = {}) {
  if (std::find(kSuites.begin(), kSuites.end(), suite) == kSuites.end()) {
    throw ParseError("unknown suite '" + std::string(suite) + "' (symbol, oracle, critical, limits, greens, all)");
  }
  VerifyReport report{std::string(suite), params, {}};
  detail::Recorder rec(report, overrides);
  const bool all = suite == "all";
  if (all || suite == "symbol") detail::suite_symbol(rec, params);
  if (all || suite == "oracle") detail::suite_oracle(rec, params);
  if (all || suite == "critical") detail::suite_critical(rec, params);
  if (all || suite == "limits") detail::suite_limits(rec, params);
  if (all || suite == "greens") detail::suite_greens(rec, params);
  return report;
}

inline std::string verify_json(const VerifyReport& report) {
  JsonWriter w;
  w.begin_object();
  w.field("schema", kSchema);
  w.field("suite", std::string_view(report.suite));
  w.field("eta", report.params.eta());
  w.field("m", report.params.m());
  w.field("passed", report.passed());
  w.key("properties").begin_array();
  for (const auto& p : report.properties) {
    w.begin_object();
    w.field("name", std::string_view(p.name));
    w.field("status", to_string(p.status));
    w.key("measured");
    if (p.status == Status::NotApplicable) w.null(); else w.value(p.measured);
    w.field("comparison", to_string(p.compare));
    w.field("threshold", p.threshold);
    w.field("pass", p.status != Status::Fail);
    if (!p.note.empty()) w.field("note", std::string_view(p.note));
    w.end_object();
  }
  w.end_array();
  w.end_object();
  return w.str() + "\n";
}

inline std::string verify_csv(const VerifyReport& report) {
  std::string out = "name,status,measured,comparison,threshold\n";
  for (const auto& p : report.properties) {
    out += p.name + "," + std::string(to_string(p.status)) + "," +
           (p.status == Status::NotApplicable ? std::string() : format_number(p.measured)) + "," +
           std::string(to_string(p.compare)) + "," + format_number(p.threshold) + "\n";
  }
  return out;
}

}  // namespace dshell
