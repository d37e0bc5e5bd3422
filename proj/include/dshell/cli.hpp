#pragma once

// Subcommand implementations behind the dshell tool. Argument parsing lives in
// tools/dshell.cpp; everything here works on a RunConfig and returns the text
// to emit plus the process exit code, so it can be tested in-process.

#include <charconv>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dshell/errors.hpp"
#include "dshell/fiber.hpp"
#include "dshell/greens.hpp"
#include "dshell/grid.hpp"
#include "dshell/params.hpp"
#include "dshell/serialize.hpp"
#include "dshell/spectrum.hpp"
#include "dshell/symbol.hpp"
#include "dshell/verify.hpp"

namespace dshell {

enum ExitCode : int { kExitOk = 0, kExitVerifyFailed = 1, kExitUsage = 2, kExitDomain = 3 };

inline constexpr std::array<std::string_view, 7> kCommands{
    "spectrum", "band-edges", "dispersion", "symbol-eval", "greens-eval", "quasimode", "verify"};

struct RunConfig {
  std::string command;
  std::string eta = "1";
  std::string m = "1";
  double p_min = 0.0;
  double p_max = 10.0;
  long long p_count = 41;
  std::string z;     // complex literal; command-specific default when empty
  std::string zeta;  // complex literal; i (1 + |m|) when empty
  std::string format;  // json | csv; command-specific default when empty
  std::string suite = "all";
  std::vector<std::string> tol_overrides;  // KEY=VAL
  std::vector<std::string> x;              // "x1,x2" evaluation points (greens-eval)
  double p0 = 0.0;
  std::vector<double> widths;  // quasimode envelope widths
};

struct RunResult {
  int exit_code = kExitOk;
  std::string output;
  std::string error;
};

namespace detail {

inline double parse_real(std::string_view s, std::string_view what) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
    throw ParseError("invalid number for " + std::string(what) + ": '" + std::string(s) + "'");
  }
  return v;
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  return s;
}

}  // namespace detail

/// Complex literals: "0.5", "2i", "-i", "1-2.5e-3i", "0.3+0.4j", "(0.3,0.4)".
inline cplx parse_complex(std::string_view text) {
  const std::string_view s = detail::trim(text);
  if (s.empty()) throw ParseError("empty complex literal");
  if (s.front() == '(') {
    if (s.back() != ')') throw ParseError("invalid complex literal '" + std::string(s) + "'");
    const std::string_view inner = s.substr(1, s.size() - 2);
    const auto comma = inner.find(',');
    if (comma == std::string_view::npos) throw ParseError("invalid complex literal '" + std::string(s) + "'");
    return {detail::parse_real(detail::trim(inner.substr(0, comma)), "real part"),
            detail::parse_real(detail::trim(inner.substr(comma + 1)), "imaginary part")};
  }
  if (s.back() != 'i' && s.back() != 'j') return {detail::parse_real(s, "complex literal"), 0.0};
  const std::string_view body = s.substr(0, s.size() - 1);
  // Split at the last sign that is not an exponent sign or the leading sign.
  std::size_t split = std::string_view::npos;
  for (std::size_t k = body.size(); k-- > 1;) {
    if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
      split = k;
      break;
    }
  }
  const std::string_view re = split == std::string_view::npos ? std::string_view{} : body.substr(0, split);
  const std::string_view im = split == std::string_view::npos ? body : body.substr(split);
  double im_value = 0.0;
  if (im.empty() || im == "+") {
    im_value = 1.0;
  } else if (im == "-") {
    im_value = -1.0;
  } else {
    im_value = detail::parse_real(im, "imaginary part");
  }
  return {re.empty() ? 0.0 : detail::parse_real(re, "real part"), im_value};
}

namespace detail {

inline std::vector<double> config_grid(const RunConfig& c) {
  if (c.p_count < 2 || !(c.p_min < c.p_max)) {
    throw ParseError("grid needs --p-count >= 2 and --p-min < --p-max");
  }
  return linear_grid(c.p_min, c.p_max, static_cast<std::size_t>(c.p_count));
}

inline std::string resolve_format(const RunConfig& c, std::string_view fallback) {
  const std::string f = c.format.empty() ? std::string(fallback) : c.format;
  if (f != "json" && f != "csv") throw ParseError("--format must be json or csv, got '" + f + "'");
  return f;
}

inline Point2 parse_point(std::string_view s) {
  const auto comma = s.find(',');
  if (comma == std::string_view::npos) throw ParseError("--x expects x1,x2, got '" + std::string(s) + "'");
  return {parse_real(trim(s.substr(0, comma)), "x1"), parse_real(trim(s.substr(comma + 1)), "x2")};
}

inline void header(JsonWriter& w, const ShellParams& p) {
  w.field("schema", kSchema);
  w.field("eta", p.eta());
  w.field("m", p.m());
}

inline std::string cmd_spectrum(const RunConfig& c, const ShellParams& params) {
  const auto spec = full_spectrum(params);
  if (resolve_format(c, "json") == "json") return spectrum_json(spec);
  std::string out = "kind,lo,hi,closed,type,multiplicity\n";
  for (const auto& comp : spec.components) {
    out += std::string(to_string(comp.kind)) + "," + format_number(comp.lo) + "," + format_number(comp.hi) + "," +
           (comp.closed ? "true" : "false") + "," + std::string(to_string(comp.type)) + ",";
    if (comp.multiplicity) out += comp.multiplicity->infinite ? "infinite" : std::to_string(comp.multiplicity->count);
    out += "\n";
  }
  return out;
}

inline std::string cmd_band_edges(const RunConfig& c, const ShellParams& params) {
  const double edge = band_edge(params);
  std::string side = "none";
  if (params.abs_m() > 0.0 && !params.free()) {
    if (params.critical()) side = "point";
    else side = params.band_side_sign() < 0 ? "negative" : "positive";
  }
  if (resolve_format(c, "json") == "csv") {
    return "band_edge,z_minus,z_plus,attached_side\n" + format_number(edge) + "," + format_number(-edge) + "," +
           format_number(edge) + "," + side + "\n";
  }
  JsonWriter w;
  w.begin_object();
  header(w, params);
  w.field("critical", params.critical());
  w.field("band_edge", edge);
  w.field("z_minus", -edge);
  w.field("z_plus", edge);
  w.field("attached_side", std::string_view(side));
  w.end_object();
  return w.str() + "\n";
}

inline std::string cmd_dispersion(const RunConfig& c, const ShellParams& params) {
  const auto grid = config_grid(c);
  const std::string format = resolve_format(c, "csv");
  std::vector<std::pair<double, double>> rows;
  for (const double p : grid) rows.emplace_back(p, dispersion_z(params, p));
  if (format == "csv") {
    CsvWriter csv({"p", "z"});
    for (const auto& [p, z] : rows) csv.row({p, z});
    return csv.str();
  }
  JsonWriter w;
  w.begin_object();
  header(w, params);
  w.key("samples").begin_array();
  for (const auto& [p, z] : rows) w.begin_object().field("p", p).field("z", z).end_object();
  w.end_array().end_object();
  return w.str() + "\n";
}

inline std::string cmd_symbol_eval(const RunConfig& c, const ShellParams& params) {
  const auto grid = config_grid(c);
  const cplx z = c.z.empty() ? cplx(0.0, 0.0) : parse_complex(c.z);
  const cplx zeta = c.zeta.empty() ? default_zeta(params) : parse_complex(c.zeta);
  const std::string format = resolve_format(c, "json");
  if (format == "csv") {
    CsvWriter csv({"p", "kappa_re", "kappa_im", "det_re", "det_im", "c_re", "c_im"});
    for (const double p : grid) {
      const auto pt = SymbolPoint::make(params, p, z);
      const cplx det = params.free() ? cplx(NAN, NAN) : det_theta(params, pt);
      const cplx cz = params.free() ? cplx(NAN, NAN) : c_func(params, pt);
      csv.row({p, pt.kappa.real(), pt.kappa.imag(), det.real(), det.imag(), cz.real(), cz.imag()});
    }
    return csv.str();
  }
  JsonWriter w;
  w.begin_object();
  header(w, params);
  w.field("z", z);
  w.field("zeta", zeta);
  w.key("rows").begin_array();
  for (const double p : grid) {
    const auto pt = SymbolPoint::make(params, p, z);
    w.begin_object();
    w.field("p", p);
    w.field("kappa", pt.kappa);
    w.field("chat", chat(params, pt));
    w.field("weyl", weyl_symbol(params, z, zeta, p));
    if (params.free()) {
      for (const char* k : {"theta_ref", "theta_z", "det_theta", "c", "theta_inv"}) w.key(k).null();
    } else {
      w.field("theta_ref", theta_ref(params, zeta, p));
      w.field("theta_z", theta_z(params, pt));
      w.field("det_theta", det_theta(params, pt));
      w.field("c", c_func(params, pt));
      w.key("theta_inv");
      try {
        w.value(theta_inv(params, pt));
      } catch (const SingularityError&) {
        w.null();
      }
    }
    w.end_object();
  }
  w.end_array().end_object();
  return w.str() + "\n";
}

inline std::string cmd_greens_eval(const RunConfig& c, const ShellParams& params) {
  const cplx z = c.z.empty() ? cplx(0.0, 0.0) : parse_complex(c.z);
  std::vector<Point2> points;
  for (const auto& s : c.x) points.push_back(parse_point(s));
  if (points.empty()) points.push_back({1.0, 0.0});
  const double m = params.m();
  const cplx k = green_decay(m, z);
  const std::string format = resolve_format(c, "json");
  struct Row {
    Point2 x;
    Mat2C g;
    bool warning;
    double residual;
  };
  std::vector<Row> rows;
  for (const Point2& x : points) {
    const double r = std::hypot(x[0], x[1]);
    const Mat2C g = green_kernel(m, z, x);
    const bool warning = bessel_k01(k * r).accuracy_warning;
    rows.push_back({x, g, warning, max_abs(pde_residual(m, z, x, std::min(1e-3, r / 8.0)))});
  }
  if (format == "csv") {
    CsvWriter csv({"x1", "x2", "g11_re", "g11_im", "g12_re", "g12_im", "g21_re", "g21_im", "g22_re", "g22_im",
                   "pde_residual"});
    for (const auto& r : rows) {
      csv.row({r.x[0], r.x[1], r.g.a11.real(), r.g.a11.imag(), r.g.a12.real(), r.g.a12.imag(), r.g.a21.real(),
               r.g.a21.imag(), r.g.a22.real(), r.g.a22.imag(), r.residual});
    }
    return csv.str();
  }
  JsonWriter w;
  w.begin_object();
  w.field("schema", kSchema);
  w.field("m", m);
  w.field("z", z);
  w.field("k", k);
  w.key("points").begin_array();
  for (const auto& r : rows) {
    w.begin_object();
    w.key("x").begin_array().value(r.x[0]).value(r.x[1]).end_array();
    w.field("kernel", r.g);
    w.field("pde_residual", r.residual);
    w.field("accuracy_warning", r.warning);
    w.end_object();
  }
  w.end_array().end_object();
  return w.str() + "\n";
}

inline std::string cmd_quasimode(const RunConfig& c, const ShellParams& params) {
  const std::vector<double> widths = c.widths.empty() ? std::vector<double>{0.5, 0.25, 0.125} : c.widths;
  const double z0 = dispersion_z(params, c.p0);
  std::vector<std::pair<double, double>> rows;
  for (const double w : widths) rows.emplace_back(w, quasimode_residual(params, c.p0, w));
  if (resolve_format(c, "json") == "csv") {
    CsvWriter csv({"width", "residual"});
    for (const auto& [w, r] : rows) csv.row({w, r});
    return csv.str();
  }
  JsonWriter w;
  w.begin_object();
  header(w, params);
  w.field("p0", c.p0);
  w.field("z0", z0);
  w.key("rows").begin_array();
  for (const auto& [width, r] : rows) w.begin_object().field("width", width).field("residual", r).end_object();
  w.end_array().end_object();
  return w.str() + "\n";
}

}  // namespace detail

/// Runs one subcommand. Exit codes: 0 success, 1 verification failure,
/// 2 usage or parse error, 3 domain or precondition error.
inline RunResult run_command(const RunConfig& config) {
  RunResult result;
  try {
    if (std::find(kCommands.begin(), kCommands.end(), config.command) == kCommands.end()) {
      throw ParseError("unknown subcommand '" + config.command + "'");
    }
    const ShellParams params = ShellParams::parse(config.eta, config.m);
    if (config.command == "verify") {
      Overrides overrides;
      for (const auto& o : config.tol_overrides) add_override(overrides, o);
      const std::string format = detail::resolve_format(config, "json");
      const VerifyReport report = run_verify(config.suite, params, overrides);
      result.output = format == "json" ? verify_json(report) : verify_csv(report);
      result.exit_code = report.passed() ? kExitOk : kExitVerifyFailed;
      return result;
    }
    if (config.command == "spectrum") result.output = detail::cmd_spectrum(config, params);
    if (config.command == "band-edges") result.output = detail::cmd_band_edges(config, params);
    if (config.command == "dispersion") result.output = detail::cmd_dispersion(config, params);
    if (config.command == "symbol-eval") result.output = detail::cmd_symbol_eval(config, params);
    if (config.command == "greens-eval") result.output = detail::cmd_greens_eval(config, params);
    if (config.command == "quasimode") result.output = detail::cmd_quasimode(config, params);
  } catch (const ParseError& e) {
    result = {kExitUsage, {}, std::string("error: ") + e.what()};
  } catch (const DomainError& e) {
    result = {kExitDomain, {}, std::string("error: ") + e.what()};
  } catch (const PreconditionError& e) {
    result = {kExitDomain, {}, std::string("error: ") + e.what()};
  } catch (const SingularityError& e) {
    result = {kExitDomain, {}, std::string("error: ") + e.what()};
  }
  return result;
}

}  // namespace dshell
