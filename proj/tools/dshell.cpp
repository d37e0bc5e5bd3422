// dshell: spectra, symbols and checks for the 2D Dirac operator with a
// delta-shell interaction on a line.

#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "dshell/cli.hpp"

int main(int argc, char** argv) {
  using dshell::RunConfig;
  CLI::App app{"Spectral toolkit for the 2D Dirac operator with a delta-shell interaction on a line"};
  app.require_subcommand(1);
  RunConfig config;
  std::string out_path;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--eta", config.eta, "coupling eta (decimal; 2, 2.0, 0.2e1 are critical)");
    sub->add_option("--m", config.m, "mass m (decimal)");
    sub->add_option("--format", config.format, "json or csv");
    sub->add_option("--out", out_path, "write output to this file instead of stdout");
  };
  auto add_grid = [&](CLI::App* sub) {
    sub->add_option("--p-min", config.p_min, "momentum grid start");
    sub->add_option("--p-max", config.p_max, "momentum grid end");
    sub->add_option("--p-count", config.p_count, "momentum grid nodes (>= 2)");
  };

  auto* spectrum = app.add_subcommand("spectrum", "spectrum of A_eta as a union of rays and points");
  add_common(spectrum);
  auto* edges = app.add_subcommand("band-edges", "inner band edges +-|m||eta^2-4|/(eta^2+4)");
  add_common(edges);
  auto* dispersion = app.add_subcommand("dispersion", "in-gap dispersion curve z(p)");
  add_common(dispersion);
  add_grid(dispersion);
  auto* symbol = app.add_subcommand("symbol-eval", "Fourier symbols at (z, p) on a momentum grid");
  add_common(symbol);
  add_grid(symbol);
  symbol->add_option("--z", config.z, "spectral parameter, e.g. 0.5, 0.3+0.1i, (0.3,0.1)");
  symbol->add_option("--zeta", config.zeta, "reference point off the real axis (default i(1+|m|))");
  auto* greens = app.add_subcommand("greens-eval", "free Green's kernel G_z(x) and its PDE residual");
  add_common(greens);
  greens->add_option("--z", config.z, "spectral parameter outside sigma(A_0)");
  greens->add_option("--x", config.x, "evaluation point x1,x2 (repeatable)");
  auto* quasi = app.add_subcommand("quasimode", "wave-packet residuals R(w) at z(p0)");
  add_common(quasi);
  quasi->add_option("--p0", config.p0, "centre momentum");
  quasi->add_option("--width", config.widths, "envelope widths (repeatable)");
  auto* verify = app.add_subcommand("verify", "run property suites and report pass/fail");
  add_common(verify);
  verify->add_option("--suite", config.suite, "symbol, oracle, critical, limits, greens or all");
  verify->add_option("--tol-override", config.tol_overrides, "KEY=VAL threshold override (repeatable)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : dshell::kExitUsage;
  }
  config.command = app.get_subcommands().front()->get_name();

  const dshell::RunResult result = dshell::run_command(config);
  if (!result.error.empty()) std::cerr << result.error << "\n";
  if (out_path.empty()) {
    std::cout << result.output;
  } else if (!result.output.empty()) {
    std::ofstream file(out_path, std::ios::binary);
    if (!file) {
      std::cerr << "error: cannot open '" << out_path << "' for writing\n";
      return dshell::kExitUsage;
    }
    file << result.output;
  }
  return result.exit_code;
}
