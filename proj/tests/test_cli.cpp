#include <gtest/gtest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include <json.hpp>

#include "dshell/cli.hpp"

using namespace dshell;

namespace {

RunResult run(std::string command, std::string eta, std::string m, RunConfig extra = {}) {
  extra.command = std::move(command);
  extra.eta = std::move(eta);
  extra.m = std::move(m);
  return run_command(extra);
}

int run_binary(const std::string& args) {
  const std::string cmd = std::string(DSHELL_BIN) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST(ParseComplex, Forms) {
  EXPECT_EQ(parse_complex("0.5"), cplx(0.5, 0.0));
  EXPECT_EQ(parse_complex("2i"), cplx(0.0, 2.0));
  EXPECT_EQ(parse_complex("-i"), cplx(0.0, -1.0));
  EXPECT_EQ(parse_complex("i"), cplx(0.0, 1.0));
  EXPECT_EQ(parse_complex("1-2.5e-3i"), cplx(1.0, -2.5e-3));
  EXPECT_EQ(parse_complex("1e-3+2e+1j"), cplx(1e-3, 20.0));
  EXPECT_EQ(parse_complex("-0.3+i"), cplx(-0.3, 1.0));
  EXPECT_EQ(parse_complex("(0.3, -0.4)"), cplx(0.3, -0.4));
  for (const char* bad : {"", "abc", "1+", "(1,2", "1+2k", "i1", "1..2i"}) {
    EXPECT_THROW(parse_complex(bad), ParseError) << bad;
  }
}

TEST(CmdSpectrum, ReferenceValues) {
  const auto crit = nlohmann::json::parse(run("spectrum", "2", "1").output);
  EXPECT_EQ(crit["schema"], "dirac-shell/1");
  ASSERT_EQ(crit["components"].size(), 3u);
  EXPECT_EQ(crit["components"][1]["kind"], "point");
  EXPECT_EQ(crit["components"][1]["multiplicity"], "infinite");
  EXPECT_EQ(crit["components"][1]["type"], "eigenvalue");

  const auto free_op = nlohmann::json::parse(run("spectrum", "0", "1").output);
  ASSERT_EQ(free_op["components"].size(), 2u);
  EXPECT_EQ(free_op["components"][0]["endpoint"], -1.0);
  EXPECT_EQ(free_op["components"][1]["endpoint"], 1.0);

  const auto massless = nlohmann::json::parse(run("spectrum", "1", "0").output);
  ASSERT_EQ(massless["components"].size(), 1u);
  EXPECT_EQ(massless["components"][0]["kind"], "full-line");
}

TEST(CmdSpectrum, SeventeenDigitsAndRoundTrip) {
  const auto out = run("spectrum", "1", "1").output;
  EXPECT_NE(out.find("-0.59999999999999998"), std::string::npos) << out;
  for (const char* eta : {"-3", "-2", "-1", "0", "1", "2", "3", "0.3", "-1.5"}) {
    for (const char* m : {"1", "2", "0", "-0.7"}) {
      const auto params = ShellParams::parse(eta, m);
      const auto text = run("spectrum", eta, m).output;
      const auto back = parse_spectrum_json(text);
      EXPECT_TRUE(back.same_set(full_spectrum(params))) << eta << " " << m;
      EXPECT_TRUE(back.params == params) << eta << " " << m;
    }
  }
  EXPECT_THROW(parse_spectrum_json("{\"schema\":\"other\"}"), ParseError);
  EXPECT_THROW(parse_spectrum_json("not json"), ParseError);
}

TEST(CmdSpectrum, Deterministic) {
  RunConfig csv;
  csv.format = "csv";
  EXPECT_EQ(run("spectrum", "3", "1.25").output, run("spectrum", "3", "1.25").output);
  EXPECT_EQ(run("spectrum", "2", "1", csv).output,
            "kind,lo,hi,closed,type,multiplicity\n"
            "ray-left,null,-1.0,true,continuous,\n"
            "point,0.0,0.0,true,eigenvalue,infinite\n"
            "ray-right,1.0,null,true,continuous,\n");
}

TEST(CmdDispersion, ReferenceValues) {
  RunConfig grid;
  grid.p_min = 0.0;
  grid.p_max = 1.0;
  grid.p_count = 2;
  const auto one = run("dispersion", "1", "1", grid);
  EXPECT_EQ(one.exit_code, 0);
  EXPECT_EQ(one.output, "p,z\n0.0,-0.59999999999999998\n1.0,-0.84852813742385702\n");
  const auto three = run("dispersion", "3", "1", grid);
  EXPECT_EQ(three.output.substr(0, 26), "p,z\n0.0,0.3846153846153846");

  RunConfig empty;
  empty.p_count = 0;
  EXPECT_EQ(run("dispersion", "1", "1", empty).exit_code, kExitUsage);
  EXPECT_EQ(run("dispersion", "2", "1").exit_code, kExitDomain);
  EXPECT_EQ(run("dispersion", "0", "1").exit_code, kExitDomain);
  EXPECT_EQ(run("dispersion", "-2.0", "1").exit_code, kExitDomain);
}

TEST(CmdDispersion, RowsSolveDetTheta) {
  RunConfig grid;
  grid.p_min = -5.0;
  grid.p_max = 5.0;
  grid.p_count = 21;
  grid.format = "json";
  const auto doc = nlohmann::json::parse(run("dispersion", "-1.5", "0.8", grid).output);
  const auto params = ShellParams::parse("-1.5", "0.8");
  ASSERT_EQ(doc["samples"].size(), 21u);
  for (const auto& s : doc["samples"]) {
    const double p = s["p"], z = s["z"];
    EXPECT_LE(std::abs(det_theta(params, SymbolPoint::make(params, p, z))), 1e-10 * (p * p + 1));
  }
}

TEST(CmdVerify, ReferenceValues) {
  RunConfig critical;
  critical.suite = "critical";
  const auto crit = run("verify", "2", "1", critical);
  EXPECT_EQ(crit.exit_code, 0) << crit.output;
  const auto crit_doc = nlohmann::json::parse(crit.output);
  EXPECT_EQ(crit_doc["properties"][0]["name"], "critical.kernel_at_zero");
  EXPECT_EQ(crit_doc["properties"][0]["status"], "pass");

  RunConfig oracle;
  oracle.suite = "oracle";
  const auto orc = nlohmann::json::parse(run("verify", "1", "1", oracle).output);
  EXPECT_EQ(orc["properties"][0]["name"], "oracle.max_mismatch");
  EXPECT_LE(orc["properties"][0]["measured"].get<double>(), 1e-9);
  EXPECT_TRUE(orc["passed"].get<bool>());

  RunConfig symbol;
  symbol.suite = "symbol";
  const auto sym = run("verify", "0", "1", symbol);
  EXPECT_EQ(sym.exit_code, 0);
  for (const auto& p : nlohmann::json::parse(sym.output)["properties"]) EXPECT_EQ(p["status"], "not-applicable");
}

TEST(CmdVerify, OverridesAndFailures) {
  RunConfig strict;
  strict.suite = "oracle";
  strict.tol_overrides = {"oracle.max_mismatch=0"};
  const auto failed = run("verify", "1", "1", strict);
  EXPECT_EQ(failed.exit_code, kExitVerifyFailed);
  EXPECT_FALSE(nlohmann::json::parse(failed.output)["passed"].get<bool>());

  RunConfig unknown;
  unknown.suite = "oracle";
  unknown.tol_overrides = {"oracle.nope=1"};
  EXPECT_EQ(run("verify", "1", "1", unknown).exit_code, kExitUsage);
  unknown.tol_overrides = {"oracle.max_mismatch"};
  EXPECT_EQ(run("verify", "1", "1", unknown).exit_code, kExitUsage);
  RunConfig bad_suite;
  bad_suite.suite = "everything";
  EXPECT_EQ(run("verify", "1", "1", bad_suite).exit_code, kExitUsage);
}

TEST(OtherCommands, OutputShapes) {
  const auto edges = nlohmann::json::parse(run("band-edges", "-1", "2").output);
  EXPECT_NEAR(edges["band_edge"].get<double>(), 1.2, 1e-15);
  EXPECT_EQ(edges["attached_side"], "positive");
  EXPECT_EQ(nlohmann::json::parse(run("band-edges", "2", "1").output)["attached_side"], "point");

  RunConfig sym;
  sym.z = "0.5i";
  sym.p_count = 3;
  const auto s = nlohmann::json::parse(run("symbol-eval", "1", "1", sym).output);
  ASSERT_EQ(s["rows"].size(), 3u);
  EXPECT_TRUE(s["rows"][0]["theta_inv"].is_array());
  const auto free_sym = nlohmann::json::parse(run("symbol-eval", "0", "1", sym).output);
  EXPECT_TRUE(free_sym["rows"][0]["theta_z"].is_null());
  RunConfig singular;
  singular.z = "-0.6";
  singular.p_count = 2;
  EXPECT_TRUE(nlohmann::json::parse(run("symbol-eval", "1", "1", singular).output)["rows"][0]["theta_inv"].is_null());

  RunConfig green;
  green.x = {"1,0", "0, 1"};
  const auto g = nlohmann::json::parse(run("greens-eval", "1", "1", green).output);
  ASSERT_EQ(g["points"].size(), 2u);
  EXPECT_NEAR(g["points"][0]["kernel"][0][0][0].get<double>(), 0.42102443824070833 / (2.0 * kPi), 1e-12);
  RunConfig massless;
  massless.z = "0";
  EXPECT_EQ(run("greens-eval", "1", "0", massless).exit_code, kExitDomain);
  RunConfig bad_point;
  bad_point.x = {"1;0"};
  EXPECT_EQ(run("greens-eval", "1", "1", bad_point).exit_code, kExitUsage);

  RunConfig quasi;
  quasi.p0 = 2.0;
  quasi.widths = {0.1};
  const auto q = nlohmann::json::parse(run("quasimode", "1", "1", quasi).output);
  EXPECT_NEAR(q["z0"].get<double>(), -0.6 * std::sqrt(5.0), 1e-15);
  EXPECT_EQ(run("quasimode", "2", "1").exit_code, kExitDomain);

  EXPECT_EQ(run("spectrum", "two", "1").exit_code, kExitUsage);
  RunConfig fmt;
  fmt.format = "xml";
  EXPECT_EQ(run("spectrum", "1", "1", fmt).exit_code, kExitUsage);
}

TEST(Binary, ExitCodes) {
  EXPECT_EQ(run_binary("spectrum --eta 2 --m 1"), 0);
  EXPECT_EQ(run_binary("dispersion --eta 2 --m 1"), 3);
  EXPECT_EQ(run_binary("dispersion --eta 1 --p-count 0"), 2);
  EXPECT_EQ(run_binary("spectrum --eta abc"), 2);
  EXPECT_EQ(run_binary("spectrum --bogus 1"), 2);
  EXPECT_EQ(run_binary(""), 2);
  EXPECT_EQ(run_binary("verify --suite oracle --eta 1 --tol-override oracle.max_mismatch=0"), 1);
  EXPECT_EQ(run_binary("verify --suite critical --eta -2 --m 0.5"), 0);
  EXPECT_EQ(run_binary("--help"), 0);
}

TEST(Binary, WritesOutFile) {
  const std::string path = ::testing::TempDir() + "dshell_spectrum.json";
  ASSERT_EQ(run_binary("spectrum --eta 3 --m 1 --out " + path), 0);
  std::ifstream in(path);
  std::stringstream buf;
  buf << in.rdbuf();
  EXPECT_EQ(buf.str(), run("spectrum", "3", "1").output);
  std::remove(path.c_str());
}
