#include <gtest/gtest.h>

#include "dshell/fiber.hpp"
#include "dshell/grid.hpp"
#include "dshell/spectrum.hpp"

using namespace dshell;

namespace {

ShellParams P(const char* eta, const char* m) { return ShellParams::parse(eta, m); }

}  // namespace

TEST(FiberSolve, DecayingSolutionsSatisfyEigenRelations) {
  for (const char* eta : {"1", "-2", "3.5"}) {
    for (const char* m : {"1", "-0.6", "0"}) {
      const auto params = P(eta, m);
      for (double p = -6.0; p <= 6.0; p += 0.37) {
        const double gap = std::sqrt(p * p + params.m() * params.m());
        for (double t = -0.99; t <= 0.99; t += 0.11) {
          const auto s = fiber_solve(params, p, t * gap);
          EXPECT_GT(s.kappa, 0.0);
          EXPECT_GT(norm(s.v_plus), 0.0);
          EXPECT_GT(norm(s.v_minus), 0.0);
          EXPECT_LE(s.eigen_residual(params.m()), tol::kEigenResidual);
        }
      }
    }
  }
}

TEST(FiberSolve, RejectsPointsOutsideTheGap) {
  EXPECT_THROW(fiber_solve(P("1", "1"), 0.0, 1.0), PreconditionError);
  EXPECT_THROW(fiber_solve(P("1", "1"), 1.0, -2.0), PreconditionError);
  EXPECT_THROW(fiber_solve(P("1", "0"), 0.0, 0.0), PreconditionError);
  EXPECT_THROW(matching_det(P("0", "1"), 0.0, 0.0), PreconditionError);
}

TEST(MatchingDet, ReferenceValues) {
  for (const double p : {0.0, 1.0, 5.0, 20.0}) EXPECT_EQ(std::abs(matching_det(P("2", "1"), p, 0.0)), 0.0) << p;
  const auto one = P("1", "1");
  EXPECT_LT(matching_det(one, 0.0, -0.61).real() * matching_det(one, 0.0, -0.59).real(), 0.0);
  EXPECT_GT(std::abs(matching_det(P("2.5", "1"), 0.0, 0.0)), 0.1);
}

TEST(MatchingDet, SingleSignChangeAtTheDispersionPoint) {
  const auto params = P("1", "1");
  for (const double p : {0.0, 0.5, -2.0, 7.0}) {
    const auto brackets = fiber_sign_brackets(params, p);
    ASSERT_EQ(brackets.size(), 1u) << p;
    const double z = dispersion_z(params, p);
    EXPECT_LE(brackets[0].first, z);
    EXPECT_GE(brackets[0].second, z);
  }
}

TEST(FiberEigenvalue, ReferenceValues) {
  EXPECT_NEAR(*fiber_eigenvalue(P("1", "1"), 0.0), -0.6, 1e-9);
  EXPECT_NEAR(*fiber_eigenvalue(P("1", "1"), 1.0), -0.6 * std::sqrt(2.0), 1e-9);
  EXPECT_NEAR(*fiber_eigenvalue(P("3", "1"), 2.0), 5.0 / 13.0 * std::sqrt(5.0), 1e-9);
  EXPECT_THROW(fiber_eigenvalue(P("2", "1"), 0.0), PreconditionError);
  EXPECT_THROW(fiber_eigenvalue(P("0", "1"), 0.0), PreconditionError);
}

TEST(FiberEigenvalue, OracleAgreesWithClosedForm) {
  for (const char* eta : {"0.5", "-0.5", "1", "-1", "1.5", "-1.5", "3", "-3", "5", "-5"}) {
    for (const char* m : {"0.5", "1", "2"}) {
      const auto params = P(eta, m);
      double worst = 0.0;
      for (int i = 0; i <= 40; ++i) {
        const double p = 0.25 * i;
        const auto z = fiber_eigenvalue(params, p);
        ASSERT_TRUE(z) << eta << " " << m << " " << p;
        worst = std::max(worst, std::abs(*z - dispersion_z(params, p)));
      }
      EXPECT_LE(worst, tol::kOracleMismatch) << eta << " " << m;
    }
  }
}

TEST(FiberEigenvalue, NoRootsOnTheWrongSide) {
  for (const char* eta : {"0.5", "-1", "3", "-10", "1.9"}) {
    const auto params = P(eta, "1");
    for (double p = 0.0; p <= 10.0; p += 0.5) {
      for (const auto& [lo, hi] : fiber_sign_brackets(params, p)) {
        EXPECT_TRUE(sign_condition(params, 0.5 * (lo + hi))) << eta << " " << p;
      }
    }
  }
}

TEST(FiberMode, UnitNormAndKernelOfMatchingSystem) {
  const auto params = P("-1.5", "0.8");
  for (const double p : {0.0, 1.0, 4.0}) {
    const auto mode = fiber_mode(params, p);
    ASSERT_TRUE(mode);
    EXPECT_NEAR(mode->norm_squared(), 1.0, 1e-14);
    const Mat2C a = detail::matching_matrix(params.eta(), mode->v_plus, mode->v_minus);
    const Spinor r = a * Spinor{mode->alpha, mode->beta};
    EXPECT_LE(norm(r), 1e-10);
  }
}

TEST(KernelAtZero, ReferenceValuesAndDichotomy) {
  const auto grid = linear_grid(-50.0, 50.0, 2001);
  for (const char* eta : {"2", "-2"}) {
    for (const char* m : {"1", "0.5"}) {
      EXPECT_LE(kernel_at_zero_scan(P(eta, m), grid), 1e-9) << eta << " " << m;
    }
  }
  EXPECT_THROW(kernel_at_zero_scan(P("1.9", "1"), grid), PreconditionError);
  for (const char* eta : {"1.9", "-1.9", "2.1", "-2.1"}) {
    for (const char* m : {"1", "0.5"}) {
      EXPECT_GE(min_matching_det(P(eta, m), 0.0, grid), tol::kDichotomyMin) << eta << " " << m;
    }
  }
}

TEST(Quasimode, ResidualShrinksWithWidth) {
  const auto params = P("1", "1");
  const double r5 = quasimode_residual(params, 0.0, 0.5);
  const double r25 = quasimode_residual(params, 0.0, 0.25);
  const double r125 = quasimode_residual(params, 0.0, 0.125);
  EXPECT_LT(r125, r25);
  EXPECT_LT(r25, r5);
  // z'(0) = 0: quadratic decay in w
  EXPECT_NEAR(r25 / r125, 4.0, 0.3);
  EXPECT_LT(quasimode_residual(params, 0.0, 1e-3), 1e-5);
}

TEST(Quasimode, FirstOrderTaylorAtNonzeroMomentum) {
  const auto params = P("1", "1");
  const double slope = 0.6 * 2.0 / std::sqrt(5.0);
  const double r = quasimode_residual(params, 2.0, 0.05);
  EXPECT_NEAR(r / (slope * 0.05), 1.0, 0.10);
  EXPECT_THROW(quasimode_residual(params, 0.0, 0.0), PreconditionError);
  EXPECT_THROW(quasimode_residual(P("2", "1"), 0.0, 0.1), PreconditionError);
}
