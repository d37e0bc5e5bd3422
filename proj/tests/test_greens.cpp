#include <gtest/gtest.h>

#include <random>

#include "dshell/greens.hpp"
#include "dshell/grid.hpp"
#include "dshell/verify.hpp"
#include "oracles/reference_values.hpp"

using namespace dshell;

TEST(GreenKernel, ReferenceValueOnTheX1Axis) {
  const Mat2C g = green_kernel(1.0, 0.0, {1.0, 0.0});
  const double k0 = 0.42102443824070833334, k1 = 0.60190723019723457474;
  const Mat2C want = pauli(1) * cplx(0.0, k1 / (2.0 * kPi)) + pauli(3) * cplx(k0 / (2.0 * kPi));
  EXPECT_LE(max_abs(g - want), 1e-12);
  EXPECT_NEAR(g.a11.real(), 0.0670081, 1e-7);
  EXPECT_NEAR(g.a12.imag(), 0.0957965, 1e-7);
}

TEST(GreenKernel, ReferenceValueOnTheX2Axis) {
  const Mat2C g = green_kernel(1.0, 0.0, {0.0, 1.0});
  const double k1 = 0.60190723019723457474;
  // i k K1 sigma_2 / 2pi: real off-diagonal entries (k1/2pi, -k1/2pi)
  EXPECT_NEAR(g.a12.real(), k1 / (2.0 * kPi), 1e-12);
  EXPECT_NEAR(g.a21.real(), -k1 / (2.0 * kPi), 1e-12);
  EXPECT_NEAR(g.a12.imag(), 0.0, 1e-15);
}

TEST(GreenKernel, DomainErrors) {
  EXPECT_THROW(green_kernel(1.0, 0.0, {0.0, 0.0}), DomainError);
  EXPECT_THROW(green_kernel(1.0, 1.0, {1.0, 0.0}), DomainError);
  EXPECT_THROW(green_kernel(1.0, -3.0, {1.0, 0.0}), DomainError);
  EXPECT_THROW(green_kernel(0.0, 0.0, {1.0, 0.0}), DomainError);
  EXPECT_NO_THROW(green_kernel(0.0, cplx(0.0, 0.5), {1.0, 0.0}));
}

TEST(GreenKernel, ParitySplit) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-4.0, 4.0);
  for (int i = 0; i < 200; ++i) {
    const Point2 x{u(rng), u(rng)};
    const cplx z(0.2 * u(rng), 0.1 * u(rng));
    const Mat2C g = green_kernel(1.1, z, x), h = green_kernel(1.1, z, {-x[0], -x[1]});
    const Mat2C even = (g + h) * cplx(0.5), odd = (g - h) * cplx(0.5);
    const Mat2C diag_part = Mat2C::diag(g.a11, g.a22), off_part{0.0, g.a12, g.a21, 0.0};
    EXPECT_LE(max_abs(even - diag_part), 1e-14);
    EXPECT_LE(max_abs(odd - off_part), 1e-14);
  }
}

TEST(GreenKernel, ExponentialBoundFarAway) {
  const double m = 1.0;
  const cplx z(0.3, 0.0);
  const double k = std::sqrt(1.0 - 0.09);
  for (double r = 20.0; r <= 28.0; r += 2.0) {
    const Mat2C g = green_kernel(m, z, {r * 0.6, r * 0.8});
    EXPECT_LE(max_abs(g), std::exp(-0.9 * k * r)) << r;
  }
}

TEST(PdeResidual, SmallAtFineStep) {
  EXPECT_LE(max_abs(pde_residual(1.0, 0.0, {1.0, 0.0}, 1e-3)), 1e-4);
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> r(0.5, 5.0), a(0.0, 2.0 * kPi), zs(-0.5, 0.5);
  for (int i = 0; i < 30; ++i) {
    const double rr = r(rng), aa = a(rng);
    EXPECT_LE(max_abs(pde_residual(1.0, zs(rng), {rr * std::cos(aa), rr * std::sin(aa)}, 1e-3)),
              tol::kPdeResidualAbs);
  }
}

TEST(PdeResidual, SecondOrderRichardson) {
  std::mt19937_64 rng(10);
  std::uniform_real_distribution<double> r(0.5, 5.0), a(0.0, 2.0 * kPi), zr(-0.45, 0.45), zi(-1.0, 1.0);
  for (int i = 0; i < 20; ++i) {
    const double rr = r(rng), aa = a(rng);
    const Point2 x{rr * std::cos(aa), rr * std::sin(aa)};
    const cplx z(zr(rng), i % 2 ? zi(rng) : 0.0);
    const double ratio = max_abs(pde_residual(1.0, z, x, 1e-2)) / max_abs(pde_residual(1.0, z, x, 5e-3));
    EXPECT_GE(ratio, tol::kRichardsonLo) << i;
    EXPECT_LE(ratio, tol::kRichardsonHi) << i;
  }
}

TEST(PdeResidual, Preconditions) {
  EXPECT_THROW(pde_residual(1.0, 0.0, {1.0, 0.0}, 0.25), PreconditionError);
  EXPECT_THROW(pde_residual(1.0, 0.0, {1.0, 0.0}, 0.0), PreconditionError);
  EXPECT_THROW(pde_residual(0.0, 0.0, {1.0, 0.0}, 1e-3), DomainError);
}

TEST(FourierPair, ReferenceValuesAndScaling) {
  K0FourierTransform one(1.0), two(2.0);
  EXPECT_NEAR(one(0.0), std::sqrt(kPi / 2.0), 1e-6 * std::sqrt(kPi / 2.0));
  EXPECT_NEAR(two(2.0), std::sqrt(kPi / 2.0) / std::sqrt(8.0), 1e-6);
  for (const double p : {0.0, 0.7, 3.0, 11.0}) EXPECT_NEAR(two(p), one(p / 2.0) / 2.0, 1e-10);
  const auto grid = linear_grid(-20.0, 20.0, 161);
  for (const double kappa : {0.5, 1.0, 2.0}) EXPECT_LE(fourier_pair_check(kappa, grid), tol::kFourierPairRel);
  EXPECT_THROW(K0FourierTransform(0.0), PreconditionError);
}

TEST(DecayRate, LogLinearFit) {
  for (const auto& [m, z] : {std::pair{1.5, cplx(0.0)}, std::pair{1.0, cplx(0.25)}, std::pair{0.0, cplx(0.0, 0.5)}}) {
    const double k = green_decay(m, z).real();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (double r = 5.0; r <= 20.0; r += 0.25, ++n) {
      const double y = std::log(std::sqrt(r) * op_norm(green_kernel(m, z, {r, 0.0})));
      sx += r;
      sy += y;
      sxx += r * r;
      sxy += r * y;
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    EXPECT_LE(std::abs(-slope - k) / k, tol::kDecayRateRel) << m;
  }
}

TEST(ResolventApply, ZeroInZeroOut) {
  const auto f = SpinorField::sample([](Point2) { return Spinor{}; }, -0.5, -0.5, 0.1, 11, 11);
  const std::vector<Point2> pts{{0.0, 0.0}, {0.3, -0.2}, {2.0, 2.0}};
  const auto out = resolvent_apply(1.0, cplx(0.0, 0.5), f, pts);
  for (const auto& v : out.values) EXPECT_EQ(norm(v), 0.0);
}

TEST(ResolventApply, ConjugateSymmetry) {
  // G_{conj z}(x) = conj(G_z(P x)) with P the reflection x1 -> -x1, so
  // R(conj z) f (x) = conj( R(z) [conj f o P] (P x) ).
  const double h = 0.05;
  auto f = [](Point2 y) {
    const double e = std::exp(-(y[0] * y[0] + 2.0 * y[1] * y[1]));
    return Spinor{cplx(e * (1.0 + y[0]), 0.3 * e), cplx(0.2 * e, -e * y[1])};
  };
  auto g = [&](Point2 y) {
    const Spinor v = f({-y[0], y[1]});
    return Spinor{std::conj(v[0]), std::conj(v[1])};
  };
  const auto ff = SpinorField::sample(f, -1.5, -1.5, h, 61, 61);
  const auto gg = SpinorField::sample(g, -1.5, -1.5, h, 61, 61);
  const cplx z(0.2, 0.6);
  const std::vector<Point2> xs{{0.1, 0.2}, {-0.35, 0.0}};
  const std::vector<Point2> reflected{{-0.1, 0.2}, {0.35, 0.0}};
  const auto lhs = resolvent_apply(1.0, std::conj(z), ff, xs);
  const auto rhs = resolvent_apply(1.0, z, gg, reflected);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    EXPECT_LE(std::abs(lhs.values[i][0] - std::conj(rhs.values[i][0])), 1e-12);
    EXPECT_LE(std::abs(lhs.values[i][1] - std::conj(rhs.values[i][1])), 1e-12);
  }
}

TEST(ResolventApply, RoundTripGaussian) {
  for (const Point2 x : {Point2{0.0, 0.0}, Point2{0.2, 0.1}}) {
    EXPECT_LT(resolvent_round_trip(1.0, cplx(0.0, 0.5), x), tol::kResolventRoundTrip);
  }
}

TEST(ResolventApply, BoundaryWarningsAndErrors) {
  const auto f = SpinorField::sample([](Point2) { return Spinor{cplx(1.0), cplx(0.0)}; }, 0.0, 0.0, 0.1, 10, 10);
  // support is [-0.05, 0.95]^2
  const std::vector<Point2> pts{{0.5, 0.5}, {0.0, 0.5}, {0.9, 0.9}, {3.0, 3.0}, {1.0, 0.5}};
  const auto out = resolvent_apply(1.0, 0.0, f, pts);
  EXPECT_FALSE(out.accuracy_warning[0]);
  EXPECT_TRUE(out.accuracy_warning[1]);
  EXPECT_TRUE(out.accuracy_warning[2]);
  EXPECT_FALSE(out.accuracy_warning[3]);
  EXPECT_TRUE(out.accuracy_warning[4]);
  EXPECT_THROW(resolvent_apply(1.0, 2.0, f, pts), DomainError);
  SpinorField bad = f;
  bad.values.pop_back();
  EXPECT_THROW(resolvent_apply(1.0, 0.0, bad, pts), PreconditionError);
}

TEST(ResolventApply, PolarCellMatchesCornerSplitQuadrature) {
  // Reference: cut the cell at x into four rectangles with the singularity at
  // a corner, then nested tanh-sinh, which converges for corner singularities.
  const Point2 c{0.0, 0.0};
  const Point2 x{0.013, -0.021};
  const double h = 0.1;
  const cplx z(0.1, 0.3);
  auto rect = [&](double a0, double a1, double b0, double b1) {
    auto outer = [&](double y1) {
      auto inner = [&](double y2) { return green_kernel(1.0, z, Point2{x[0] - y1, x[1] - y2}); };
      return quad::tanh_sinh(inner, b0, b1, 1e-11).value;
    };
    return quad::tanh_sinh(outer, a0, a1, 1e-11).value;
  };
  const double l = c[0] - 0.5 * h, r = c[0] + 0.5 * h, lo = c[1] - 0.5 * h, hi = c[1] + 0.5 * h;
  const Mat2C reference =
      rect(l, x[0], lo, x[1]) + rect(x[0], r, lo, x[1]) + rect(l, x[0], x[1], hi) + rect(x[0], r, x[1], hi);
  const Mat2C polar = detail::cell_integral_polar(1.0, z, x, c, h);
  EXPECT_LE(max_abs(polar - reference), 1e-8 * max_abs(reference));
}
