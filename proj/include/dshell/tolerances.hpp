#pragma once

// Every numerical tolerance and acceptance threshold used by the toolkit.
// Verification suites read their defaults from here; the CLI can override
// the verification thresholds by name.

namespace dshell::tol {

// numerics-core
inline constexpr double kSqrtRel = 1e-14;
inline constexpr double kBesselRel = 1e-9;
inline constexpr double kBesselQuadRel = 1e-15;  // trapezoid convergence target
inline constexpr double kBesselWarnAbs = 30.0;   // |w| above this: underflow dominated
inline constexpr double kMatDetRel = 1e-13;
inline constexpr double kMatInverseAbs = 1e-12;
inline constexpr double kWronskianRel = 1e-5;

// symbol
inline constexpr double kSymbolIdentity = 1e-12;
inline constexpr double kKappaRel = 1e-13;
inline constexpr double kSingularC = 1e-13;  // |c| <= kSingularC * (1 + |z| + |p|)
inline constexpr double kLimitSupRatio = 0.05;
inline constexpr double kLimitImFloor = 1e-3;
inline constexpr double kLimitImCauchy = 1e-6;

// spectrum
inline constexpr double kEdgeConsistency = 1e-13;
inline constexpr double kRoundTrip = 1e-10;

// fiber oracle
inline constexpr double kOracleMismatch = 1e-9;
inline constexpr double kBisectionAbs = 1e-12;
inline constexpr int kScanNodes = 2000;
inline constexpr double kGapMargin = 1e-3;
inline constexpr double kEigenResidual = 1e-12;
inline constexpr double kKernelScanFactor = 1e-12;  // bound = factor * (1 + max|p|)^2
inline constexpr double kDichotomyMin = 1e-3;

// greens
inline constexpr double kFourierPairRel = 1e-6;
inline constexpr double kPdeResidualAbs = 1e-4;
inline constexpr double kRichardsonLo = 3.5;
inline constexpr double kRichardsonHi = 4.5;
inline constexpr double kDecayRateRel = 0.05;
inline constexpr double kResolventRoundTrip = 0.02;

}  // namespace dshell::tol
