#pragma once

// Central numerical thresholds. Every rank/equality/membership decision in the
// library routes through one of these so behavior is pinned in one place.
namespace operon::tol {

// Rank and degeneracy decisions: singular/eigen values below kRankRel times
// the largest one are treated as zero.
inline constexpr double kRankRel = 1e-8;

// Matrix equality and state-validation slack (absolute, Frobenius / entrywise).
inline constexpr double kEquality = 1e-10;

// Span-membership residual for algebra elements and Kraus locality.
inline constexpr double kSpanMembership = 1e-9;

// Most negative eigenvalue a density operator may carry and still validate.
inline constexpr double kPsdFloor = 1e-10;

// Acceptance probability at or below this is a null outcome.
inline constexpr double kNullOutcome = 1e-12;

// Correlation-factorization slack for product-state checks.
inline constexpr double kProductState = 1e-8;

// A separable approximation within this Frobenius distance certifies the state.
inline constexpr double kSeparableCertificate = 1e-7;

// A partial-transpose eigenvalue below -kWitnessNegative witnesses entanglement.
inline constexpr double kWitnessNegative = 1e-9;

// Left-ideal membership: functional values rho(A*A) at or below this are zero.
inline constexpr double kIdealNull = 1e-10;

// Singular-value floor used by the invertible-approximation construction.
inline constexpr double kInvertibleFloor = 1e-3;

}  // namespace operon::tol
