#pragma once

namespace warpcone::baselines {

// Regression floors computed once by the dense eigensolver on this machine
// and asserted thereafter. The expander certificate is relative to these
// numbers, not to any theoretical gap.

// min over primes 3..47 of lambda1 of the normalized Laplacian of the
// Schreier graph on the nonzero residue pairs (generators T, R and inverses).
// Attained at p = 43; the family is not monotone in p (p = 31 bumps up).
inline constexpr double kSchreierFamilyFloor = 0.018699233292004631;

// Ceiling for the cycle control: distortion_lower_bound of C_n increases
// toward pi/sqrt(6) ~ 1.28255 as n grows, so every cycle stays below this.
// Measured C_64 value is 1.2823477849026408.
inline constexpr double kCycleControlDlb = 1.2826;

// Poincare certificate threshold for the Schreier tail (primes >= 11).
// Small members sit lower (p = 3, 5, 7 give 0.99, 0.87, 0.99): the bound
// is weak on small graphs, as the 4-cycle example (1.2247 vs sqrt 2) shows.
inline constexpr double kSchreierDlbThreshold = 1.05;

// Tolerance for floor assertions.
inline constexpr double kFloorTol = 1e-6;

}  // namespace warpcone::baselines
