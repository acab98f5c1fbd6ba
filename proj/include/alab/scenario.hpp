#pragma once

// Evolution scenarios over finite reduced spectra: the duality system for
// the spectral image rho of the dual base state, positivity, the derived
// measures nu_r / nu_s, and Prony-type recovery of spectra from amplitudes.

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "alab/measure.hpp"

namespace alab {

// Residual bound for the duality constraints.
inline constexpr double kDualityTolerance = 1e-8;
// min rho_n above -kPositivityThreshold counts as positive.
inline constexpr double kPositivityThreshold = 1e-9;

enum class RhoSolver { kMinNorm, kPartition };

// Largest violation of
//   sum_n rho_n w_n cos(k kappa_n) = delta_k   (0 <= k <= L)
//   sum_n rho_n w_n sin(k kappa_n) = 0         (0 <  k <= L)
double duality_residual(const ReducedMeasure& nu_q, int L, std::span<const double> rho);

// Solves the 2L+1 real duality constraints for rho.
//
// kMinNorm returns the solution minimizing sum rho_n^2 w_n; it is a real
// trigonometric polynomial of degree L evaluated on the atoms.
// kPartition groups the sorted atoms into 2L+1 contiguous intervals and
// solves for a piecewise-constant rho.
//
// Throws InfeasibleError when the system has no solution (residual above
// kDualityTolerance) and PartitionDegenerateError when an interval is empty.
std::vector<double> solve_rho(const ReducedMeasure& nu_q, int L, RhoSolver solver);

// Basis of the homogeneous solution space D_{d,L} (columns are solutions of
// the system with zero right-hand side). Dimension d - rank.
std::vector<std::vector<double>> homogeneous_solutions(const ReducedMeasure& nu_q, int L);

struct NonnegSolution {
  std::vector<double> rho;
  double margin = 0.0;  // max over feasible rho of min_n rho_n
};

// Maximizes min_n rho_n subject to the duality constraints by linear
// programming. std::nullopt when the constraint system is infeasible.
std::optional<NonnegSolution> solve_rho_nonneg(const ReducedMeasure& nu_q, int L);

enum class Positivity { kPositive, kBoundary, kNegative, kInfeasible };

// positive: margin > 1e-9; boundary (non-negative only): |margin| <= 1e-9.
Positivity classify(const std::optional<NonnegSolution>& solution);
const char* to_string(Positivity p);

struct Scenario {
  ReducedMeasure nu_q;
  int L = 0;
  std::vector<double> rho;
  double norm1 = 0.0;         // sum |rho_n| w_n
  std::vector<int> sign_fn;   // sign(rho_n), +1 for rho_n >= 0
  ReducedMeasure nu_r;        // weights |rho_n|^2 w_n
  ReducedMeasure nu_s;        // weights |rho_n| w_n / norm1 (probability)
  double zeta = 0.0;          // sum_n w_n sqrt(|rho_n| / norm1)
  bool positive = false;
  double residual = 0.0;      // duality residual of rho
  double r0_norm = 0.0;       // sqrt(sum rho_n^2 w_n)
};

// Derives the scenario quantities from rho. Throws ContractError when rho
// violates the duality residual bound.
Scenario build_scenario(const ReducedMeasure& nu_q, int L, std::vector<double> rho);

// 2pi minus the largest circular gap between consecutive atoms: the length
// of the shortest arc containing the support.
double circular_span(const ReducedMeasure& nu_q);

// Order-1 positivity criterion: the support is not contained in any closed
// half circle, i.e. circular_span > pi.
bool order1_criterion(const ReducedMeasure& nu_q);

// Monic characteristic polynomial in the form
//   omega^d = sum_{0 <= n < d} a_{d-n} omega^n,
// whose roots are omega_k = exp(-i kappa_k). a[j] holds a_j for j = 1..d
// (a[0] is unused and set to 1).
struct CharacteristicPolynomial {
  std::vector<std::complex<double>> a;

  int degree() const { return static_cast<int>(a.size()) - 1; }
  // Ascending coefficients of omega^d - sum a_{d-n} omega^n.
  std::vector<std::complex<double>> ascending() const;
};

CharacteristicPolynomial char_poly_from_spectrum(std::span<const double> kappas);

struct ConditionReport {
  double hankel_condition = 0.0;   // 2-norm condition of the Hankel system
  double min_root_gap = 0.0;       // min |omega_i - omega_j|
  double max_unit_deviation = 0.0; // max |1 - |omega_k||
  double max_weight_imag = 0.0;    // largest imaginary part of a solved weight
};

struct RecoveredSpectrum {
  std::vector<double> kappas;
  std::vector<double> weights;
  ConditionReport condition;
};

inline constexpr double kMaxHankelCondition = 1e12;
inline constexpr double kMinRootGap = 1e-6;
inline constexpr double kMaxUnitDeviation = 1e-4;

// Prony recovery of a d-atom reduced measure from beta_0 .. beta_{2d-1}:
// Hankel system for the characteristic polynomial, Aberth roots, phases
// kappa = shift(-arg omega mod 2pi), Vandermonde system for the weights.
// Throws IllConditionedError / NonUnitRootError per the ConditionReport limits.
RecoveredSpectrum recover_from_amplitudes(const AmplitudeSequence& beta, int d);

// Builds nu_q from nu_s and zeta for the partition A / complement B of the
// atoms of nu_s: the image of q_0 takes the value x on A and y on B with
//   a x + b y = zeta,  a x^2 + b y^2 = 1,  0 < x <= 1 <= y,
// and nu_q has weights v^2 sigma. zeta = 1 returns nu_s itself.
struct NuQConstruction {
  ReducedMeasure nu_q;
  double x = 1.0;
  double y = 1.0;
};
NuQConstruction construct_nu_q_from_nu_s(const ReducedMeasure& nu_s, double zeta,
                                         std::span<const std::size_t> partition_a);

struct PositivityDomainStats {
  int d = 0;
  int L = 0;
  int trials = 0;
  std::uint64_t seed = 0;
  int positive = 0;
  int boundary = 0;
  int negative = 0;
  int infeasible = 0;
  int positive_lower = 0;  // counts at order L-1
  int boundary_lower = 0;
  int negative_lower = 0;
  int infeasible_lower = 0;
  int nesting_violations = 0;  // positive at L but not at L-1

  double positive_fraction() const {
    return trials > 0 ? static_cast<double>(positive) / trials : 0.0;
  }
};

// Samples ordered d-tuples uniformly from 0 <= k_0 < ... < k_{d-1} < 2pi
// (mapped to K, equal weights) and classifies each at orders L and L-1.
// Per-trial seeds are mix_seed(seed, trial), so results do not depend on
// the thread count.
PositivityDomainStats probe_positivity_domain(int d, int L, int trials, std::uint64_t seed,
                                              int threads = 1);

// The reduced measure for one probe trial (exposed for reproduction).
ReducedMeasure positivity_probe_sample(int d, std::uint64_t seed, int trial);

}  // namespace alab
