#pragma once

// Anticipation amplitudes alpha_n = zeta * mu_s^(n + 1/2), their
// probabilities and look-ahead moments, the mod-4pi spectral difference
// that controls half-integer transforms, the strength bounds, the gridded
// model measures and a Monte Carlo model for random spectral differences.

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "alab/measure.hpp"
#include "alab/scenario.hpp"

namespace alab {

// Agreement required between the raw and the spectral-difference routes.
inline constexpr double kRouteTolerance = 1e-10;

struct DifferenceEntry {
  double kappa = 0.0;
  double g0 = 0.0;  // mass landing on kappa from the even sheet
  double g1 = 0.0;  // mass landing on kappa from the odd sheet
  double y = 0.0;   // (g0 - g1) / (g0 + g1)
};

struct SpectralDifference {
  std::vector<DifferenceEntry> entries;  // sorted by kappa
};

// Splits a raw probability measure by the parity of its 2pi-sheet.
// Positions are reduced modulo 4pi onto [-pi, 3pi): [-pi, pi) is the even
// sheet (kappa = lambda), [pi, 3pi) the odd sheet (kappa = lambda - 2pi).
// With this window exp(-i(n+1/2)lambda) = +-exp(-i(n+1/2)kappa) for the
// even / odd sheet, which is what makes the two amplitude routes agree.
SpectralDifference spectral_difference(const RawPointMeasure& mu_s_raw);

// sum_entries (g0 - g1) exp(-i s kappa)
cplx difference_transform(const SpectralDifference& diff, double s);

// Raw lift of nu_s: every atom of mu_q_raw is reweighted by
// |rho(kappa)| / norm1 at its reduced position. Throws DomainError when an
// atom of mu_q_raw does not reduce onto an atom of nu_q.
RawPointMeasure lift_joint_measure(const Scenario& scenario, const RawPointMeasure& mu_q_raw);

enum class Direction { kAnticipation, kRetrospection };

struct AnticipationReport {
  int N = 0;
  Direction direction = Direction::kAnticipation;
  std::vector<cplx> alphas;   // n = 0..N
  std::vector<double> probs;  // |alpha_n|^2
  double P_N = 0.0;           // sum_{0 <= n < N} p_n
  std::vector<std::pair<double, double>> moments;  // (r, <|n|^r>_N)
  double route_discrepancy = 0.0;  // max |raw route - difference route|
};

// alpha_n = zeta * sum_m sigma_m exp(-i(n+1/2)lambda_m) for 0 <= n <= N,
// cross-checked against zeta * sum y sigma exp(-i(n+1/2)kappa).
// Retrospection evaluates the same sums at -n.
// Throws ContractError for a non-positive scenario or when the routes
// disagree by more than kRouteTolerance; DomainError when mu_s_raw does
// not reduce to the scenario's nu_s.
AnticipationReport anticipation_amplitudes(const Scenario& scenario,
                                           const RawPointMeasure& mu_s_raw, int N,
                                           Direction direction = Direction::kAnticipation);

// Fills P_N and <|n|^r>_N = sum_{0 <= n < N} |n|^r p_n. With fold_period > 0
// the index is first folded into (-period/2, period/2], so that amplitudes
// near the end of a period count as small look-ahead in the other direction.
void statistics(AnticipationReport& report, std::span<const double> r_list,
                int fold_period = 0);

// sum_{n=0}^{p-1} p^-2 sin^-2(pi (n - 1/2) / p)
double shifted_sine_sum(int p);

struct StrengthBounds {
  double PL = 0.0;        // sum_{n=0}^{L} p_n
  double zeta2_y2 = 0.0;  // zeta^2 sum y^2 sigma
  double zeta2 = 0.0;
  bool holds = false;     // PL <= zeta2_y2 <= zeta2 <= 1, slack 1e-9
};

// The L+1 states s_0..s_L are orthonormal, so the first L+1 amplitudes are
// Bessel-bounded by zeta^2 ||y||^2. The report must cover N >= L.
StrengthBounds strength_bound_check(const Scenario& scenario, const SpectralDifference& diff,
                                    const AnticipationReport& report);

// Per-atom mean y1 and variance y2 of the spectral difference y on the
// atoms of nu_s.
struct StochasticDifferenceModel {
  std::vector<double> y1;
  std::vector<double> y2;
  std::uint64_t seed = 0;

  static StochasticDifferenceModel uniform(std::size_t atoms, double y1, double y2,
                                           std::uint64_t seed);
};

// Two-point law on [-1, 1] with mean y1 and variance y2; returns the
// (low, high, probability of low) triple. Throws DomainError if
// y2 > 1 - y1^2.
struct TwoPoint {
  double low = 0.0;
  double high = 0.0;
  double p_low = 1.0;
};
TwoPoint two_point_law(double y1, double y2);

struct ExpectedStrength {
  int trials = 0;
  double estimate = 0.0;   // mean of P_L = sum_{n<L} p_n over trials
  double std_error = 0.0;
  double bound = 0.0;      // zeta^2 (sum y1^2 sigma + L sum y2 sigma^2)
  double sum_sigma = 0.0;
  double sum_sigma_sq = 0.0;
  bool holds = false;      // estimate <= bound + 3 std_error
};

ExpectedStrength expected_strength(const Scenario& scenario,
                                   const StochasticDifferenceModel& model, int trials,
                                   int threads = 1);

// (L+1) sum sigma^2 <= (sum sigma)^2 for the atoms of nu_s.
bool pure_point_square_bound(const Scenario& scenario);

// Cell masses c/L (uniform) or c(-1)^n/L (alternating); "b" and "c" on the
// command line.
enum class ModelKind { kUniform, kAlternating };

struct ModelResult {
  ModelKind kind = ModelKind::kUniform;
  int L = 0;
  int M = 0;
  int N = 0;
  double c = 0.0;
  double eps = 0.0;
  ReducedMeasure x_s;              // signed difference measure, L*M atoms
  std::vector<cplx> alphas;        // n = 0..L
  std::vector<double> probs;
  std::vector<double> predicted;   // continuum approximation of p_n
  double P_L = 0.0;                // sum_{n<L} p_n
  double predicted_max = 0.0;
  double predicted_min = 0.0;
  double predicted_PL = 0.0;
};

// Gridded difference measure with cells of width 2 pi eps / L at the start
// of each of the L blocks of K; every block carries mass c / L (uniform) or
// c (-1)^n / L (alternating) spread over M = round(eps N) equal atoms.
ModelResult model_measure(ModelKind kind, int L, int N, double c, double eps);

}  // namespace alab
