#include "alab/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>

#include "alab/anticipation.hpp"
#include "alab/delta_kernels.hpp"
#include "alab/inversion.hpp"
#include "alab/measure.hpp"
#include "alab/rng.hpp"
#include "alab/scenario.hpp"

namespace alab {
namespace {

std::string printf_string(const char* fmt, ...) {
  char buf[512];
  va_list args;
  va_start(args, fmt);
  std::vsnprintf(buf, sizeof buf, fmt, args);
  va_end(args);
  return buf;
}

double circular_distance(double a, double b) {
  const double d = std::abs(wrap(a - b, kTwoPi, -kPi));
  return std::min(d, kTwoPi - d);
}

ReducedMeasure equidistant(int p) {
  SpectrumRequest req;
  req.kind = SpectrumKind::kEquidistant;
  req.d = p;
  return reduce(gen_spectrum(req));
}

// Random reduced measure with d atoms, positions uniform on K, weights
// uniform in [0.2, 1] and normalized.
ReducedMeasure random_reduced(Rng& rng, int d) {
  std::vector<double> w(d);
  double total = 0.0;
  for (double& x : w) total += (x = rng.uniform(0.2, 1.0));
  std::vector<Atom> atoms;
  double partial = 0.0;
  for (int m = 0; m < d; ++m) {
    const double weight = m + 1 == d ? 1.0 - partial : w[m] / total;
    partial += weight;
    atoms.push_back({rng.uniform(-kPi, kPi), weight});
  }
  return ReducedMeasure(std::move(atoms), true);
}

// Raw lift of a reduced probability measure: every atom goes to a random
// sheet kappa + 2 pi j, and some atoms are split across two sheets.
RawPointMeasure random_lift(Rng& rng, const ReducedMeasure& nu) {
  std::vector<Atom> atoms;
  for (const Atom& a : nu.atoms()) {
    const int j = rng.uniform_int(-3, 3);
    if (rng.uniform() < 0.3) {
      const int k = j + rng.uniform_int(1, 3);
      const double f = rng.uniform(0.2, 0.8);
      atoms.push_back({a.position + kTwoPi * j, f * a.weight.real()});
      atoms.push_back({a.position + kTwoPi * k, (1.0 - f) * a.weight.real()});
    } else {
      atoms.push_back({a.position + kTwoPi * j, a.weight});
    }
  }
  double partial = 0.0;
  for (std::size_t i = 0; i + 1 < atoms.size(); ++i) partial += atoms[i].weight.real();
  atoms.back().weight = 1.0 - partial;
  return RawPointMeasure(std::move(atoms), true);
}

struct PositiveCase {
  Scenario scenario;
  RawPointMeasure mu_q_raw;
  Positivity lower = Positivity::kInfeasible;  // classification at order L-1
};

// Positive scenarios with d <= 8 and L in {1, 2, 3}, rho from the LP.
std::vector<PositiveCase> positive_cases(int count, std::uint64_t seed, int& attempts) {
  std::vector<PositiveCase> cases;
  attempts = 0;
  for (int i = 0; static_cast<int>(cases.size()) < count; ++i) {
    Rng rng(mix_seed(seed, static_cast<std::uint64_t>(i)));
    const int L = 1 + i % 3;
    const int d = rng.uniform_int(2 * L + 1, 8);
    ++attempts;
    const ReducedMeasure nu = random_reduced(rng, d);
    const auto solution = solve_rho_nonneg(nu, L);
    if (classify(solution) != Positivity::kPositive) continue;
    PositiveCase c;
    c.scenario = build_scenario(nu, L, solution->rho);
    c.mu_q_raw = random_lift(rng, nu);
    c.lower = classify(solve_rho_nonneg(nu, L - 1));
    cases.push_back(std::move(c));
  }
  return cases;
}

CriterionResult shifted_sine_identity() {
  CriterionResult r{1, "shifted sine sum identity", false, {}};
  const auto start = std::chrono::steady_clock::now();
  double worst = 0.0;
  for (int p = 2; p <= 128; ++p) worst = std::max(worst, std::abs(shifted_sine_sum(p) - 1.0));
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  r.passed = worst < 1e-10 && secs < 1.0;
  r.detail = printf_string("p=2..128 max |sum-1| = %.3g, %.3g s", worst, secs);
  return r;
}

CriterionResult equidistant_probabilities() {
  CriterionResult r{2, "equidistant orthogonal probabilities", false, {}};
  double worst_p = 0.0, worst_sum = 0.0;
  for (int p : {4, 8, 16}) {
    SpectrumRequest req;
    req.kind = SpectrumKind::kEquidistant;
    req.d = p;
    const RawPointMeasure raw = gen_spectrum(req);
    const ReducedMeasure nu = reduce(raw);
    const Scenario sc = build_scenario(nu, p - 1, std::vector<double>(p, 1.0));
    if (std::abs(sc.zeta - 1.0) > 1e-12) {
      r.detail = printf_string("p=%d: zeta = %.17g", p, sc.zeta);
      return r;
    }
    const AnticipationReport rep = anticipation_amplitudes(sc, lift_joint_measure(sc, raw), p - 1);
    double sum = 0.0;
    for (int n = 0; n < p; ++n) {
      const double s = std::sin(kPi * (n + 0.5) / p);
      const double expected = 1.0 / (static_cast<double>(p) * p * s * s);
      worst_p = std::max(worst_p, std::abs(rep.probs[n] - expected));
      sum += rep.probs[n];
    }
    worst_sum = std::max(worst_sum, std::abs(sum - 1.0));
  }
  r.passed = worst_p < 1e-10 && worst_sum < 1e-10;
  r.detail = printf_string("p in {4,8,16}: max |p_n - closed form| = %.3g, max |sum - 1| = %.3g",
                           worst_p, worst_sum);
  return r;
}

CriterionResult uniform_cell_model() {
  CriterionResult r{3, "uniform-cell model", false, {}};
  const auto start = std::chrono::steady_clock::now();
  const int L = 64;
  const ModelResult m = model_measure(ModelKind::kUniform, L, 2048, 1.0, 0.1);
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const double max_p = *std::max_element(m.probs.begin(), m.probs.end());
  const double rel_max = std::abs(max_p / m.predicted_max - 1.0);
  const double rel_pl = std::abs(m.P_L / m.predicted_PL - 1.0);
  const int mid = (L + 1) / 2;
  const double rel_mid = std::abs(m.probs[mid] / m.predicted_min - 1.0);
  r.passed = rel_max <= 0.05 && rel_pl <= 0.03 && rel_mid <= 0.25 && secs < 10.0;
  r.detail = printf_string(
      "max p_n %.5f (rel %.3g), P_L %.5f (rel %.3g), p_%d %.3g vs %.3g (rel %.3g), %.3g s", max_p,
      rel_max, m.P_L, rel_pl, mid, m.probs[mid], m.predicted_min, rel_mid, secs);
  return r;
}

CriterionResult alternating_cell_model() {
  CriterionResult r{4, "alternating-cell model", false, {}};
  const int L = 64;
  const ModelResult m = model_measure(ModelKind::kAlternating, L, 2048, 1.0, 0.1);
  const double rel_pl = std::abs(m.P_L / m.predicted_PL - 1.0);
  const int argmax = static_cast<int>(std::max_element(m.probs.begin(), m.probs.end()) -
                                      m.probs.begin());
  const int mid = (L + 1) / 2;
  r.passed = rel_pl <= 0.05 && std::abs(argmax - mid) <= 1;
  r.detail = printf_string("P_L %.5f vs %.5f (rel %.3g), argmax %d (target %d +- 1)", m.P_L,
                           m.predicted_PL, rel_pl, argmax, mid);
  return r;
}

CriterionResult order1_vs_lp() {
  CriterionResult r{5, "order-1 criterion vs LP", false, {}};
  const auto start = std::chrono::steady_clock::now();
  int compared = 0, skipped = 0, disagreements = 0;
  for (int i = 0; i < 1000; ++i) {
    Rng rng(mix_seed(5005, static_cast<std::uint64_t>(i)));
    const ReducedMeasure nu = random_reduced(rng, 3 + i % 6);
    if (std::abs(circular_span(nu) - kPi) <= 1e-6) {
      ++skipped;
      continue;
    }
    ++compared;
    const bool lp_positive = classify(solve_rho_nonneg(nu, 1)) == Positivity::kPositive;
    if (lp_positive != order1_criterion(nu)) ++disagreements;
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  r.passed = disagreements == 0 && secs < 30.0;
  r.detail = printf_string("%d compared, %d skipped, %d disagreements, %.3g s", compared,
                           skipped, disagreements, secs);
  return r;
}

CriterionResult prony_round_trip() {
  CriterionResult r{6, "Prony round trip", false, {}};
  double worst_pos = 0.0, worst_w = 0.0;
  for (int i = 0; i < 100; ++i) {
    const int d = 1 + i % 8;
    const ReducedMeasure nu = gen_separated_spectrum(d, 0.3, 6006 + i, true);
    const RecoveredSpectrum rec = recover_from_amplitudes(amplitudes(nu, 2 * d - 1), d);
    const auto atoms = nu.atoms();
    for (int m = 0; m < d; ++m) {
      worst_pos = std::max(worst_pos, circular_distance(rec.kappas[m], atoms[m].position));
      worst_w = std::max(worst_w, std::abs(rec.weights[m] - atoms[m].weight.real()));
    }
  }
  r.passed = worst_pos <= 1e-6 && worst_w <= 1e-6;
  r.detail = printf_string("100 measures: max position error %.3g, max weight error %.3g",
                           worst_pos, worst_w);
  return r;
}

CriterionResult delta_amplitude_inversion() {
  CriterionResult r{7, "inversion of delta amplitudes", false, {}};
  std::vector<cplx> b(65, 0.0);
  b[0] = 1.0;
  const AmplitudeSequence beta = AmplitudeSequence::from_nonnegative(b);
  const InversionResult inv = reconstruct(beta, 64, uniform_grid(1001), Smoothing::kNone);
  double err_nu = 0.0, err_F = 0.0;
  for (std::size_t j = 0; j < inv.grid.size(); ++j) {
    const double k = inv.grid[j];
    const double nu = 0.5 * (1.0 + k / kPi);
    const double F = (-1.0 - 2.0 * k / kPi - k * k / (kPi * kPi)) / 8.0;
    err_nu = std::max(err_nu, std::abs(inv.nu_samples[j] - nu));
    err_F = std::max(err_F, std::abs(inv.F_samples[j] - F));
  }
  r.passed = err_nu <= 1e-12 && err_F <= 1e-12;
  r.detail = printf_string("1001 points: max nu error %.3g, max F error %.3g", err_nu, err_F);
  return r;
}

CriterionResult periodic_amplitude_inversion() {
  CriterionResult r{8, "inversion of period-4 amplitudes", false, {}};
  const int N = 4096;
  std::vector<cplx> b(N + 1, 0.0);
  for (int n = 0; n <= N; n += 4) b[n] = 1.0;
  const AmplitudeSequence beta = AmplitudeSequence::from_nonnegative(b);
  const std::vector<double> jumps = {-kPi, -kPi / 2, 0.0, kPi / 2};
  std::vector<Atom> atoms;
  for (double k : jumps) atoms.push_back({k, 0.25});
  const ReducedMeasure truth(atoms, true);

  const InversionResult inv = reconstruct(beta, N, uniform_grid(2001), Smoothing::kCesaro);
  double worst = 0.0;
  int checked = 0;
  for (std::size_t j = 0; j < inv.grid.size(); ++j) {
    const double k = inv.grid[j];
    double dist = kTwoPi;
    for (double x : jumps) dist = std::min(dist, circular_distance(k, x));
    if (dist < 0.1) continue;
    ++checked;
    worst = std::max(worst, std::abs(inv.nu_samples[j] - cumulative_oracle(truth, k)));
  }
  const PeakReport peaks = point_spectrum_consistency(beta, N);
  bool peaks_ok = peaks.peaks.size() == 4;
  double worst_mass = 0.0, worst_pos = 0.0;
  for (std::size_t i = 0; peaks_ok && i < 4; ++i) {
    worst_mass = std::max(worst_mass, std::abs(peaks.peaks[i].mass - 0.25));
    worst_pos = std::max(worst_pos, circular_distance(peaks.peaks[i].position, jumps[i]));
  }
  peaks_ok = peaks_ok && worst_mass <= 0.02 && worst_pos <= 1e-3;
  r.passed = worst <= 0.01 && peaks_ok;
  r.detail = printf_string(
      "%d grid points: max |nu - m/4| %.3g; %zu peaks, max |mass - 1/4| %.3g, max position "
      "error %.3g",
      checked, worst, peaks.peaks.size(), worst_mass, worst_pos);
  return r;
}

CriterionResult dirichlet_decay() {
  CriterionResult r{9, "Dirichlet pairing decay at an isolated atom", false, {}};
  // 0.3 at 0 plus 0.7 spread uniformly over 1/4 <= |x| < 1/2.
  constexpr int K = 20000;
  std::vector<Atom> atoms;
  atoms.push_back({0.0, 0.3});
  for (int j = 0; j < K; ++j) {
    const double x = 0.25 + (j + 0.5) * 0.25 / K;
    atoms.push_back({kTwoPi * x, 0.35 / K});
    atoms.push_back({-kTwoPi * x, 0.35 / K});
  }
  KernelProbe probe;
  probe.alpha = 0.0;
  for (int k = 4; k <= 10; ++k) probe.N_list.push_back((1 << k) + 1);
  const auto rows = convergence_table(atoms, probe, PairingKind::kDirichlet, 0.3 * probe.phi(0.0));
  const double slope = loglog_slope(rows);
  r.passed = slope <= -0.9;
  r.detail = printf_string("N=17..1025: error %.3g -> %.3g, log-log slope %.3f",
                           rows.front().abs_err, rows.back().abs_err, slope);
  return r;
}

CriterionResult time_average_bound() {
  CriterionResult r{10, "time average bound", false, {}};
  bool ok = true;
  std::string detail;
  for (int p : {4, 8, 16}) {
    const ReducedMeasure nu = equidistant(p);
    const TimeAverageResult t = time_average(nu.atoms(), 1.0, p - 1.0, 1e-4);
    ok = ok && t.error_estimate < 1e-6 && t.value <= 1.0 + 1e-6;
    detail += printf_string("p=%d: %.9f (halving %.2g)  ", p, t.value, t.error_estimate);
  }
  r.passed = ok;
  r.detail = detail;
  return r;
}

CriterionResult positive_scenario_properties() {
  CriterionResult r{11, "positive scenario properties", false, {}};
  int attempts = 0;
  const auto cases = positive_cases(500, 1111, attempts);
  int chain = 0, norm = 0, support = 0, nesting = 0;
  double worst_slack = 0.0;
  for (const PositiveCase& c : cases) {
    const Scenario& sc = c.scenario;
    const RawPointMeasure mu_s = lift_joint_measure(sc, c.mu_q_raw);
    const AnticipationReport rep = anticipation_amplitudes(sc, mu_s, sc.L);
    const StrengthBounds b = strength_bound_check(sc, spectral_difference(mu_s), rep);
    worst_slack = std::min({worst_slack, b.zeta2_y2 - b.PL, b.zeta2 - b.zeta2_y2, 1.0 - b.zeta2});
    if (!b.holds) ++chain;
    if (std::abs(sc.norm1 - 1.0) > 1e-8) ++norm;
    for (const Atom& a : sc.nu_s.atoms()) {
      if (!sc.nu_q.find(a.position)) {
        ++support;
        break;
      }
    }
    if (c.lower != Positivity::kPositive) ++nesting;
  }
  r.passed = chain == 0 && norm == 0 && support == 0 && nesting == 0;
  r.detail = printf_string(
      "%zu scenarios (%d draws): chain failures %d (min slack %.3g), norm failures %d, support "
      "failures %d, nesting violations %d",
      cases.size(), attempts, chain, worst_slack, norm, support, nesting);
  return r;
}

CriterionResult amplitude_route_equivalence() {
  CriterionResult r{12, "amplitude route equivalence", false, {}};
  double worst = 0.0;
  for (int i = 0; i < 200; ++i) {
    Rng rng(mix_seed(1212, static_cast<std::uint64_t>(i)));
    const int d = rng.uniform_int(1, 8);
    const ReducedMeasure nu = random_reduced(rng, d);
    const RawPointMeasure raw = random_lift(rng, nu);
    const SpectralDifference diff = spectral_difference(raw);
    for (int n = 0; n <= 64; ++n) {
      worst = std::max(worst,
                       std::abs(fourier(raw, n + 0.5) - difference_transform(diff, n + 0.5)));
    }
  }
  r.passed = worst <= 1e-10;
  r.detail = printf_string("200 measures, n <= 64: max route difference %.3g", worst);
  return r;
}

CriterionResult stochastic_strength(int threads) {
  CriterionResult r{13, "stochastic strength bound", false, {}};
  const int p = 8, L = 3;
  const Scenario sc = build_scenario(equidistant(p), L, std::vector<double>(p, 1.0));
  const ExpectedStrength e =
      expected_strength(sc, StochasticDifferenceModel::uniform(p, 0.0, 1.0, 1313), 10000, threads);
  int attempts = 0;
  int square_failures = pure_point_square_bound(sc) ? 0 : 1;
  const auto cases = positive_cases(200, 1314, attempts);
  for (const PositiveCase& c : cases) {
    if (!pure_point_square_bound(c.scenario)) ++square_failures;
  }
  r.passed = e.holds && square_failures == 0;
  r.detail = printf_string(
      "E(P_L) %.5f +- %.2g vs bound %.5f; (L+1) sum sigma^2 <= (sum sigma)^2 failures %d of %zu",
      e.estimate, e.std_error, e.bound, square_failures, cases.size() + 1);
  return r;
}

}  // namespace

CriterionResult run_criterion(int id, int threads) {
  static const char* const names[kCriterionCount] = {
      "shifted sine sum identity",        "equidistant orthogonal probabilities",
      "uniform-cell model",               "alternating-cell model",
      "order-1 criterion vs LP",          "Prony round trip",
      "inversion of delta amplitudes",    "inversion of period-4 amplitudes",
      "Dirichlet pairing decay at an isolated atom", "time average bound",
      "positive scenario properties",     "amplitude route equivalence",
      "stochastic strength bound"};
  if (id < 1 || id > kCriterionCount) return {id, "unknown criterion", false, "no such id"};
  const auto start = std::chrono::steady_clock::now();
  CriterionResult r;
  try {
    switch (id) {
      case 1: r = shifted_sine_identity(); break;
      case 2: r = equidistant_probabilities(); break;
      case 3: r = uniform_cell_model(); break;
      case 4: r = alternating_cell_model(); break;
      case 5: r = order1_vs_lp(); break;
      case 6: r = prony_round_trip(); break;
      case 7: r = delta_amplitude_inversion(); break;
      case 8: r = periodic_amplitude_inversion(); break;
      case 9: r = dirichlet_decay(); break;
      case 10: r = time_average_bound(); break;
      case 11: r = positive_scenario_properties(); break;
      case 12: r = amplitude_route_equivalence(); break;
      case 13: r = stochastic_strength(threads); break;
    }
  } catch (const std::exception& e) {
    r = {id, names[id - 1], false, std::string("exception: ") + e.what()};
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

std::vector<CriterionResult> run_acceptance(int threads) {
  std::vector<CriterionResult> results;
  for (int id = 1; id <= kCriterionCount; ++id) results.push_back(run_criterion(id, threads));
  return results;
}

std::string format_result(const CriterionResult& r) {
  return printf_string("[%s] %2d %s: %s (%.2f s)", r.passed ? "PASS" : "FAIL", r.id,
                       r.name.c_str(), r.detail.c_str(), r.seconds);
}

}  // namespace alab
