#include "alab/anticipation.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "alab/errors.hpp"
#include "alab/parallel.hpp"
#include "alab/rng.hpp"

namespace alab {
namespace {

double index_sign(Direction direction) {
  return direction == Direction::kAnticipation ? 1.0 : -1.0;
}

void check_lift(const ReducedMeasure& nu_s, const RawPointMeasure& mu_s_raw) {
  const ReducedMeasure reduced = reduce(mu_s_raw);
  bool ok = reduced.size() == nu_s.size();
  for (std::size_t i = 0; ok && i < reduced.size(); ++i) {
    const Atom& a = reduced.atoms()[i];
    const Atom& b = nu_s.atoms()[i];
    ok = std::abs(a.position - b.position) <= kMergeTolerance &&
         std::abs(a.weight - b.weight) <= 1e-9;
  }
  if (!ok) throw DomainError("raw measure does not reduce to the scenario's nu_s");
}

}  // namespace

SpectralDifference spectral_difference(const RawPointMeasure& mu_s_raw) {
  if (!mu_s_raw.probability()) {
    throw DomainError("spectral difference needs a probability-flagged raw measure");
  }
  struct Piece {
    double kappa;
    double mass;
    int sheet;
  };
  std::vector<Piece> pieces;
  pieces.reserve(mu_s_raw.size());
  for (const Atom& a : mu_s_raw.atoms()) {
    const double r = wrap(a.position, 2.0 * kTwoPi, -kPi);
    if (r < kPi) {
      pieces.push_back({r, a.weight.real(), 0});
    } else {
      // r - 2pi can round up to pi when r sits just below 3pi.
      double kappa = r - kTwoPi;
      if (kappa >= kPi) kappa = -kPi;
      pieces.push_back({kappa, a.weight.real(), 1});
    }
  }
  std::sort(pieces.begin(), pieces.end(),
            [](const Piece& a, const Piece& b) { return a.kappa < b.kappa; });

  SpectralDifference diff;
  for (const Piece& p : pieces) {
    if (diff.entries.empty() || p.kappa - diff.entries.back().kappa > kMergeTolerance) {
      diff.entries.push_back({p.kappa, 0.0, 0.0, 0.0});
    }
    (p.sheet == 0 ? diff.entries.back().g0 : diff.entries.back().g1) += p.mass;
  }
  // An entry just below pi is the same circle point as one at -pi, seen
  // from the other sheet.
  auto& e = diff.entries;
  if (e.size() > 1 && e.front().kappa + kTwoPi - e.back().kappa <= kMergeTolerance) {
    e.front().g0 += e.back().g1;
    e.front().g1 += e.back().g0;
    e.pop_back();
  }
  for (DifferenceEntry& entry : e) {
    const double total = entry.g0 + entry.g1;
    entry.y = total > 0.0 ? (entry.g0 - entry.g1) / total : 0.0;
  }
  return diff;
}

cplx difference_transform(const SpectralDifference& diff, double s) {
  cplx sum = 0.0;
  for (const DifferenceEntry& e : diff.entries) {
    sum += (e.g0 - e.g1) * std::polar(1.0, -s * e.kappa);
  }
  return sum;
}

RawPointMeasure lift_joint_measure(const Scenario& scenario, const RawPointMeasure& mu_q_raw) {
  std::vector<Atom> atoms;
  atoms.reserve(mu_q_raw.size());
  for (const Atom& a : mu_q_raw.atoms()) {
    const double kappa = shift(wrap(a.position, kTwoPi, 0.0));
    const auto idx = scenario.nu_q.find(kappa);
    if (!idx) throw DomainError("raw atom does not reduce onto an atom of nu_q");
    const double factor = std::abs(scenario.rho[*idx]) / scenario.norm1;
    if (factor > 0.0) atoms.push_back({a.position, a.weight.real() * factor});
  }
  if (atoms.empty()) throw DomainError("lifted measure is empty");
  double total = 0.0;
  for (const Atom& a : atoms) total += a.weight.real();
  double partial = 0.0;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    double w = atoms[i].weight.real() / total;
    if (i + 1 == atoms.size()) w = 1.0 - partial;
    partial += w;
    atoms[i].weight = w;
  }
  return RawPointMeasure(std::move(atoms), true);
}

AnticipationReport anticipation_amplitudes(const Scenario& scenario,
                                           const RawPointMeasure& mu_s_raw, int N,
                                           Direction direction) {
  if (!scenario.positive) {
    throw ContractError("anticipation is defined only for positive evolutions");
  }
  if (N < 0) throw DomainError("N must be non-negative");
  check_lift(scenario.nu_s, mu_s_raw);
  const SpectralDifference diff = spectral_difference(mu_s_raw);

  AnticipationReport report;
  report.N = N;
  report.direction = direction;
  report.alphas.resize(N + 1);
  report.probs.resize(N + 1);
  const double sign = index_sign(direction);
  for (int n = 0; n <= N; ++n) {
    const double s = sign * n + 0.5;
    const cplx raw = scenario.zeta * fourier(mu_s_raw, s);
    const cplx folded = scenario.zeta * difference_transform(diff, s);
    report.route_discrepancy = std::max(report.route_discrepancy, std::abs(raw - folded));
    report.alphas[n] = raw;
    report.probs[n] = std::norm(raw);
  }
  if (report.route_discrepancy > kRouteTolerance) {
    std::ostringstream msg;
    msg << "amplitude routes disagree by " << report.route_discrepancy;
    throw ContractError(msg.str());
  }
  statistics(report, {});
  return report;
}

void statistics(AnticipationReport& report, std::span<const double> r_list, int fold_period) {
  const int count = std::min<int>(report.N, static_cast<int>(report.probs.size()));
  report.P_N = 0.0;
  for (int n = 0; n < count; ++n) report.P_N += report.probs[n];
  report.moments.clear();
  for (double r : r_list) {
    double sum = 0.0;
    for (int n = 0; n < count; ++n) {
      int k = n;
      if (fold_period > 0) {
        k = n % fold_period;
        if (2 * k > fold_period) k -= fold_period;
      }
      sum += std::pow(std::abs(static_cast<double>(k)), r) * report.probs[n];
    }
    report.moments.emplace_back(r, sum);
  }
}

double shifted_sine_sum(int p) {
  if (p < 2) throw DomainError("shifted_sine_sum needs p >= 2");
  double sum = 0.0;
  for (int n = 0; n < p; ++n) {
    const double s = std::sin(kPi * (n - 0.5) / p);
    sum += 1.0 / (static_cast<double>(p) * p * s * s);
  }
  return sum;
}

StrengthBounds strength_bound_check(const Scenario& scenario, const SpectralDifference& diff,
                                    const AnticipationReport& report) {
  if (report.N < scenario.L) throw DomainError("report must cover n = 0..L");
  StrengthBounds b;
  for (int n = 0; n <= scenario.L; ++n) b.PL += report.probs[n];
  double y2 = 0.0;
  for (const DifferenceEntry& e : diff.entries) y2 += e.y * e.y * (e.g0 + e.g1);
  b.zeta2 = scenario.zeta * scenario.zeta;
  b.zeta2_y2 = b.zeta2 * y2;
  constexpr double slack = 1e-9;
  b.holds = b.PL <= b.zeta2_y2 + slack && b.zeta2_y2 <= b.zeta2 + slack && b.zeta2 <= 1.0 + slack;
  return b;
}

StochasticDifferenceModel StochasticDifferenceModel::uniform(std::size_t atoms, double y1,
                                                             double y2, std::uint64_t seed) {
  return {std::vector<double>(atoms, y1), std::vector<double>(atoms, y2), seed};
}

TwoPoint two_point_law(double y1, double y2) {
  if (!(y1 >= -1.0 && y1 <= 1.0)) throw DomainError("mean y1 must lie in [-1, 1]");
  if (!(y2 >= 0.0) || y2 > 1.0 - y1 * y1 + 1e-12) {
    throw DomainError("variance y2 must satisfy 0 <= y2 <= 1 - y1^2");
  }
  if (y2 == 0.0) return {y1, y1, 1.0};
  const double s = std::sqrt(y2);
  double low = y1 - s, high = y1 + s;
  if (high > 1.0) {
    high = 1.0;
    low = y1 - y2 / (1.0 - y1);
  } else if (low < -1.0) {
    low = -1.0;
    high = y1 + y2 / (1.0 + y1);
  }
  low = std::max(low, -1.0);
  high = std::min(high, 1.0);
  return {low, high, (high - y1) / (high - low)};
}

ExpectedStrength expected_strength(const Scenario& scenario,
                                   const StochasticDifferenceModel& model, int trials,
                                   int threads) {
  if (!scenario.positive) throw ContractError("expected strength needs a positive scenario");
  if (trials < 2) throw DomainError("need at least two trials");
  const auto atoms = scenario.nu_s.atoms();
  const std::size_t d = atoms.size();
  if (model.y1.size() != d || model.y2.size() != d) {
    throw DomainError("model needs one (y1, y2) pair per atom of nu_s");
  }
  std::vector<TwoPoint> laws;
  laws.reserve(d);
  for (std::size_t m = 0; m < d; ++m) laws.push_back(two_point_law(model.y1[m], model.y2[m]));

  const int L = scenario.L;
  const double zeta = scenario.zeta;
  // phase[n][m] = sigma_m exp(-i(n+1/2)kappa_m)
  std::vector<std::vector<cplx>> phase(L, std::vector<cplx>(d));
  for (int n = 0; n < L; ++n) {
    for (std::size_t m = 0; m < d; ++m) {
      phase[n][m] = atoms[m].weight.real() * std::polar(1.0, -(n + 0.5) * atoms[m].position);
    }
  }

  std::vector<double> samples(trials);
  parallel_for(static_cast<std::size_t>(trials), threads, [&](std::size_t t) {
    Rng rng(mix_seed(model.seed, t));
    std::vector<double> y(d);
    for (std::size_t m = 0; m < d; ++m) {
      y[m] = rng.uniform() < laws[m].p_low ? laws[m].low : laws[m].high;
    }
    double pl = 0.0;
    for (int n = 0; n < L; ++n) {
      cplx alpha = 0.0;
      for (std::size_t m = 0; m < d; ++m) alpha += y[m] * phase[n][m];
      pl += std::norm(zeta * alpha);
    }
    samples[t] = pl;
  });

  ExpectedStrength out;
  out.trials = trials;
  double mean = 0.0;
  for (double s : samples) mean += s;
  mean /= trials;
  double var = 0.0;
  for (double s : samples) var += (s - mean) * (s - mean);
  var /= trials - 1;
  out.estimate = mean;
  out.std_error = std::sqrt(var / trials);

  double y1_term = 0.0, y2_term = 0.0;
  for (std::size_t m = 0; m < d; ++m) {
    const double sigma = atoms[m].weight.real();
    y1_term += model.y1[m] * model.y1[m] * sigma;
    y2_term += model.y2[m] * sigma * sigma;
    out.sum_sigma += sigma;
    out.sum_sigma_sq += sigma * sigma;
  }
  out.bound = zeta * zeta * (y1_term + L * y2_term);
  out.holds = out.estimate <= out.bound + 3.0 * out.std_error;
  return out;
}

bool pure_point_square_bound(const Scenario& scenario) {
  double sum = 0.0, sum_sq = 0.0;
  for (const Atom& a : scenario.nu_s.atoms()) {
    sum += a.weight.real();
    sum_sq += a.weight.real() * a.weight.real();
  }
  return (scenario.L + 1) * sum_sq <= sum * sum + 1e-12;
}

ModelResult model_measure(ModelKind kind, int L, int N, double c, double eps) {
  if (L < 1) throw DomainError("model needs L >= 1");
  if (N < 1) throw DomainError("model needs N >= 1");
  if (!(c > 0.0 && c <= 1.0)) throw DomainError("model needs 0 < c <= 1");
  if (!(eps > 0.0 && eps < 1.0)) throw DomainError("model needs 0 < eps < 1");
  const int M = static_cast<int>(std::lround(eps * N));
  if (M < 1) throw DomainError("eps * N rounds to zero cells");

  ModelResult out;
  out.kind = kind;
  out.L = L;
  out.M = M;
  out.N = N;
  out.c = c;
  out.eps = eps;

  std::vector<Atom> atoms;
  atoms.reserve(static_cast<std::size_t>(L) * M);
  for (int n = 0; n < L; ++n) {
    const double sign = kind == ModelKind::kAlternating && n % 2 == 1 ? -1.0 : 1.0;
    const double w = sign * c / (static_cast<double>(L) * M);
    for (int m = 0; m < M; ++m) {
      const double kappa = -kPi + kTwoPi * (n + (m + 0.5) / N) / L;
      atoms.push_back({kappa, w});
    }
  }
  out.x_s = ReducedMeasure(std::move(atoms), false);

  out.alphas.resize(L + 1);
  out.probs.resize(L + 1);
  out.predicted.resize(L + 1);
  for (int n = 0; n <= L; ++n) {
    out.alphas[n] = fourier(out.x_s, n + 0.5);
    out.probs[n] = std::norm(out.alphas[n]);
    const double theta = eps * kPi * (n + 0.5) / L;
    const double block = kPi * (n + 0.5) / L;
    const double denom = kind == ModelKind::kUniform ? std::sin(block) : std::cos(block);
    const double amp = c * std::sin(theta) / (L * theta * denom);
    out.predicted[n] = amp * amp;
  }
  for (int n = 0; n < L; ++n) out.P_L += out.probs[n];

  const double s = std::sin(eps * kPi / 2.0);
  const double base = 4.0 * c * c * s * s / (eps * eps * kPi * kPi);
  if (kind == ModelKind::kUniform) {
    out.predicted_max = 4.0 * c * c / (kPi * kPi);
    out.predicted_min = base / (static_cast<double>(L) * L);
    out.predicted_PL = c * c;
  } else {
    out.predicted_max = 4.0 * base / (kPi * kPi);
    out.predicted_min = c * c / (static_cast<double>(L) * L);
    out.predicted_PL = base;
  }
  return out;
}

}  // namespace alab
