#include "alab/inversion.hpp"

#include <algorithm>
#include <cmath>

#include "alab/errors.hpp"

namespace alab {
namespace {

constexpr int kResync = 64;

double cesaro(int n, int N, Smoothing s) {
  return s == Smoothing::kCesaro ? 1.0 - static_cast<double>(n) / (N + 1) : 1.0;
}

// sum_{0<|n|<=N} f_n beta_{-n} / n^power e^{-in kappa}. The sequence is
// reflected because beta_n = sum w e^{-in kappa} puts the measure's density
// at sum beta_n e^{+in kappa} / 2pi.
cplx series(const AmplitudeSequence& beta, int N, double kappa, int power, Smoothing s) {
  cplx sum = 0.0;
  cplx z = 1.0;
  const cplx step = std::polar(1.0, -kappa);
  for (int n = 1; n <= N; ++n) {
    z = n % kResync == 0 ? std::polar(1.0, -n * kappa) : z * step;
    const double scale = cesaro(n, N, s) / std::pow(static_cast<double>(n), power);
    const double neg_sign = power % 2 == 0 ? 1.0 : -1.0;
    sum += scale * (beta[-n] * z + neg_sign * beta[n] * std::conj(z));
  }
  return sum;
}

// (1/(N+1)) sum_{|n|<=N} (1 - |n|/(N+1)) beta_n e^{in kappa}
cplx fejer_mean(const AmplitudeSequence& beta, int N, double kappa) {
  cplx sum = beta[0];
  cplx z = 1.0;
  const cplx step = std::polar(1.0, kappa);
  for (int n = 1; n <= N; ++n) {
    z = n % kResync == 0 ? std::polar(1.0, n * kappa) : z * step;
    const double f = 1.0 - static_cast<double>(n) / (N + 1);
    sum += f * (beta[n] * z + beta[-n] * std::conj(z));
  }
  return sum / static_cast<double>(N + 1);
}

// Atoms keep their Fejer mean when N doubles; absolutely continuous mass
// near -pi decays like 1/N.
cplx seam_mass(const AmplitudeSequence& beta, int N) {
  const cplx full = fejer_mean(beta, N, -kPi);
  const cplx half = fejer_mean(beta, N / 2, -kPi);
  return std::abs(full) > 0.75 * std::abs(half) ? full : cplx(0.0);
}

void check_inputs(const AmplitudeSequence& beta, int N, const std::vector<double>& grid) {
  if (N < 1) throw DomainError("truncation N must be >= 1");
  if (beta.n_max() < N) throw DomainError("amplitudes must cover |n| <= N");
  for (double k : grid) {
    if (!(k >= -kPi && k < kPi)) throw DomainError("grid points must lie in [-pi, pi)");
  }
}

}  // namespace

Smoothing parse_smoothing(const std::string& name) {
  if (name == "none") return Smoothing::kNone;
  if (name == "cesaro") return Smoothing::kCesaro;
  throw DomainError("unknown smoothing: " + name);
}

const char* to_string(Smoothing s) { return s == Smoothing::kCesaro ? "cesaro" : "none"; }

std::vector<double> uniform_grid(int n) {
  if (n < 1) throw DomainError("grid needs at least one point");
  std::vector<double> g(n);
  for (int j = 0; j < n; ++j) g[j] = -kPi + kTwoPi * j / n;
  return g;
}

InversionResult reconstruct(const AmplitudeSequence& beta, int N, const std::vector<double>& grid,
                            Smoothing smoothing) {
  check_inputs(beta, N, grid);
  const cplx i(0.0, 1.0);
  const cplx b0 = beta[0];

  InversionResult r;
  r.N_trunc = N;
  r.smoothing = smoothing;
  r.grid = grid;
  r.seam_mass = seam_mass(beta, N);
  r.affine_A = b0 * kPi + kPi * r.seam_mass - i * series(beta, N, -kPi, 1, smoothing);
  const cplx slope = -r.affine_A;
  r.quad_coeff = -0.5 * b0;
  r.const_c = -series(beta, N, -kPi, 2, smoothing) + slope * kPi + 0.5 * b0 * kPi * kPi;

  double inv_sq = 0.0;
  for (int n = 1; n <= N; ++n) inv_sq += 1.0 / (static_cast<double>(n) * n);
  r.tail_bound = 2.0 * std::abs(b0) * std::max(0.0, kPi * kPi / 6.0 - inv_sq);

  r.nu_samples.resize(grid.size());
  r.F_samples.resize(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const double k = grid[j];
    if (k == -kPi) {
      r.nu_samples[j] = 0.0;
      r.F_samples[j] = 0.0;
      continue;
    }
    const cplx S = series(beta, N, k, 1, smoothing);
    const cplx B = series(beta, N, k, 2, smoothing);
    r.nu_samples[j] = (i * S + r.affine_A + b0 * k) / kTwoPi;
    r.F_samples[j] = (B + r.const_c + slope * k + r.quad_coeff * k * k) / (kTwoPi * kTwoPi);
  }
  return r;
}

InversionResult reconstruct_nu(const AmplitudeSequence& beta, int N,
                               const std::vector<double>& grid, Smoothing smoothing) {
  return reconstruct(beta, N, grid, smoothing);
}

InversionResult reconstruct_F(const AmplitudeSequence& beta, int N,
                              const std::vector<double>& grid, Smoothing smoothing) {
  return reconstruct(beta, N, grid, smoothing);
}

cplx cumulative_oracle(const ReducedMeasure& m, double kappa) {
  cplx sum = 0.0;
  for (const Atom& a : m.atoms()) {
    if (a.position < kappa) sum += a.weight;
  }
  return sum;
}

PeakReport point_spectrum_consistency(const AmplitudeSequence& beta, int N,
                                      double mass_threshold) {
  if (N < 1) throw DomainError("truncation N must be >= 1");
  if (beta.n_max() < N) throw DomainError("amplitudes must cover |n| <= N");
  const int points = std::max(64, 4 * (N + 1));
  const double h = kTwoPi / points;
  std::vector<double> value(points);
  for (int j = 0; j < points; ++j) value[j] = std::abs(fejer_mean(beta, N, -kPi + j * h));

  PeakReport report;
  report.N = N;
  const double floor = mass_threshold * std::abs(beta[0]);
  for (int j = 0; j < points; ++j) {
    const double left = value[(j + points - 1) % points];
    const double right = value[(j + 1) % points];
    if (!(value[j] >= left && value[j] > right) || value[j] < floor) continue;
    // Golden-section refinement on [x - h, x + h].
    double a = -kPi + (j - 1) * h, b = -kPi + (j + 1) * h;
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = b - g * (b - a), d = a + g * (b - a);
    double fc = std::abs(fejer_mean(beta, N, c)), fd = std::abs(fejer_mean(beta, N, d));
    for (int it = 0; it < 60 && b - a > 1e-13; ++it) {
      if (fc > fd) {
        b = d;
        d = c;
        fd = fc;
        c = b - g * (b - a);
        fc = std::abs(fejer_mean(beta, N, c));
      } else {
        a = c;
        c = d;
        fc = fd;
        d = a + g * (b - a);
        fd = std::abs(fejer_mean(beta, N, d));
      }
    }
    const double x = 0.5 * (a + b);
    report.peaks.push_back({wrap(x, kTwoPi, -kPi), std::abs(fejer_mean(beta, N, x))});
  }
  std::sort(report.peaks.begin(), report.peaks.end(),
            [](const Peak& p, const Peak& q) { return p.position < q.position; });
  return report;
}

}  // namespace alab
