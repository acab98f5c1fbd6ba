#include "alab/measure.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "alab/errors.hpp"
#include "alab/io.hpp"
#include "alab/rng.hpp"

namespace alab {
namespace {

void sort_atoms(std::vector<Atom>& atoms) {
  std::sort(atoms.begin(), atoms.end(),
            [](const Atom& a, const Atom& b) { return a.position < b.position; });
}

// Merges consecutive atoms within kMergeTolerance of the first atom of their
// run. Input must be sorted.
std::vector<Atom> merge_sorted(const std::vector<Atom>& atoms) {
  std::vector<Atom> out;
  out.reserve(atoms.size());
  for (const Atom& a : atoms) {
    if (!out.empty() && a.position - out.back().position <= kMergeTolerance) {
      out.back().weight += a.weight;
    } else {
      out.push_back(a);
    }
  }
  return out;
}

void validate(const std::vector<Atom>& atoms, bool probability) {
  if (atoms.empty()) throw DomainError("measure must contain at least one atom");
  for (const Atom& a : atoms) {
    if (!std::isfinite(a.position) || !std::isfinite(a.weight.real()) ||
        !std::isfinite(a.weight.imag())) {
      throw DomainError("measure atoms must be finite");
    }
  }
  if (!probability) return;
  double total = 0.0;
  for (const Atom& a : atoms) {
    if (a.weight.imag() != 0.0 || !(a.weight.real() > 0.0)) {
      throw DomainError("probability measure requires real, strictly positive weights");
    }
    total += a.weight.real();
  }
  if (std::abs(total - 1.0) > kProbabilityTolerance) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "probability measure weights sum to " << total;
    throw DomainError(msg.str());
  }
}

cplx sum_weights(std::span<const Atom> atoms) {
  cplx total = 0.0;
  for (const Atom& a : atoms) total += a.weight;
  return total;
}

}  // namespace

RawPointMeasure::RawPointMeasure(std::vector<Atom> atoms, bool probability)
    : probability_(probability) {
  validate(atoms, false);
  sort_atoms(atoms);
  atoms_ = merge_sorted(atoms);
  validate(atoms_, probability);
}

cplx RawPointMeasure::total_mass() const { return sum_weights(atoms_); }

ReducedMeasure::ReducedMeasure(std::vector<Atom> atoms, bool probability)
    : probability_(probability) {
  validate(atoms, false);
  for (const Atom& a : atoms) {
    if (a.position < -kPi || a.position >= kPi) {
      throw DomainError("reduced measure positions must lie in [-pi, pi)");
    }
  }
  sort_atoms(atoms);
  atoms_ = merge_sorted(atoms);
  // Seam: an atom just below pi collides with one at -pi.
  if (atoms_.size() > 1 &&
      atoms_.front().position + kTwoPi - atoms_.back().position <= kMergeTolerance) {
    atoms_.front().weight += atoms_.back().weight;
    atoms_.pop_back();
  }
  validate(atoms_, probability);
}

cplx ReducedMeasure::total_mass() const { return sum_weights(atoms_); }

std::vector<double> ReducedMeasure::kappas() const {
  std::vector<double> out;
  out.reserve(atoms_.size());
  for (const Atom& a : atoms_) out.push_back(a.position);
  return out;
}

std::vector<double> ReducedMeasure::real_weights() const {
  std::vector<double> out;
  out.reserve(atoms_.size());
  for (const Atom& a : atoms_) out.push_back(a.weight.real());
  return out;
}

std::optional<std::size_t> ReducedMeasure::find(double kappa, double tol) const {
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    double gap = std::abs(atoms_[i].position - kappa);
    gap = std::min(gap, kTwoPi - gap);
    if (gap <= tol) return i;
  }
  return std::nullopt;
}

AmplitudeSequence::AmplitudeSequence(int n_max, std::vector<cplx> values)
    : n_max_(n_max), values_(std::move(values)) {
  if (n_max < 0 || values_.size() != static_cast<std::size_t>(2 * n_max + 1)) {
    throw DomainError("amplitude sequence needs 2*n_max + 1 values");
  }
}

AmplitudeSequence AmplitudeSequence::from_nonnegative(std::vector<cplx> beta_nonneg) {
  if (beta_nonneg.empty()) throw DomainError("amplitude sequence is empty");
  const int n_max = static_cast<int>(beta_nonneg.size()) - 1;
  std::vector<cplx> values(2 * n_max + 1);
  for (int n = 0; n <= n_max; ++n) {
    values[n_max + n] = beta_nonneg[n];
    values[n_max - n] = std::conj(beta_nonneg[n]);
  }
  values[n_max] = beta_nonneg[0];
  return AmplitudeSequence(n_max, std::move(values));
}

cplx AmplitudeSequence::operator[](int n) const { return values_[n + n_max_]; }

cplx AmplitudeSequence::at(int n) const {
  if (n < -n_max_ || n > n_max_) throw DomainError("amplitude index out of range");
  return values_[n + n_max_];
}

double shift(double kappa_raw) {
  if (!(kappa_raw >= 0.0 && kappa_raw < kTwoPi)) {
    throw DomainError("shift expects an argument in [0, 2pi)");
  }
  return kappa_raw < kPi ? kappa_raw : kappa_raw - kTwoPi;
}

double wrap(double x, double modulus, double window_start) {
  double r = std::fmod(x - window_start, modulus);
  if (r < 0.0) r += modulus;
  if (r >= modulus) r -= modulus;  // r + modulus may round up to modulus
  return window_start + r;
}

ReducedMeasure reduce(const RawPointMeasure& m) {
  std::vector<Atom> atoms;
  atoms.reserve(m.size());
  for (const Atom& a : m.atoms()) {
    const double r = wrap(a.position, kTwoPi, 0.0);
    atoms.push_back({shift(r), a.weight});
  }
  // Merging in the ReducedMeasure constructor sums each congruence class.
  return ReducedMeasure(std::move(atoms), m.probability());
}

RawPointMeasure reduce_modulo(const RawPointMeasure& m, double modulus,
                              std::optional<double> window_start) {
  if (!(modulus > 0.0)) throw DomainError("modulus must be positive");
  const double start = window_start.value_or(-0.5 * modulus);
  std::vector<Atom> atoms;
  atoms.reserve(m.size());
  for (const Atom& a : m.atoms()) {
    atoms.push_back({wrap(a.position, modulus, start), a.weight});
  }
  return RawPointMeasure(std::move(atoms), m.probability());
}

cplx fourier(std::span<const Atom> atoms, double t) {
  cplx sum = 0.0;
  for (const Atom& a : atoms) sum += a.weight * std::polar(1.0, -a.position * t);
  return sum;
}

AmplitudeSequence amplitudes(const ReducedMeasure& m, int n_max) {
  if (!m.probability()) throw DomainError("amplitudes require a probability measure");
  if (n_max < 0) throw DomainError("n_max must be non-negative");
  std::vector<cplx> beta(n_max + 1);
  for (int n = 0; n <= n_max; ++n) beta[n] = fourier(m, static_cast<double>(n));
  beta[0] = m.total_mass();
  return AmplitudeSequence::from_nonnegative(std::move(beta));
}

SpectrumKind parse_spectrum_kind(const std::string& name) {
  if (name == "equidistant") return SpectrumKind::kEquidistant;
  if (name == "random") return SpectrumKind::kRandom;
  if (name == "hydrogen") return SpectrumKind::kHydrogen;
  if (name == "file") return SpectrumKind::kFile;
  throw DomainError("unknown spectrum kind: " + name);
}

RawPointMeasure gen_spectrum(const SpectrumRequest& request) {
  if (request.kind == SpectrumKind::kFile) {
    std::ifstream in(request.file);
    if (!in) throw InputError("cannot read spectrum file: " + request.file);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return raw_measure_from_json_text(buffer.str());
  }
  if (request.d < 1) throw DomainError("spectrum dimension d must be >= 1");
  if (!(request.scale > 0.0) || !std::isfinite(request.scale)) {
    throw DomainError("spectrum scale must be positive");
  }
  const int d = request.d;
  const cplx w(1.0 / d, 0.0);
  std::vector<Atom> atoms;
  atoms.reserve(d);
  switch (request.kind) {
    case SpectrumKind::kEquidistant:
      for (int m = 0; m < d; ++m) {
        atoms.push_back({request.scale * (-kPi + kTwoPi * m / d), w});
      }
      break;
    case SpectrumKind::kRandom: {
      Rng rng(mix_seed(request.seed, 0));
      for (int m = 0; m < d; ++m) {
        atoms.push_back({request.scale * rng.uniform(-kPi, kPi), w});
      }
      break;
    }
    case SpectrumKind::kHydrogen:
      for (int n = 1; n <= d; ++n) {
        atoms.push_back({-request.scale / (static_cast<double>(n) * n), w});
      }
      break;
    case SpectrumKind::kFile:
      break;
  }
  // Equal weights 1/d need not sum to exactly 1 in floating point; the
  // last weight absorbs the rounding so the probability flag holds.
  double partial = 0.0;
  for (int m = 0; m + 1 < d; ++m) partial += atoms[m].weight.real();
  atoms.back().weight = 1.0 - partial;
  return RawPointMeasure(std::move(atoms), true);
}

ReducedMeasure gen_separated_spectrum(int d, double min_gap, std::uint64_t seed,
                                      bool random_weights) {
  if (d < 1) throw DomainError("d must be >= 1");
  if (!(min_gap >= 0.0) || d * min_gap >= kTwoPi) {
    throw DomainError("minimum gap too large for d atoms on the circle");
  }
  Rng rng(mix_seed(seed, 1));
  // Uniform d-point configuration with all circular gaps >= min_gap:
  // sorted uniforms on the reduced circle, re-inflated by m * min_gap.
  const double free_length = kTwoPi - d * min_gap;
  std::vector<double> u(d);
  for (double& x : u) x = rng.uniform(0.0, free_length);
  std::sort(u.begin(), u.end());
  const double offset = rng.uniform(0.0, kTwoPi);
  std::vector<Atom> atoms;
  atoms.reserve(d);
  std::vector<double> w(d, 1.0);
  if (random_weights) {
    for (double& x : w) x = rng.uniform(0.2, 1.0);
  }
  double total = 0.0;
  for (double x : w) total += x;
  double partial = 0.0;
  for (int m = 0; m < d; ++m) {
    const double kappa = wrap(u[m] + m * min_gap + offset, kTwoPi, -kPi);
    double weight = w[m] / total;
    if (m + 1 == d) weight = 1.0 - partial;
    partial += weight;
    atoms.push_back({kappa, weight});
  }
  return ReducedMeasure(std::move(atoms), true);
}

}  // namespace alab
