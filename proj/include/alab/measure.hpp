#pragma once

// Atomic spectral measures on the real line and on K = [-pi, pi), their
// reduction modulo 2*pi, Fourier transforms and amplitude sequences.
//
// Positions are dimensionless phases (E*T/hbar with T/hbar = 1).

#include <complex>
#include <cstdint>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace alab {

using cplx = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Atoms closer than this (absolute, phase units) are merged.
inline constexpr double kMergeTolerance = 1e-9;
// Total-mass tolerance for probability-flagged measures.
inline constexpr double kProbabilityTolerance = 1e-12;

struct Atom {
  double position;
  cplx weight;
};

// Finite list of atoms on the real line (raw spectral lift).
class RawPointMeasure {
 public:
  RawPointMeasure() = default;
  // Sorts, merges atoms within kMergeTolerance and validates. Throws
  // DomainError on an empty list, non-finite positions, or a violated
  // probability flag.
  RawPointMeasure(std::vector<Atom> atoms, bool probability);

  std::span<const Atom> atoms() const { return atoms_; }
  std::size_t size() const { return atoms_.size(); }
  bool probability() const { return probability_; }
  cplx total_mass() const;

 private:
  std::vector<Atom> atoms_;
  bool probability_ = false;
};

// Finite list of atoms on K = [-pi, pi). Atoms within kMergeTolerance
// (circularly, so -pi and pi - 1e-10 collide) are merged.
class ReducedMeasure {
 public:
  ReducedMeasure() = default;
  ReducedMeasure(std::vector<Atom> atoms, bool probability);

  std::span<const Atom> atoms() const { return atoms_; }
  std::size_t size() const { return atoms_.size(); }
  bool probability() const { return probability_; }
  cplx total_mass() const;

  std::vector<double> kappas() const;
  std::vector<double> real_weights() const;
  // Index of the atom at `kappa` (circular distance <= tol), if any.
  std::optional<std::size_t> find(double kappa, double tol = kMergeTolerance) const;

 private:
  std::vector<Atom> atoms_;
  bool probability_ = false;
};

// Primary amplitudes beta_n for |n| <= n_max.
class AmplitudeSequence {
 public:
  AmplitudeSequence() = default;
  // values[i] holds beta_{i - n_max}; size must be 2*n_max + 1.
  AmplitudeSequence(int n_max, std::vector<cplx> values);
  // Builds beta_{-n} = conj(beta_n) from the non-negative half.
  static AmplitudeSequence from_nonnegative(std::vector<cplx> beta_nonneg);

  int n_max() const { return n_max_; }
  cplx operator[](int n) const;
  cplx at(int n) const;

 private:
  int n_max_ = -1;
  std::vector<cplx> values_;
};

// Maps [0, 2pi) onto K: x for x < pi, x - 2pi otherwise.
double shift(double kappa_raw);

// Representative of x modulo `modulus` in [window_start, window_start + modulus).
double wrap(double x, double modulus, double window_start);

// Reduction modulo 2pi onto K; congruent atoms are summed.
ReducedMeasure reduce(const RawPointMeasure& m);

// Reduction modulo an arbitrary period onto [window_start, window_start + modulus),
// window_start defaulting to -modulus/2. The result stays a raw measure.
RawPointMeasure reduce_modulo(const RawPointMeasure& m, double modulus,
                              std::optional<double> window_start = std::nullopt);

// sum_atoms weight * exp(-i * position * t)
cplx fourier(std::span<const Atom> atoms, double t);
inline cplx fourier(const RawPointMeasure& m, double t) { return fourier(m.atoms(), t); }
inline cplx fourier(const ReducedMeasure& m, double t) { return fourier(m.atoms(), t); }

AmplitudeSequence amplitudes(const ReducedMeasure& m, int n_max);

enum class SpectrumKind { kEquidistant, kRandom, kHydrogen, kFile };

SpectrumKind parse_spectrum_kind(const std::string& name);

struct SpectrumRequest {
  SpectrumKind kind = SpectrumKind::kEquidistant;
  int d = 1;
  std::uint64_t seed = 0;
  double scale = 1.0;
  std::string file;  // only for kFile
};

// Model spectra:
//   equidistant  scale * (-pi + 2 pi m / d), m = 0..d-1
//   random       d uniform positions in scale * [-pi, pi)
//   hydrogen     -scale / n^2, n = 1..d
//   file         measure JSON; weights taken from the file
// All generated kinds carry equal weights 1/d and are probability-flagged.
RawPointMeasure gen_spectrum(const SpectrumRequest& request);

// d atoms on K whose circular gaps are all >= min_gap, drawn uniformly from
// the admissible configurations. Weights are equal, or uniform in
// [0.2, 1] and normalized when random_weights is set.
ReducedMeasure gen_separated_spectrum(int d, double min_gap, std::uint64_t seed,
                                      bool random_weights);

}  // namespace alab
