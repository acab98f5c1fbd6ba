#pragma once

// Reconstruction of the cumulative function nu(kappa) = nu([-pi, kappa))
// and of its double integral F from truncated amplitude sequences.
//
//   2 pi nu(kappa)    = i S(kappa) + A + beta_0 kappa,
//   (2 pi)^2 F(kappa) = B(kappa) + c - A kappa - beta_0 kappa^2 / 2,
//
// with S = sum_{0<|n|<=N} f_n beta_{-n} / n e^{-in kappa},
//      B = sum_{0<|n|<=N} f_n beta_{-n} / n^2 e^{-in kappa},
// f_n = 1 or the Cesaro factor 1 - |n|/(N+1). The reflection makes this the
// inverse of amplitudes(), whose beta_n carry e^{-in kappa}. F' = -nu / (2 pi),
// and the constants A, c come from nu(-pi) = 0 and F(-pi) = 0.
//
// An atom sitting on the seam -pi needs care: the series converges to the
// midpoint of the jump there, so its mass is estimated separately from a
// Fejer mean at -pi and folded into A.

#include <string>
#include <vector>

#include "alab/measure.hpp"

namespace alab {

enum class Smoothing { kNone, kCesaro };

Smoothing parse_smoothing(const std::string& name);
const char* to_string(Smoothing s);

struct InversionResult {
  int N_trunc = 0;
  Smoothing smoothing = Smoothing::kNone;
  std::vector<double> grid;
  std::vector<cplx> nu_samples;
  std::vector<cplx> F_samples;
  cplx affine_A = 0.0;     // constant term of 2 pi nu
  cplx const_c = 0.0;      // constant term of (2 pi)^2 F
  cplx quad_coeff = 0.0;   // kappa^2 coefficient of (2 pi)^2 F, i.e. -beta_0 / 2
  cplx seam_mass = 0.0;    // mass attributed to an atom at -pi
  double tail_bound = 0.0; // bound on the omitted part of B: 2 |beta_0| sum_{n>N} n^-2
};

// n points kappa_j = -pi + 2 pi j / n.
std::vector<double> uniform_grid(int n);

// Fills both nu and F samples.
InversionResult reconstruct(const AmplitudeSequence& beta, int N, const std::vector<double>& grid,
                            Smoothing smoothing);
// Same computation; kept as separate entry points for the two quantities.
InversionResult reconstruct_nu(const AmplitudeSequence& beta, int N,
                               const std::vector<double>& grid, Smoothing smoothing);
InversionResult reconstruct_F(const AmplitudeSequence& beta, int N,
                              const std::vector<double>& grid,
                              Smoothing smoothing = Smoothing::kNone);

// Brute-force nu([-pi, kappa)): total weight of atoms with position < kappa.
cplx cumulative_oracle(const ReducedMeasure& m, double kappa);

struct Peak {
  double position = 0.0;
  double mass = 0.0;
};

struct PeakReport {
  int N = 0;
  std::vector<Peak> peaks;  // sorted by position
};

// Local maxima of the Fejer mean sum_{|n|<=N} (1 - |n|/(N+1)) beta_n e^{in kappa},
// which tends to (N+1) times the atom weight at each atom. Peaks whose
// mass (value / (N+1)) is below mass_threshold * |beta_0| are dropped;
// the default sits above the Fejer side lobes (about 4.5% of the main lobe).
PeakReport point_spectrum_consistency(const AmplitudeSequence& beta, int N,
                                      double mass_threshold = 0.05);

}  // namespace alab
