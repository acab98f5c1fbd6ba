#pragma once

// Delta-functional probes of atomic measures: pairings with scaled bump
// functions and with Dirichlet kernels over a ladder of N, and time
// averages of |mu^(t)|^2.

#include <span>
#include <string>
#include <vector>

#include "alab/measure.hpp"

namespace alab {

// Even bumps supported in (-1/2, 1/2) with value 1 at 0:
//   poly  (1 - 4x^2)^3                 integral 16/35
//   exp   exp(1 - 1 / (1 - 4x^2))      integral by quadrature
class TestFunction {
 public:
  enum class Kind { kPolyBump, kExpBump };

  explicit TestFunction(Kind kind = Kind::kPolyBump) : kind_(kind) {}
  static TestFunction parse(const std::string& name);

  double operator()(double x) const;
  double integral() const;
  const char* name() const;

 private:
  Kind kind_;
};

struct KernelProbe {
  double alpha = 0.0;        // Hoelder exponent in [0, 1]
  std::vector<int> N_list;   // strictly increasing
  TestFunction phi;
  TestFunction psi;

  // Throws DomainError on alpha outside [0, 1] or a non-increasing ladder.
  void validate() const;
};

// N^alpha sum_atoms w Psi(N kappa) phi(kappa)
cplx scaled_test_pairing(std::span<const Atom> atoms, const KernelProbe& probe, int N);

// sin(pi N x) / sin(pi x), equal to N at x = 0.
double dirichlet_kernel(int N, double x);

// N^(alpha-1) sum_atoms w D_N(x) phi(x) with x = kappa / (2 pi), which maps
// K onto I = [-1/2, 1/2). For odd N, D_N(x) = sum_{|n|<N/2} e^{2 pi i n x}.
cplx dirichlet_pairing(std::span<const Atom> atoms, const KernelProbe& probe, int N);

enum class PairingKind { kScaled, kDirichlet };

struct ConvergenceRow {
  int N = 0;
  cplx value = 0.0;
  double abs_err = 0.0;   // |value - target|
  bool diverged = false;  // |value| above the ceiling
};

std::vector<ConvergenceRow> convergence_table(std::span<const Atom> atoms,
                                              const KernelProbe& probe, PairingKind kind,
                                              cplx target, double ceiling = 1e8);

// Least-squares slope of log(err) against log(N).
double loglog_slope(std::span<const ConvergenceRow> rows);

struct TimeAverageResult {
  double T = 0.0;
  double alpha = 0.0;
  double quad_step = 0.0;
  double value = 0.0;
  double error_estimate = 0.0;  // |value(step) - value(step / 2)|
};

// T^(alpha-1) * integral over [-T/2, T/2] of |fourier(m, t)|^2, composite
// trapezoid with T / ceil(T / dt) panels. value reports the halved-step
// result.
TimeAverageResult time_average(std::span<const Atom> atoms, double alpha, double T, double dt);

}  // namespace alab
