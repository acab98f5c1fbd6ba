#pragma once

#include <complex>
#include <span>
#include <vector>

namespace alab {

struct RootsResult {
  std::vector<std::complex<double>> roots;
  int iterations = 0;
  bool converged = false;
};

// All roots of the polynomial sum_k coeffs[k] z^k (ascending order, leading
// coefficient non-zero) by Aberth-Ehrlich simultaneous iteration.
//
// Starting points are spread on a circle whose radius is the geometric mean
// of the root moduli (|c_0/c_n|^(1/n)), slightly rotated off the real axis so
// that symmetric configurations do not stall. Each sweep updates every
// estimate in place (Gauss-Seidel style) with
//
//   z_k <- z_k - w_k / (1 - w_k * sum_{j != k} 1/(z_k - z_j)),  w_k = p/p'.
//
// Iteration stops when every correction is below 16 eps |z_k|, after which
// two Newton steps polish each root against the original coefficients.
RootsResult aberth_roots(std::span<const std::complex<double>> coeffs,
                         int max_iterations = 500);

// Horner evaluation of p and p' at z.
void evaluate_with_derivative(std::span<const std::complex<double>> coeffs,
                              std::complex<double> z, std::complex<double>& p,
                              std::complex<double>& dp);

}  // namespace alab
