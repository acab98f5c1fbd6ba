#include "alab/roots.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "alab/errors.hpp"

namespace alab {

void evaluate_with_derivative(std::span<const std::complex<double>> coeffs,
                              std::complex<double> z, std::complex<double>& p,
                              std::complex<double>& dp) {
  p = 0.0;
  dp = 0.0;
  for (std::size_t k = coeffs.size(); k-- > 0;) {
    dp = dp * z + p;
    p = p * z + coeffs[k];
  }
}

RootsResult aberth_roots(std::span<const std::complex<double>> coeffs,
                         int max_iterations) {
  using C = std::complex<double>;
  if (coeffs.size() < 2 || coeffs.back() == C(0.0)) {
    throw DomainError("aberth_roots: need degree >= 1 with non-zero leading coefficient");
  }
  const int degree = static_cast<int>(coeffs.size()) - 1;
  RootsResult result;
  if (degree == 1) {
    result.roots = {-coeffs[0] / coeffs[1]};
    result.converged = true;
    return result;
  }

  double radius = std::pow(std::abs(coeffs[0] / coeffs.back()), 1.0 / degree);
  if (!(radius > 0.0) || !std::isfinite(radius)) radius = 1.0;
  std::vector<C> z(degree);
  for (int k = 0; k < degree; ++k) {
    const double angle = 2.0 * std::numbers::pi * k / degree + 0.4;
    z[k] = std::polar(radius, angle);
  }

  const double eps = std::numeric_limits<double>::epsilon();
  for (int iter = 1; iter <= max_iterations; ++iter) {
    bool done = true;
    for (int k = 0; k < degree; ++k) {
      C p, dp;
      evaluate_with_derivative(coeffs, z[k], p, dp);
      if (p == C(0.0)) continue;
      const C ratio = p / dp;
      C repulsion = 0.0;
      for (int j = 0; j < degree; ++j) {
        if (j != k) repulsion += 1.0 / (z[k] - z[j]);
      }
      const C step = ratio / (1.0 - ratio * repulsion);
      z[k] -= step;
      if (std::abs(step) > 16.0 * eps * std::max(std::abs(z[k]), 1e-300)) done = false;
    }
    result.iterations = iter;
    if (done) {
      result.converged = true;
      break;
    }
  }

  for (C& root : z) {
    for (int polish = 0; polish < 2; ++polish) {
      C p, dp;
      evaluate_with_derivative(coeffs, root, p, dp);
      if (dp == C(0.0)) break;
      root -= p / dp;
    }
  }
  result.roots = std::move(z);
  return result;
}

}  // namespace alab
