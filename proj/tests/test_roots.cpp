#include <doctest.h>

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "alab/roots.hpp"
#include "oracles.hpp"

using oracle::cplx;

namespace {

// Max over expected roots of the distance to the nearest found root.
double match_error(const std::vector<cplx>& found, const std::vector<cplx>& expected) {
  double worst = 0.0;
  for (const cplx& e : expected) {
    double best = 1e300;
    for (const cplx& f : found) best = std::min(best, std::abs(f - e));
    worst = std::max(worst, best);
  }
  return worst;
}

std::vector<cplx> poly_from_roots(const std::vector<cplx>& roots) {
  std::vector<cplx> c{1.0};
  for (const cplx& r : roots) {
    std::vector<cplx> next(c.size() + 1, 0.0);
    for (std::size_t k = 0; k < c.size(); ++k) {
      next[k + 1] += c[k];
      next[k] -= r * c[k];
    }
    c = next;
  }
  return c;
}

}  // namespace

TEST_CASE("quadratic and linear roots") {
  const std::vector<cplx> lin{-2.0, 1.0};
  const auto r1 = alab::aberth_roots(lin);
  REQUIRE(r1.roots.size() == 1);
  CHECK(std::abs(r1.roots[0] - 2.0) < 1e-15);

  const std::vector<cplx> quad{1.0, 0.0, 1.0};
  const auto r2 = alab::aberth_roots(quad);
  CHECK(r2.converged);
  CHECK(match_error(r2.roots, {cplx(0, 1), cplx(0, -1)}) < 1e-14);
}

TEST_CASE("roots of unity") {
  for (int d : {2, 3, 5, 8, 13, 24}) {
    std::vector<cplx> c(d + 1, 0.0);
    c[0] = -1.0;
    c[d] = 1.0;
    std::vector<cplx> expected;
    for (int k = 0; k < d; ++k) expected.push_back(std::polar(1.0, 2 * oracle::pi * k / d));
    const auto r = alab::aberth_roots(c);
    CHECK(r.converged);
    CHECK(match_error(r.roots, expected) < 1e-13);
  }
}

TEST_CASE("property: random unit-circle roots agree with the companion matrix") {
  oracle::Gen g(5);
  for (int trial = 0; trial < 100; ++trial) {
    const int d = g.integer(1, 12);
    std::vector<cplx> roots;
    for (int k = 0; k < d; ++k) roots.push_back(std::polar(1.0, g.uniform(-oracle::pi, oracle::pi)));
    const std::vector<cplx> c = poly_from_roots(roots);

    Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(d, d);
    for (int i = 1; i < d; ++i) companion(i, i - 1) = 1.0;
    for (int i = 0; i < d; ++i) companion(i, d - 1) = -c[i] / c[d];
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(companion);
    std::vector<cplx> eig(es.eigenvalues().data(), es.eigenvalues().data() + d);

    const auto r = alab::aberth_roots(c);
    REQUIRE(r.roots.size() == static_cast<std::size_t>(d));
    // Clustered roots are only determined to about sqrt(eps).
    double min_gap = 1.0;
    for (int i = 0; i < d; ++i) {
      for (int j = i + 1; j < d; ++j) min_gap = std::min(min_gap, std::abs(roots[i] - roots[j]));
    }
    const double tol = min_gap > 1e-2 ? 1e-9 : 1e-5;
    CHECK(match_error(r.roots, roots) < tol);
    CHECK(match_error(r.roots, eig) < tol);
    for (const cplx& z : r.roots) {
      cplx p, dp;
      alab::evaluate_with_derivative(c, z, p, dp);
      CHECK(std::abs(p) < 1e-10);
    }
  }
}
