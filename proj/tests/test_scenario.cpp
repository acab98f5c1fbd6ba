#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "alab/errors.hpp"
#include "alab/scenario.hpp"
#include "oracles.hpp"

using namespace alab;

namespace {

ReducedMeasure equal_weights(std::vector<double> kappas) {
  std::vector<Atom> atoms;
  const int d = static_cast<int>(kappas.size());
  double partial = 0.0;
  for (int m = 0; m < d; ++m) {
    const double w = m + 1 == d ? 1.0 - partial : 1.0 / d;
    partial += w;
    atoms.push_back({kappas[m], w});
  }
  return ReducedMeasure(atoms, true);
}

// Independent residual of the duality system.
double oracle_residual(const ReducedMeasure& nu, int L, const std::vector<double>& rho) {
  const auto k = nu.kappas();
  const auto w = nu.real_weights();
  const auto g = oracle::duality_matrix(k, w, L);
  double worst = 0.0;
  for (std::size_t r = 0; r < g.size(); ++r) {
    double s = 0.0;
    for (std::size_t n = 0; n < k.size(); ++n) s += g[r][n] * rho[n];
    worst = std::max(worst, std::abs(s - (r == 0 ? 1.0 : 0.0)));
  }
  return worst;
}

}  // namespace

TEST_CASE("min-norm rho agrees with the normal-equation oracle") {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const int d = 3 + static_cast<int>(seed % 6);
    const int L = 1 + static_cast<int>(seed % ((d - 1) / 2));
    const ReducedMeasure nu = gen_separated_spectrum(d, 0.2, seed, true);
    const auto rho = solve_rho(nu, L, RhoSolver::kMinNorm);
    const auto expected = oracle::min_norm_rho(nu.kappas(), nu.real_weights(), L);
    REQUIRE(expected.has_value());
    for (int n = 0; n < d; ++n) CHECK(std::abs(rho[n] - (*expected)[n]) < 1e-9);
    CHECK(oracle_residual(nu, L, rho) < 1e-10);
    CHECK(duality_residual(nu, L, rho) < 1e-10);
  }
}

TEST_CASE("order zero gives rho = 1") {
  const ReducedMeasure nu = equal_weights({-1.0, 0.5, 2.0});
  for (RhoSolver s : {RhoSolver::kMinNorm, RhoSolver::kPartition}) {
    for (double r : solve_rho(nu, 0, s)) CHECK(r == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("partition solver is piecewise constant and feasible") {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const int d = 5 + static_cast<int>(seed % 5);
    const int L = 1 + static_cast<int>(seed % 2);
    const ReducedMeasure nu = gen_separated_spectrum(d, 0.2, seed, seed % 2 == 0);
    const auto rho = solve_rho(nu, L, RhoSolver::kPartition);
    CHECK(oracle_residual(nu, L, rho) < 1e-8);
    int distinct = 1;
    for (int n = 1; n < d; ++n) {
      if (std::abs(rho[n] - rho[n - 1]) > 1e-12) ++distinct;
    }
    CHECK(distinct <= 2 * L + 1);
  }
  CHECK_THROWS_AS(solve_rho(equal_weights({-1.0, 0.0, 1.0}), 2, RhoSolver::kPartition),
                  DomainError);
  CHECK_THROWS_AS(solve_rho(equal_weights({-1.0, 0.0, 1.0, 2.0}), 2, RhoSolver::kPartition),
                  PartitionDegenerateError);
}

TEST_CASE("homogeneous solutions span a space of dimension d - (2L+1)") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const int d = 4 + static_cast<int>(seed % 6);
    const int L = 1 + static_cast<int>(seed % ((d - 1) / 2));
    const ReducedMeasure nu = gen_separated_spectrum(d, 0.2, seed, true);
    const auto basis = homogeneous_solutions(nu, L);
    CHECK(basis.size() == static_cast<std::size_t>(d - (2 * L + 1)));
    const auto g = oracle::duality_matrix(nu.kappas(), nu.real_weights(), L);
    for (const auto& h : basis) {
      double norm = 0.0;
      for (double v : h) norm += v * v;
      CHECK(norm > 0.5);
      for (const auto& row : g) {
        double s = 0.0;
        for (int n = 0; n < d; ++n) s += row[n] * h[n];
        CHECK(std::abs(s) < 1e-10);
      }
    }
  }
}

TEST_CASE("infeasible duality systems are reported") {
  // Two atoms cannot satisfy three independent constraints.
  CHECK_THROWS_AS(solve_rho(equal_weights({-2.0, 2.0}), 1, RhoSolver::kMinNorm), DomainError);
  const ReducedMeasure nu = equal_weights({-2.0, 2.0, 2.5});
  // Three atoms at order 1: a square system, always solvable for distinct atoms.
  CHECK_NOTHROW(solve_rho(nu, 1, RhoSolver::kMinNorm));
}

TEST_CASE("LP margin maximizes the smallest rho") {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const int d = 4 + static_cast<int>(seed % 5);
    const ReducedMeasure nu = gen_separated_spectrum(d, 0.2, seed, true);
    const auto sol = solve_rho_nonneg(nu, 1);
    REQUIRE(sol.has_value());
    CHECK(oracle_residual(nu, 1, sol->rho) < 1e-8);
    CHECK(*std::min_element(sol->rho.begin(), sol->rho.end()) ==
          doctest::Approx(sol->margin).epsilon(1e-9));
    // Any particular solution has a smaller minimum.
    const auto mn = solve_rho(nu, 1, RhoSolver::kMinNorm);
    CHECK(*std::min_element(mn.begin(), mn.end()) <= sol->margin + 1e-9);
    // Shifting along a random homogeneous direction cannot raise the minimum.
    oracle::Gen g(seed);
    for (const auto& h : homogeneous_solutions(nu, 1)) {
      const double t = g.uniform(-0.1, 0.1);
      double m = 1e300;
      for (int n = 0; n < d; ++n) m = std::min(m, sol->rho[n] + t * h[n]);
      CHECK(m <= sol->margin + 1e-9);
    }
  }
  CHECK(classify(std::nullopt) == Positivity::kInfeasible);
  CHECK(classify(NonnegSolution{{}, 1e-3}) == Positivity::kPositive);
  CHECK(classify(NonnegSolution{{}, 0.0}) == Positivity::kBoundary);
  CHECK(classify(NonnegSolution{{}, -1e-3}) == Positivity::kNegative);
  CHECK(std::string(to_string(Positivity::kBoundary)) == "boundary");
}

TEST_CASE("order-1 criterion uses the circular support") {
  // Support {-2, 2} lies in a half circle around pi: not positive.
  CHECK_FALSE(order1_criterion(equal_weights({-2.0, 2.0})));
  // Wraps around the seam within a short arc.
  const ReducedMeasure wrap_arc = equal_weights({-3.0, -2.9, 3.0});
  CHECK(circular_span(wrap_arc) == doctest::Approx(0.1 + (2 * oracle::pi - 6.0)).epsilon(1e-12));
  CHECK_FALSE(order1_criterion(wrap_arc));
  CHECK(order1_criterion(equal_weights({-2.0, 0.0, 2.0})));
  CHECK(classify(solve_rho_nonneg(equal_weights({-2.0, 0.0, 2.0}), 1)) == Positivity::kPositive);
  CHECK(circular_span(equal_weights({0.5})) == 0.0);

  int compared = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const ReducedMeasure nu = positivity_probe_sample(3 + trial % 4, 77, trial);
    const Positivity p = classify(solve_rho_nonneg(nu, 1));
    if (p == Positivity::kBoundary) continue;
    CHECK(order1_criterion(nu) == (p == Positivity::kPositive));
    ++compared;
  }
  CHECK(compared > 290);
}

TEST_CASE("characteristic polynomial coefficients") {
  const double one[] = {0.0};
  const auto p1 = char_poly_from_spectrum(one);
  REQUIRE(p1.degree() == 1);
  CHECK(std::abs(p1.a[1] - 1.0) < 1e-15);

  const double two[] = {0.0, -kPi};
  const auto p2 = char_poly_from_spectrum(two);
  CHECK(std::abs(p2.a[1]) < 1e-15);
  CHECK(std::abs(p2.a[2] - 1.0) < 1e-15);

  const double dup[] = {0.3, 0.3};
  CHECK_THROWS_AS(char_poly_from_spectrum(dup), DomainError);

  oracle::Gen g(9);
  for (int trial = 0; trial < 50; ++trial) {
    const int d = g.integer(1, 9);
    std::vector<double> k(d);
    std::vector<oracle::cplx> omega(d);
    for (int i = 0; i < d; ++i) {
      k[i] = g.uniform(-kPi, kPi);
      omega[i] = std::polar(1.0, -k[i]);
    }
    const auto e = oracle::elementary_symmetric(omega);
    const auto poly = char_poly_from_spectrum(k);
    for (int j = 1; j <= d; ++j) {
      const double sign = j % 2 == 1 ? 1.0 : -1.0;
      CHECK(std::abs(poly.a[j] - sign * e[j]) < 1e-12);
    }
    // Unit-circle roots: conj(a_j) = -conj(a_d) a_{d-j} for 0 < j < d.
    for (int j = 1; j < d; ++j) {
      CHECK(std::abs(std::conj(poly.a[j]) + std::conj(poly.a[d]) * poly.a[d - j]) < 1e-12);
    }
    // Every exp(-i kappa) is a root of the ascending form.
    const auto asc = poly.ascending();
    for (const auto& w : omega) {
      oracle::cplx v = 0.0;
      for (int i = d; i >= 0; --i) v = v * w + asc[i];
      CHECK(std::abs(v) < 1e-11);
    }
  }
}

TEST_CASE("Prony recovery round trip and failure modes") {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const int d = 1 + static_cast<int>(seed % 7);
    const ReducedMeasure nu = gen_separated_spectrum(d, 0.3, seed, true);
    const AmplitudeSequence beta = amplitudes(nu, 2 * d);
    const RecoveredSpectrum rec = recover_from_amplitudes(beta, d);
    REQUIRE(rec.kappas.size() == static_cast<std::size_t>(d));
    for (std::size_t i = 0; i < rec.kappas.size(); ++i) {
      const auto idx = nu.find(rec.kappas[i], 1e-8);
      REQUIRE(idx.has_value());
      CHECK(std::abs(rec.weights[i] - nu.atoms()[*idx].weight.real()) < 1e-8);
    }
    CHECK(rec.condition.max_unit_deviation < 1e-8);
  }
  const ReducedMeasure two = equal_weights({-1.0, 1.0});
  CHECK_THROWS_AS(recover_from_amplitudes(amplitudes(two, 2), 2), DomainError);
  // Asking for more atoms than present leaves the Hankel system singular.
  CHECK_THROWS_AS(recover_from_amplitudes(amplitudes(two, 8), 3), IllConditionedError);
  // Amplitudes of a measure with a root off the unit circle.
  std::vector<cplx> decaying;
  for (int n = 0; n < 4; ++n) decaying.push_back(0.5 * std::pow(0.8, n) + 0.5 * std::polar(1.0, -1.0 * n));
  CHECK_THROWS_AS(recover_from_amplitudes(AmplitudeSequence::from_nonnegative(decaying), 2),
                  NonUnitRootError);
}

TEST_CASE("construct nu_q from nu_s") {
  oracle::Gen g(21);
  int built = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const int d = g.integer(2, 7);
    const ReducedMeasure nu_s = gen_separated_spectrum(d, 0.2, 100 + trial, true);
    std::vector<std::size_t> part;
    for (int i = 0; i < d; ++i) {
      if (g.uniform() < 0.5) part.push_back(i);
    }
    if (part.empty() || part.size() == static_cast<std::size_t>(d)) continue;
    double b = 1.0;
    for (std::size_t i : part) b -= nu_s.atoms()[i].weight.real();
    const double zeta = g.uniform(0.05, 1.0);
    if (zeta * zeta <= b) {
      CHECK_THROWS_AS(construct_nu_q_from_nu_s(nu_s, zeta, part), DomainError);
      continue;
    }
    const auto c = construct_nu_q_from_nu_s(nu_s, zeta, part);
    const double a = 1.0 - b;
    CHECK(std::abs(a * c.x + b * c.y - zeta) < 1e-12);
    CHECK(std::abs(a * c.x * c.x + b * c.y * c.y - 1.0) < 1e-12);
    CHECK(c.x > 0.0);
    CHECK(c.x <= 1.0 + 1e-15);
    CHECK(c.y >= 1.0 - 1e-15);
    CHECK(c.nu_q.total_mass().real() == doctest::Approx(1.0).epsilon(1e-12));
    ++built;
  }
  CHECK(built > 20);

  const ReducedMeasure nu_s = equal_weights({-1.0, 0.0, 1.0});
  const std::size_t a_set[] = {0};
  const auto same = construct_nu_q_from_nu_s(nu_s, 1.0, a_set);
  CHECK(same.nu_q.atoms()[1].weight == nu_s.atoms()[1].weight);
  CHECK_THROWS_AS(construct_nu_q_from_nu_s(nu_s, 0.0, a_set), DomainError);
  const std::size_t all[] = {0, 1, 2};
  CHECK_THROWS_AS(construct_nu_q_from_nu_s(nu_s, 0.9, all), DomainError);
}

TEST_CASE("property: scenario invariants") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const int d = 3 + static_cast<int>(seed % 6);
    const int L = 1 + static_cast<int>(seed % ((d - 1) / 2));
    const ReducedMeasure nu = gen_separated_spectrum(d, 0.15, 500 + seed, seed % 3 != 0);
    const Scenario sc = build_scenario(nu, L, solve_rho(nu, L, RhoSolver::kMinNorm));
    CHECK(sc.residual < 1e-10);
    CHECK(sc.norm1 >= 1.0 - 1e-12);
    CHECK(sc.zeta <= 1.0 + 1e-12);
    CHECK(sc.zeta > 0.0);
    CHECK(sc.nu_s.total_mass().real() == doctest::Approx(1.0).epsilon(1e-12));
    double r0 = 0.0, min_rho = 1e300;
    for (int n = 0; n < d; ++n) {
      r0 += sc.rho[n] * sc.rho[n] * nu.atoms()[n].weight.real();
      min_rho = std::min(min_rho, sc.rho[n]);
      CHECK(sc.sign_fn[n] == (sc.rho[n] < 0 ? -1 : 1));
    }
    CHECK(sc.r0_norm == doctest::Approx(std::sqrt(r0)).epsilon(1e-12));
    CHECK(sc.positive == (min_rho > -1e-9));
    // Positive scenarios have norm1 = 1 exactly, since sum rho w = 1.
    if (sc.positive) CHECK(sc.norm1 == doctest::Approx(1.0).epsilon(1e-9));
  }
  const ReducedMeasure nu = equal_weights({-1.0, 0.0, 1.0});
  CHECK_THROWS_AS(build_scenario(nu, 1, {1.0, 1.0, 2.0}), ContractError);
  CHECK_THROWS_AS(build_scenario(nu, 3, {1.0, 1.0, 1.0}), DomainError);
}

TEST_CASE("positivity probe is thread independent and nested") {
  const auto one = probe_positivity_domain(5, 2, 120, 31, 1);
  const auto three = probe_positivity_domain(5, 2, 120, 31, 3);
  CHECK(one.positive == three.positive);
  CHECK(one.boundary == three.boundary);
  CHECK(one.negative == three.negative);
  CHECK(one.infeasible == three.infeasible);
  CHECK(one.positive_lower == three.positive_lower);
  CHECK(one.positive + one.boundary + one.negative + one.infeasible == 120);
  CHECK(one.nesting_violations == 0);
  CHECK(one.positive <= one.positive_lower);
  CHECK_THROWS_AS(probe_positivity_domain(2, 2, 10, 1), DomainError);
}
