#include <doctest.h>

#include <cmath>

#include "alab/errors.hpp"
#include "alab/measure.hpp"
#include "oracles.hpp"

using namespace alab;

namespace {

RawPointMeasure random_raw(oracle::Gen& g, int d, double span, bool complex_weights) {
  std::vector<Atom> atoms;
  double total = 0.0;
  std::vector<double> w(d);
  for (double& x : w) total += (x = g.uniform(0.1, 1.0));
  for (int m = 0; m < d; ++m) {
    cplx weight = w[m] / total;
    if (complex_weights) weight = cplx(g.uniform(-1, 1), g.uniform(-1, 1));
    atoms.push_back({g.uniform(-span, span), weight});
  }
  if (!complex_weights) {
    double partial = 0.0;
    for (int m = 0; m + 1 < d; ++m) partial += atoms[m].weight.real();
    atoms.back().weight = 1.0 - partial;
  }
  return RawPointMeasure(atoms, !complex_weights);
}

}  // namespace

TEST_CASE("shift maps [0, 2pi) onto K") {
  CHECK(shift(0.0) == 0.0);
  CHECK(shift(kPi) == -kPi);
  CHECK(shift(1.5 * kPi) == doctest::Approx(-0.5 * kPi).epsilon(1e-15));
  CHECK(shift(3.0) == 3.0);
  CHECK_THROWS_AS(shift(-0.1), DomainError);
  CHECK_THROWS_AS(shift(kTwoPi), DomainError);
}

TEST_CASE("reduce sums congruent atoms") {
  const ReducedMeasure one = reduce(RawPointMeasure({{kTwoPi + 0.5, 1.0}}, true));
  REQUIRE(one.size() == 1);
  CHECK(one.atoms()[0].position == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(one.atoms()[0].weight == cplx(1.0));

  const ReducedMeasure merged = reduce(RawPointMeasure({{0.0, 0.5}, {kTwoPi, 0.5}}, true));
  REQUIRE(merged.size() == 1);
  CHECK(std::abs(merged.atoms()[0].position) < 1e-15);
  CHECK(merged.atoms()[0].weight.real() == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("hydrogen levels reduce to distinct atoms at the scalar representative") {
  SpectrumRequest req;
  req.kind = SpectrumKind::kHydrogen;
  req.d = 8;
  req.scale = 100.0;
  const RawPointMeasure raw = gen_spectrum(req);
  const ReducedMeasure nu = reduce(raw);
  REQUIRE(nu.size() == 8);
  for (int n = 1; n <= 8; ++n) {
    const double lambda = -100.0 / (n * n);
    const double expected = oracle::mod_into(lambda, 2 * oracle::pi, -oracle::pi);
    const auto idx = nu.find(expected, 1e-12);
    REQUIRE(idx.has_value());
    CHECK(nu.atoms()[*idx].weight.real() == doctest::Approx(0.125));
  }
}

TEST_CASE("fourier examples") {
  const RawPointMeasure single({{0.0, 1.0}}, true);
  for (double t : {0.0, 0.7, -3.2, 100.5}) CHECK(std::abs(fourier(single, t) - 1.0) < 1e-15);

  const RawPointMeasure pair({{-1.0, 0.5}, {1.0, 0.5}}, true);
  CHECK(std::abs(fourier(pair, 1.0) - std::cos(1.0)) < 1e-15);

  for (int p : {2, 3, 5, 8}) {
    SpectrumRequest req;
    req.d = p;
    const ReducedMeasure nu = reduce(gen_spectrum(req));
    for (int n = -20; n <= 20; ++n) {
      // The grid starts at -pi, so multiples of p pick up (-1)^n.
      const double expected = n % p != 0 ? 0.0 : (n % 2 == 0 ? 1.0 : -1.0);
      CHECK(std::abs(fourier(nu, n) - expected) < 1e-13);
    }
  }
}

TEST_CASE("amplitudes match direct summation") {
  const ReducedMeasure single({{0.0, 1.0}}, true);
  const AmplitudeSequence b1 = amplitudes(single, 10);
  for (int n = -10; n <= 10; ++n) CHECK(std::abs(b1[n] - 1.0) < 1e-15);

  oracle::Gen g(42);
  std::vector<Atom> atoms;
  std::vector<double> k(4), w(4);
  double total = 0.0;
  for (int m = 0; m < 4; ++m) {
    k[m] = g.uniform(-3.0, 3.0);
    total += (w[m] = g.uniform(0.2, 1.0));
  }
  double partial = 0.0;
  for (int m = 0; m < 4; ++m) {
    w[m] = m == 3 ? 1.0 - partial : w[m] / total;
    partial += w[m];
    atoms.push_back({k[m], w[m]});
  }
  const AmplitudeSequence beta = amplitudes(ReducedMeasure(atoms, true), 12);
  for (int n = -12; n <= 12; ++n) {
    oracle::cplx direct = 0.0;
    for (int m = 0; m < 4; ++m) direct += w[m] * oracle::cplx(std::cos(n * k[m]), -std::sin(n * k[m]));
    CHECK(std::abs(beta[n] - direct) < 1e-14);
    CHECK(std::abs(beta[-n] - std::conj(beta[n])) < 1e-15);
    CHECK(std::abs(beta[n]) <= beta[0].real() + 1e-15);
  }
  CHECK(beta[0] == cplx(1.0));
  CHECK_THROWS_AS(beta.at(13), DomainError);
}

TEST_CASE("gen_spectrum contracts") {
  SpectrumRequest req;
  req.kind = SpectrumKind::kEquidistant;
  req.d = 4;
  const RawPointMeasure eq = gen_spectrum(req);
  REQUIRE(eq.size() == 4);
  for (int m = 0; m < 4; ++m) {
    CHECK(eq.atoms()[m].position == doctest::Approx(-kPi + kTwoPi * m / 4).epsilon(1e-15));
    CHECK(eq.atoms()[m].weight.real() == doctest::Approx(0.25).epsilon(1e-15));
  }

  req.kind = SpectrumKind::kHydrogen;
  req.d = 3;
  const RawPointMeasure h = gen_spectrum(req);
  CHECK(h.atoms()[0].position == -1.0);
  CHECK(h.atoms()[1].position == -0.25);
  CHECK(h.atoms()[2].position == doctest::Approx(-1.0 / 9.0).epsilon(1e-15));

  req.kind = SpectrumKind::kRandom;
  req.d = 5;
  req.seed = 7;
  const RawPointMeasure a = gen_spectrum(req), b = gen_spectrum(req);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a.atoms()[i].position == b.atoms()[i].position);
    CHECK(a.atoms()[i].weight == b.atoms()[i].weight);
  }
  req.seed = 8;
  CHECK(gen_spectrum(req).atoms()[0].position != a.atoms()[0].position);

  req.kind = SpectrumKind::kFile;
  req.file = "/nonexistent/measure.json";
  CHECK_THROWS_AS(gen_spectrum(req), InputError);
  CHECK_THROWS_AS(parse_spectrum_kind("gaussian"), DomainError);
}

TEST_CASE("measure validation") {
  CHECK_THROWS_AS(RawPointMeasure({}, false), DomainError);
  CHECK_THROWS_AS(RawPointMeasure({{0.0, 0.5}}, true), DomainError);
  CHECK_THROWS_AS(RawPointMeasure({{0.0, cplx(1.0, 0.1)}}, true), DomainError);
  CHECK_THROWS_AS(RawPointMeasure({{0.0, 1.5}, {1.0, -0.5}}, true), DomainError);
  CHECK_THROWS_AS(ReducedMeasure({{kPi, 1.0}}, true), DomainError);
  CHECK_NOTHROW(RawPointMeasure({{0.0, -2.0}}, false));

  // Atoms within the merge tolerance are combined, including across the seam.
  const RawPointMeasure near({{1.0, 0.25}, {1.0 + 5e-10, 0.75}}, true);
  CHECK(near.size() == 1);
  const ReducedMeasure seam({{-kPi, 0.5}, {kPi - 1e-10, 0.5}}, true);
  CHECK(seam.size() == 1);
  CHECK(seam.atoms()[0].position == -kPi);
}

TEST_CASE("property: reduction preserves mass and integer-time transforms") {
  oracle::Gen g(7);
  for (int trial = 0; trial < 200; ++trial) {
    const bool complex_weights = trial % 2 == 1;
    const RawPointMeasure m = random_raw(g, g.integer(1, 10), 60.0, complex_weights);
    const ReducedMeasure nu = reduce(m);
    CHECK(std::abs(nu.total_mass() - m.total_mass()) < 1e-13);
    for (int n = -16; n <= 16; ++n) {
      CHECK(std::abs(fourier(nu, n) - fourier(m, n)) < 1e-11);
    }
    const RawPointMeasure m4 = reduce_modulo(m, 2.0 * kTwoPi);
    CHECK(std::abs(m4.total_mass() - m.total_mass()) < 1e-13);
    for (int n = -16; n <= 16; ++n) {
      CHECK(std::abs(fourier(m4, n + 0.5) - fourier(m, n + 0.5)) < 1e-11);
    }
    for (const Atom& a : m4.atoms()) {
      CHECK(a.position >= -kTwoPi);
      CHECK(a.position < kTwoPi);
    }
  }
}

TEST_CASE("wrap lands in the window") {
  oracle::Gen g(3);
  for (int i = 0; i < 1000; ++i) {
    const double x = g.uniform(-1e3, 1e3);
    const double r = wrap(x, kTwoPi, -kPi);
    CHECK(r >= -kPi);
    CHECK(r < kPi);
    CHECK(std::abs(std::remainder(r - x, kTwoPi)) < 1e-11);
  }
  CHECK(wrap(-1e-18, kTwoPi, 0.0) < kTwoPi);
}

TEST_CASE("separated spectra respect the minimum gap") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const int d = 1 + static_cast<int>(seed % 8);
    const ReducedMeasure nu = gen_separated_spectrum(d, 0.3, seed, seed % 2 == 0);
    REQUIRE(nu.size() == static_cast<std::size_t>(d));
    const auto k = nu.kappas();
    for (int i = 0; i < d; ++i) {
      for (int j = i + 1; j < d; ++j) {
        const double gap = std::abs(std::remainder(k[i] - k[j], kTwoPi));
        CHECK(gap >= 0.3 - 1e-12);
      }
    }
    CHECK(nu.total_mass().real() == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK_THROWS_AS(gen_separated_spectrum(30, 0.3, 1, false), DomainError);
}
