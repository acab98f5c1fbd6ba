#include "alab/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Dense>

#include "alab/errors.hpp"
#include "alab/lp.hpp"
#include "alab/parallel.hpp"
#include "alab/rng.hpp"
#include "alab/roots.hpp"

namespace alab {
namespace {

void check_order(const ReducedMeasure& nu_q, int L) {
  if (!nu_q.probability()) throw DomainError("nu_q must be a probability measure");
  if (L < 0 || L >= static_cast<int>(nu_q.size())) {
    throw DomainError("order L must satisfy 0 <= L < d");
  }
}

// Rows: cos(k kappa_n) for k = 0..L, then sin(k kappa_n) for k = 1..L.
Eigen::MatrixXd trig_rows(const ReducedMeasure& nu_q, int L) {
  const auto d = static_cast<Eigen::Index>(nu_q.size());
  Eigen::MatrixXd G(2 * L + 1, d);
  const auto atoms = nu_q.atoms();
  for (Eigen::Index n = 0; n < d; ++n) {
    const double kappa = atoms[n].position;
    for (int k = 0; k <= L; ++k) G(k, n) = std::cos(k * kappa);
    for (int k = 1; k <= L; ++k) G(L + k, n) = std::sin(k * kappa);
  }
  return G;
}

Eigen::VectorXd weight_vector(const ReducedMeasure& nu_q) {
  const auto atoms = nu_q.atoms();
  Eigen::VectorXd w(static_cast<Eigen::Index>(atoms.size()));
  for (std::size_t n = 0; n < atoms.size(); ++n) w(n) = atoms[n].weight.real();
  return w;
}

Eigen::VectorXd unit_rhs(int L) {
  Eigen::VectorXd b = Eigen::VectorXd::Zero(2 * L + 1);
  b(0) = 1.0;
  return b;
}

std::vector<double> to_std(const Eigen::VectorXd& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

std::string residual_message(const char* what, double residual) {
  std::ostringstream msg;
  msg << what << " (duality residual " << residual << ")";
  return msg.str();
}

std::vector<double> solve_min_norm(const ReducedMeasure& nu_q, int L) {
  const Eigen::MatrixXd G = trig_rows(nu_q, L);
  const Eigen::VectorXd sqrt_w = weight_vector(nu_q).cwiseSqrt();
  // z = W^{1/2} rho minimizes |z|^2 subject to (G W^{1/2}) z = e_0.
  const Eigen::MatrixXd A = G * sqrt_w.asDiagonal();
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(A);
  cod.setThreshold(1e-12);
  const Eigen::VectorXd z = cod.solve(unit_rhs(L));
  return to_std(z.cwiseQuotient(sqrt_w));
}

std::vector<double> solve_partition(const ReducedMeasure& nu_q, int L) {
  const int d = static_cast<int>(nu_q.size());
  const int groups = 2 * L + 1;
  if (d < groups) {
    throw PartitionDegenerateError("partition solver needs at least 2L+1 atoms");
  }
  const Eigen::MatrixXd G = trig_rows(nu_q, L);
  const Eigen::VectorXd w = weight_vector(nu_q);
  std::vector<int> group_of(d);
  Eigen::MatrixXd C = Eigen::MatrixXd::Zero(groups, groups);
  for (int g = 0; g < groups; ++g) {
    const int begin = g * d / groups;
    const int end = (g + 1) * d / groups;
    double mass = 0.0;
    for (int n = begin; n < end; ++n) {
      group_of[n] = g;
      mass += w(n);
      C.col(g) += w(n) * G.col(n);
    }
    if (!(mass > 0.0)) throw PartitionDegenerateError("partition interval has zero mass");
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(C);
  lu.setThreshold(1e-12);
  Eigen::VectorXd piece;
  if (lu.isInvertible()) {
    piece = lu.solve(unit_rhs(L));
  } else {
    piece = C.completeOrthogonalDecomposition().solve(unit_rhs(L));
  }
  std::vector<double> rho(d);
  for (int n = 0; n < d; ++n) rho[n] = piece(group_of[n]);
  return rho;
}

}  // namespace

double duality_residual(const ReducedMeasure& nu_q, int L, std::span<const double> rho) {
  if (rho.size() != nu_q.size()) throw DomainError("rho must have one entry per atom");
  const auto atoms = nu_q.atoms();
  double worst = 0.0;
  for (int k = 0; k <= L; ++k) {
    double c = 0.0, s = 0.0;
    for (std::size_t n = 0; n < atoms.size(); ++n) {
      const double rw = rho[n] * atoms[n].weight.real();
      c += rw * std::cos(k * atoms[n].position);
      s += rw * std::sin(k * atoms[n].position);
    }
    worst = std::max(worst, std::abs(c - (k == 0 ? 1.0 : 0.0)));
    worst = std::max(worst, std::abs(s));
  }
  return worst;
}

std::vector<double> solve_rho(const ReducedMeasure& nu_q, int L, RhoSolver solver) {
  check_order(nu_q, L);
  std::vector<double> rho =
      solver == RhoSolver::kMinNorm ? solve_min_norm(nu_q, L) : solve_partition(nu_q, L);
  const double residual = duality_residual(nu_q, L, rho);
  if (!(residual <= kDualityTolerance)) {
    throw InfeasibleError(residual_message("duality system has no solution", residual));
  }
  return rho;
}

std::vector<std::vector<double>> homogeneous_solutions(const ReducedMeasure& nu_q, int L) {
  check_order(nu_q, L);
  const Eigen::MatrixXd A = trig_rows(nu_q, L) * weight_vector(nu_q).asDiagonal();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double cutoff = 1e-10 * std::max(1.0, sv.size() > 0 ? sv(0) : 0.0);
  Eigen::Index rank = 0;
  while (rank < sv.size() && sv(rank) > cutoff) ++rank;
  std::vector<std::vector<double>> basis;
  for (Eigen::Index j = rank; j < A.cols(); ++j) basis.push_back(to_std(svd.matrixV().col(j)));
  return basis;
}

std::optional<NonnegSolution> solve_rho_nonneg(const ReducedMeasure& nu_q, int L) {
  check_order(nu_q, L);
  const Eigen::MatrixXd G = trig_rows(nu_q, L);
  const Eigen::VectorXd w = weight_vector(nu_q);
  const double total = w.sum();
  const Eigen::Index d = w.size();

  // rho = t + u with u >= 0. The k = 0 row fixes t = (1 - w.u) / total;
  // substituting into the remaining rows leaves an LP in u alone, and
  // maximizing t is minimizing w.u.
  const Eigen::Index rows = 2 * L;
  Eigen::MatrixXd M(rows, d);
  Eigen::VectorXd rhs(rows);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const Eigen::VectorXd g = G.row(r + 1).transpose();
    const double s = w.dot(g) / total;
    M.row(r) = (w.array() * (g.array() - s)).transpose();
    rhs(r) = -s;
  }
  const lp::Result result = lp::minimize(M, rhs, w);
  if (result.status != lp::Status::kOptimal) return std::nullopt;

  const double t = (1.0 - w.dot(result.x)) / total;
  NonnegSolution out;
  out.rho.resize(d);
  for (Eigen::Index n = 0; n < d; ++n) out.rho[n] = t + result.x(n);
  if (duality_residual(nu_q, L, out.rho) > kDualityTolerance) return std::nullopt;
  out.margin = *std::min_element(out.rho.begin(), out.rho.end());
  return out;
}

Positivity classify(const std::optional<NonnegSolution>& solution) {
  if (!solution) return Positivity::kInfeasible;
  if (solution->margin > kPositivityThreshold) return Positivity::kPositive;
  if (solution->margin >= -kPositivityThreshold) return Positivity::kBoundary;
  return Positivity::kNegative;
}

const char* to_string(Positivity p) {
  switch (p) {
    case Positivity::kPositive: return "positive";
    case Positivity::kBoundary: return "boundary";
    case Positivity::kNegative: return "negative";
    case Positivity::kInfeasible: return "infeasible";
  }
  return "unknown";
}

Scenario build_scenario(const ReducedMeasure& nu_q, int L, std::vector<double> rho) {
  check_order(nu_q, L);
  const double residual = duality_residual(nu_q, L, rho);
  if (!(residual <= kDualityTolerance)) {
    throw ContractError(residual_message("rho violates the duality constraints", residual));
  }
  const auto atoms = nu_q.atoms();
  Scenario sc;
  sc.L = L;
  sc.residual = residual;
  double norm1 = 0.0, norm2_sq = 0.0;
  for (std::size_t n = 0; n < atoms.size(); ++n) {
    const double w = atoms[n].weight.real();
    norm1 += std::abs(rho[n]) * w;
    norm2_sq += rho[n] * rho[n] * w;
  }
  sc.norm1 = norm1;
  sc.r0_norm = std::sqrt(norm2_sq);

  std::vector<Atom> r_atoms, s_atoms;
  double zeta = 0.0;
  double min_rho = rho.empty() ? 0.0 : rho[0];
  sc.sign_fn.reserve(rho.size());
  for (std::size_t n = 0; n < atoms.size(); ++n) {
    const double w = atoms[n].weight.real();
    const double a = std::abs(rho[n]);
    sc.sign_fn.push_back(rho[n] < 0.0 ? -1 : 1);
    min_rho = std::min(min_rho, rho[n]);
    zeta += w * std::sqrt(a / norm1);
    if (a > 0.0) {
      r_atoms.push_back({atoms[n].position, a * a * w});
      s_atoms.push_back({atoms[n].position, a * w / norm1});
    }
  }
  // Exact normalization of nu_s: the last weight absorbs rounding.
  double partial = 0.0;
  for (std::size_t i = 0; i + 1 < s_atoms.size(); ++i) partial += s_atoms[i].weight.real();
  if (s_atoms.size() > 1) {
    const double last = 1.0 - partial;
    if (std::abs(last - s_atoms.back().weight.real()) < 1e-13) s_atoms.back().weight = last;
  }
  sc.nu_r = ReducedMeasure(std::move(r_atoms), false);
  sc.nu_s = ReducedMeasure(std::move(s_atoms), true);
  sc.zeta = zeta;
  sc.positive = min_rho > -kPositivityThreshold;
  sc.rho = std::move(rho);
  sc.nu_q = nu_q;
  return sc;
}

double circular_span(const ReducedMeasure& nu_q) {
  const std::vector<double> k = nu_q.kappas();  // sorted
  if (k.size() < 2) return 0.0;
  double max_gap = k.front() + kTwoPi - k.back();
  for (std::size_t i = 1; i < k.size(); ++i) max_gap = std::max(max_gap, k[i] - k[i - 1]);
  return kTwoPi - max_gap;
}

bool order1_criterion(const ReducedMeasure& nu_q) {
  if (!nu_q.probability()) throw DomainError("order1_criterion expects a probability measure");
  return circular_span(nu_q) > kPi;
}

std::vector<std::complex<double>> CharacteristicPolynomial::ascending() const {
  const int d = degree();
  std::vector<std::complex<double>> c(d + 1);
  for (int n = 0; n < d; ++n) c[n] = -a[d - n];
  c[d] = 1.0;
  return c;
}

CharacteristicPolynomial char_poly_from_spectrum(std::span<const double> kappas) {
  using C = std::complex<double>;
  if (kappas.empty()) throw DomainError("need at least one eigenphase");
  for (std::size_t i = 0; i < kappas.size(); ++i) {
    for (std::size_t j = i + 1; j < kappas.size(); ++j) {
      double gap = std::abs(wrap(kappas[i] - kappas[j], kTwoPi, -kPi));
      if (gap <= kMergeTolerance) throw DomainError("duplicate eigenphases");
    }
  }
  // prod_k (omega - omega_k), ascending coefficients.
  std::vector<C> p{C(1.0)};
  for (double kappa : kappas) {
    const C root = std::polar(1.0, -kappa);
    std::vector<C> next(p.size() + 1, C(0.0));
    for (std::size_t i = 0; i < p.size(); ++i) {
      next[i + 1] += p[i];
      next[i] -= root * p[i];
    }
    p = std::move(next);
  }
  const int d = static_cast<int>(kappas.size());
  CharacteristicPolynomial poly;
  poly.a.assign(d + 1, C(0.0));
  poly.a[0] = 1.0;
  for (int j = 1; j <= d; ++j) poly.a[j] = -p[d - j];
  return poly;
}

RecoveredSpectrum recover_from_amplitudes(const AmplitudeSequence& beta, int d) {
  using C = std::complex<double>;
  if (d < 1) throw DomainError("target dimension d must be >= 1");
  if (beta.n_max() < 2 * d - 1) throw DomainError("need beta_k for 0 <= k < 2d");

  RecoveredSpectrum out;
  Eigen::MatrixXcd H(d, d);
  Eigen::VectorXcd rhs(d);
  for (int k = 0; k < d; ++k) {
    for (int n = 0; n < d; ++n) H(k, n) = beta[n + k];
    rhs(k) = beta[d + k];
  }
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(H);
  const auto& sv = svd.singularValues();
  out.condition.hankel_condition =
      sv(d - 1) > 0.0 ? sv(0) / sv(d - 1) : std::numeric_limits<double>::infinity();
  if (!(out.condition.hankel_condition <= kMaxHankelCondition)) {
    std::ostringstream msg;
    msg << "Hankel system condition number " << out.condition.hankel_condition
        << " exceeds " << kMaxHankelCondition;
    throw IllConditionedError(msg.str());
  }
  const Eigen::VectorXcd coeff = H.colPivHouseholderQr().solve(rhs);  // a_{d-n}

  CharacteristicPolynomial poly;
  poly.a.assign(d + 1, C(0.0));
  poly.a[0] = 1.0;
  for (int n = 0; n < d; ++n) poly.a[d - n] = coeff(n);
  const RootsResult roots = aberth_roots(poly.ascending());

  double min_gap = std::numeric_limits<double>::infinity();
  double max_dev = 0.0;
  for (int i = 0; i < d; ++i) {
    max_dev = std::max(max_dev, std::abs(1.0 - std::abs(roots.roots[i])));
    for (int j = i + 1; j < d; ++j) {
      min_gap = std::min(min_gap, std::abs(roots.roots[i] - roots.roots[j]));
    }
  }
  out.condition.min_root_gap = d > 1 ? min_gap : 0.0;
  out.condition.max_unit_deviation = max_dev;
  if (d > 1 && min_gap < kMinRootGap) {
    throw IllConditionedError("characteristic roots closer than 1e-6");
  }
  if (max_dev > kMaxUnitDeviation) {
    std::ostringstream msg;
    msg << "characteristic root off the unit circle by " << max_dev;
    throw NonUnitRootError(msg.str());
  }

  Eigen::MatrixXcd V(d, d);
  Eigen::VectorXcd b(d);
  for (int k = 0; k < d; ++k) {
    for (int n = 0; n < d; ++n) V(k, n) = std::pow(roots.roots[n], k);
    b(k) = beta[k];
  }
  const Eigen::VectorXcd w = V.colPivHouseholderQr().solve(b);

  std::vector<std::pair<double, C>> atoms;
  for (int n = 0; n < d; ++n) {
    const double kappa = shift(wrap(-std::arg(roots.roots[n]), kTwoPi, 0.0));
    atoms.emplace_back(kappa, w(n));
  }
  std::sort(atoms.begin(), atoms.end(),
            [](const auto& x, const auto& y) { return x.first < y.first; });
  double total = 0.0;
  for (const auto& [kappa, weight] : atoms) {
    out.kappas.push_back(kappa);
    out.weights.push_back(weight.real());
    out.condition.max_weight_imag = std::max(out.condition.max_weight_imag, std::abs(weight.imag()));
    total += weight.real();
    if (weight.real() < -1e-8) throw DomainError("recovered a negative weight");
  }
  if (std::abs(total - beta[0].real()) > 1e-6) {
    throw IllConditionedError("recovered weights do not reproduce beta_0");
  }
  return out;
}

NuQConstruction construct_nu_q_from_nu_s(const ReducedMeasure& nu_s, double zeta,
                                         std::span<const std::size_t> partition_a) {
  if (!nu_s.probability()) throw DomainError("nu_s must be a probability measure");
  if (!(zeta > 0.0 && zeta <= 1.0)) throw DomainError("zeta must lie in (0, 1]");
  const std::size_t d = nu_s.size();
  std::vector<bool> in_a(d, false);
  for (std::size_t i : partition_a) {
    if (i >= d) throw DomainError("partition index out of range");
    if (in_a[i]) throw DomainError("duplicate partition index");
    in_a[i] = true;
  }
  if (partition_a.empty() || partition_a.size() == d) {
    throw DomainError("partition sets A and B must both be non-empty");
  }
  if (zeta == 1.0) return {nu_s, 1.0, 1.0};

  const auto atoms = nu_s.atoms();
  double a = 0.0, b = 0.0;
  for (std::size_t i = 0; i < d; ++i) (in_a[i] ? a : b) += atoms[i].weight.real();
  // a x^2 - 2 a zeta x + zeta^2 - b = 0 after eliminating y (a + b = 1).
  const double one_minus = (1.0 - zeta) * (1.0 + zeta);
  if (one_minus < 0.0) throw ContractError("negative discriminant");
  const double x = zeta - std::sqrt(b * one_minus / a);
  const double y = zeta + std::sqrt(a * one_minus / b);
  if (!(x > 0.0)) {
    std::ostringstream msg;
    msg << "no admissible solution: zeta^2 = " << zeta * zeta
        << " does not exceed the mass of B (" << b << ")";
    throw DomainError(msg.str());
  }
  std::vector<Atom> q_atoms;
  q_atoms.reserve(d);
  double partial = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    const double v = in_a[i] ? x : y;
    double weight = v * v * atoms[i].weight.real();
    if (i + 1 == d && std::abs(1.0 - partial - weight) < 1e-13) weight = 1.0 - partial;
    partial += weight;
    q_atoms.push_back({atoms[i].position, weight});
  }
  return {ReducedMeasure(std::move(q_atoms), true), x, y};
}

ReducedMeasure positivity_probe_sample(int d, std::uint64_t seed, int trial) {
  Rng rng(mix_seed(seed, static_cast<std::uint64_t>(trial)));
  std::vector<double> k(d);
  for (double& x : k) x = rng.uniform(0.0, kTwoPi);
  std::sort(k.begin(), k.end());
  std::vector<Atom> atoms;
  atoms.reserve(d);
  double partial = 0.0;
  for (int m = 0; m < d; ++m) {
    const double w = m + 1 == d ? 1.0 - partial : 1.0 / d;
    partial += w;
    atoms.push_back({shift(k[m]), w});
  }
  return ReducedMeasure(std::move(atoms), true);
}

PositivityDomainStats probe_positivity_domain(int d, int L, int trials, std::uint64_t seed,
                                              int threads) {
  if (!(d > L && L >= 1)) throw DomainError("probe requires d > L >= 1");
  if (trials < 0) throw DomainError("trials must be non-negative");
  std::vector<std::pair<Positivity, Positivity>> outcome(trials);
  parallel_for(static_cast<std::size_t>(trials), threads, [&](std::size_t t) {
    const ReducedMeasure nu = positivity_probe_sample(d, seed, static_cast<int>(t));
    outcome[t] = {classify(solve_rho_nonneg(nu, L)), classify(solve_rho_nonneg(nu, L - 1))};
  });

  PositivityDomainStats stats;
  stats.d = d;
  stats.L = L;
  stats.trials = trials;
  stats.seed = seed;
  auto bump = [](Positivity p, int& pos, int& bnd, int& neg, int& inf) {
    switch (p) {
      case Positivity::kPositive: ++pos; break;
      case Positivity::kBoundary: ++bnd; break;
      case Positivity::kNegative: ++neg; break;
      case Positivity::kInfeasible: ++inf; break;
    }
  };
  for (const auto& [upper, lower] : outcome) {
    bump(upper, stats.positive, stats.boundary, stats.negative, stats.infeasible);
    bump(lower, stats.positive_lower, stats.boundary_lower, stats.negative_lower,
         stats.infeasible_lower);
    if (upper == Positivity::kPositive && lower != Positivity::kPositive) {
      ++stats.nesting_violations;
    }
  }
  return stats;
}

}  // namespace alab
