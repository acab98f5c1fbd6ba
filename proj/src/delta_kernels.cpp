#include "alab/delta_kernels.hpp"

#include <cmath>

#include "alab/errors.hpp"

namespace alab {
namespace {

double exp_bump(double x) {
  const double u = 1.0 - 4.0 * x * x;
  return u > 0.0 ? std::exp(1.0 - 1.0 / u) : 0.0;
}

// Trapezoid on a compactly supported smooth function converges faster than
// any power of the step.
double exp_bump_integral() {
  constexpr int n = 8192;
  double sum = 0.0;
  for (int j = 1; j < n; ++j) sum += exp_bump(-0.5 + static_cast<double>(j) / n);
  return sum / n;
}

double trapezoid(std::span<const Atom> atoms, double T, int panels) {
  const double h = T / panels;
  double sum = 0.0;
  for (int j = 0; j <= panels; ++j) {
    const double t = -0.5 * T + j * h;
    const double f = std::norm(fourier(atoms, t));
    sum += (j == 0 || j == panels) ? 0.5 * f : f;
  }
  return sum * h;
}

}  // namespace

TestFunction TestFunction::parse(const std::string& name) {
  if (name == "poly") return TestFunction(Kind::kPolyBump);
  if (name == "exp") return TestFunction(Kind::kExpBump);
  throw DomainError("unknown test function: " + name);
}

double TestFunction::operator()(double x) const {
  if (kind_ == Kind::kExpBump) return exp_bump(x);
  const double u = 1.0 - 4.0 * x * x;
  return u > 0.0 ? u * u * u : 0.0;
}

double TestFunction::integral() const {
  if (kind_ == Kind::kPolyBump) return 16.0 / 35.0;
  static const double value = exp_bump_integral();
  return value;
}

const char* TestFunction::name() const { return kind_ == Kind::kPolyBump ? "poly" : "exp"; }

void KernelProbe::validate() const {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw DomainError("alpha must lie in [0, 1]");
  for (std::size_t i = 0; i < N_list.size(); ++i) {
    if (N_list[i] < 1) throw DomainError("N values must be positive");
    if (i > 0 && N_list[i] <= N_list[i - 1]) {
      throw DomainError("N ladder must be strictly increasing");
    }
  }
}

cplx scaled_test_pairing(std::span<const Atom> atoms, const KernelProbe& probe, int N) {
  cplx sum = 0.0;
  for (const Atom& a : atoms) {
    const double psi = probe.psi(N * a.position);
    if (psi != 0.0) sum += a.weight * psi * probe.phi(a.position);
  }
  return std::pow(static_cast<double>(N), probe.alpha) * sum;
}

double dirichlet_kernel(int N, double x) {
  const double s = std::sin(kPi * x);
  if (std::abs(s) < 1e-8) {
    // L'Hopital at the zero of sin(pi x) nearest to x.
    return N * std::cos(kPi * N * x) / std::cos(kPi * x);
  }
  return std::sin(kPi * N * x) / s;
}

cplx dirichlet_pairing(std::span<const Atom> atoms, const KernelProbe& probe, int N) {
  cplx sum = 0.0;
  for (const Atom& a : atoms) {
    const double x = a.position / kTwoPi;
    sum += a.weight * dirichlet_kernel(N, x) * probe.phi(x);
  }
  return std::pow(static_cast<double>(N), probe.alpha - 1.0) * sum;
}

std::vector<ConvergenceRow> convergence_table(std::span<const Atom> atoms,
                                              const KernelProbe& probe, PairingKind kind,
                                              cplx target, double ceiling) {
  probe.validate();
  std::vector<ConvergenceRow> rows;
  rows.reserve(probe.N_list.size());
  for (int N : probe.N_list) {
    ConvergenceRow row;
    row.N = N;
    row.value = kind == PairingKind::kScaled ? scaled_test_pairing(atoms, probe, N)
                                             : dirichlet_pairing(atoms, probe, N);
    row.abs_err = std::abs(row.value - target);
    row.diverged = std::abs(row.value) > ceiling;
    rows.push_back(row);
  }
  return rows;
}

double loglog_slope(std::span<const ConvergenceRow> rows) {
  if (rows.size() < 2) throw DomainError("slope needs at least two rows");
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (const ConvergenceRow& r : rows) {
    if (!(r.abs_err > 0.0)) throw DomainError("slope needs positive errors");
    const double x = std::log(static_cast<double>(r.N));
    const double y = std::log(r.abs_err);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double n = static_cast<double>(rows.size());
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

TimeAverageResult time_average(std::span<const Atom> atoms, double alpha, double T, double dt) {
  if (!(T > 0.0) || !(dt > 0.0)) throw DomainError("T and dt must be positive");
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw DomainError("alpha must lie in [0, 1]");
  const int panels = static_cast<int>(std::ceil(T / dt));
  const double scale = std::pow(T, alpha - 1.0);
  const double coarse = scale * trapezoid(atoms, T, panels);
  const double fine = scale * trapezoid(atoms, T, 2 * panels);
  TimeAverageResult r;
  r.T = T;
  r.alpha = alpha;
  r.quad_step = T / (2 * panels);
  r.value = fine;
  r.error_estimate = std::abs(fine - coarse);
  return r;
}

}  // namespace alab
