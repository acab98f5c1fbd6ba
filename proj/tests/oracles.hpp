#pragma once

// Independent reference computations for the unit tests. Nothing here calls
// into the library's numerical routines; linear systems are solved by plain
// Gaussian elimination and sums are accumulated directly.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <optional>
#include <vector>

namespace oracle {

using cplx = std::complex<double>;
constexpr double pi = std::numbers::pi;

template <typename T>
using Matrix = std::vector<std::vector<T>>;

// Gaussian elimination with partial pivoting; nullopt if singular.
template <typename T>
std::optional<std::vector<T>> gauss_solve(Matrix<T> a, std::vector<T> b) {
  const std::size_t n = b.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
    }
    if (std::abs(a[piv][col]) < 1e-300) return std::nullopt;
    std::swap(a[piv], a[col]);
    std::swap(b[piv], b[col]);
    for (std::size_t r = col + 1; r < n; ++r) {
      const T f = a[r][col] / a[col][col];
      for (std::size_t k = col; k < n; ++k) a[r][k] -= f * a[col][k];
      b[r] -= f * b[col];
    }
  }
  std::vector<T> x(n);
  for (std::size_t i = n; i-- > 0;) {
    T s = b[i];
    for (std::size_t k = i + 1; k < n; ++k) s -= a[i][k] * x[k];
    x[i] = s / a[i][i];
  }
  return x;
}

// Rows of the duality system: cos(k kappa) w for k = 0..L, sin(k kappa) w
// for k = 1..L.
inline Matrix<double> duality_matrix(const std::vector<double>& kappa,
                                     const std::vector<double>& w, int L) {
  Matrix<double> g;
  for (int k = 0; k <= L; ++k) {
    std::vector<double> row;
    for (std::size_t n = 0; n < kappa.size(); ++n) row.push_back(std::cos(k * kappa[n]) * w[n]);
    g.push_back(row);
  }
  for (int k = 1; k <= L; ++k) {
    std::vector<double> row;
    for (std::size_t n = 0; n < kappa.size(); ++n) row.push_back(std::sin(k * kappa[n]) * w[n]);
    g.push_back(row);
  }
  return g;
}

// Weighted minimum-norm solution of A rho = e_0 (A = G W) minimizing
// sum rho^2 w, via the normal equations (A W^-1 A^T) y = e_0, rho = W^-1 A^T y.
inline std::optional<std::vector<double>> min_norm_rho(const std::vector<double>& kappa,
                                                       const std::vector<double>& w, int L) {
  const Matrix<double> a = duality_matrix(kappa, w, L);
  const std::size_t m = a.size(), d = kappa.size();
  Matrix<double> normal(m, std::vector<double>(m, 0.0));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      for (std::size_t n = 0; n < d; ++n) normal[i][j] += a[i][n] * a[j][n] / w[n];
    }
  }
  std::vector<double> rhs(m, 0.0);
  rhs[0] = 1.0;
  const auto y = gauss_solve(normal, rhs);
  if (!y) return std::nullopt;
  std::vector<double> rho(d, 0.0);
  for (std::size_t n = 0; n < d; ++n) {
    for (std::size_t i = 0; i < m; ++i) rho[n] += a[i][n] * (*y)[i] / w[n];
  }
  return rho;
}

// min c.x s.t. A x = b, x >= 0 by enumerating all basic solutions. Only for
// tiny problems. Returns the optimal objective or nullopt if infeasible.
inline std::optional<double> lp_by_vertices(const Matrix<double>& A, const std::vector<double>& b,
                                            const std::vector<double>& c) {
  const std::size_t m = A.size(), n = c.size();
  std::optional<double> best;
  if (m == 0) return 0.0;
  // Iterate over all m-subsets of columns.
  std::vector<bool> mask(n, false);
  std::fill(mask.begin(), mask.begin() + static_cast<long>(std::min(m, n)), true);
  do {
    std::vector<std::size_t> cols;
    for (std::size_t j = 0; j < n; ++j) {
      if (mask[j]) cols.push_back(j);
    }
    if (cols.size() != m) continue;
    Matrix<double> sub(m, std::vector<double>(m));
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t k = 0; k < m; ++k) sub[i][k] = A[i][cols[k]];
    }
    const auto xb = gauss_solve(sub, b);
    if (!xb) continue;
    bool ok = true;
    double obj = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
      if ((*xb)[k] < -1e-9 || !std::isfinite((*xb)[k])) ok = false;
      obj += c[cols[k]] * (*xb)[k];
    }
    // Reject solutions of near-singular bases that miss the equations.
    for (std::size_t i = 0; ok && i < m; ++i) {
      double s = 0.0;
      for (std::size_t k = 0; k < m; ++k) s += A[i][cols[k]] * (*xb)[k];
      if (std::abs(s - b[i]) > 1e-8) ok = false;
    }
    if (ok && (!best || obj < *best)) best = obj;
  } while (std::prev_permutation(mask.begin(), mask.end()));
  return best;
}

// Elementary symmetric polynomials e_0..e_d of the given values.
inline std::vector<cplx> elementary_symmetric(const std::vector<cplx>& x) {
  std::vector<cplx> e(x.size() + 1, 0.0);
  e[0] = 1.0;
  for (const cplx& v : x) {
    for (std::size_t j = e.size() - 1; j >= 1; --j) e[j] += v * e[j - 1];
  }
  return e;
}

// Representative of x mod m in [lo, lo + m) via floor division.
inline double mod_into(double x, double m, double lo) {
  const double k = std::floor((x - lo) / m);
  double r = x - k * m;
  if (r >= lo + m) r -= m;
  if (r < lo) r += m;
  return r;
}

// Small LCG for the property generators, independent of alab::Rng.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : state_(seed * 2862933555777941757ULL + 3037000493ULL) {}
  double uniform() {
    state_ = state_ * 6364136223846793005ULL + 1442695040888963407ULL;
    return static_cast<double>(state_ >> 11) * 0x1.0p-53;
  }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  int integer(int lo, int hi) {
    return lo + static_cast<int>(uniform() * (hi - lo + 1)) % (hi - lo + 1);
  }

 private:
  std::uint64_t state_;
};

}  // namespace oracle
