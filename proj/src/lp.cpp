#include "alab/lp.hpp"

#include <cmath>
#include <limits>

#include "alab/errors.hpp"

namespace alab::lp {
namespace {

constexpr double kPivotEps = 1e-11;
constexpr double kFeasibilityEps = 1e-9;
constexpr int kMaxIterations = 100000;

// Rows 0..m-1 are constraints, row m is the reduced-cost row whose last
// entry holds minus the current objective value.
class Tableau {
 public:
  Tableau(const Eigen::MatrixXd& A, const Eigen::VectorXd& b)
      : m_(static_cast<int>(A.rows())), n_(static_cast<int>(A.cols())) {
    t_ = Eigen::MatrixXd::Zero(m_ + 1, n_ + m_ + 1);
    basis_.resize(m_);
    for (int i = 0; i < m_; ++i) {
      const double sign = b(i) < 0.0 ? -1.0 : 1.0;
      t_.row(i).head(n_) = sign * A.row(i);
      t_(i, n_ + i) = 1.0;
      t_(i, rhs()) = sign * b(i);
      basis_[i] = n_ + i;
    }
  }

  int rhs() const { return n_ + m_; }

  // Phase one: minimize the sum of artificial variables.
  bool phase_one() {
    t_.row(m_).setZero();
    for (int i = 0; i < m_; ++i) {
      t_.row(m_).head(n_) -= t_.row(i).head(n_);
      t_(m_, rhs()) -= t_(i, rhs());
    }
    if (!iterate(n_ + m_)) return false;  // cannot be unbounded below 0
    if (-t_(m_, rhs()) > kFeasibilityEps * scale_) return false;
    drive_out_artificials();
    return true;
  }

  Status phase_two(const Eigen::VectorXd& c) {
    t_.row(m_).setZero();
    t_.row(m_).head(n_) = c.transpose();
    for (int i = 0; i < rows(); ++i) {
      const int j = basis_[i];
      if (j < n_ && c(j) != 0.0) t_.row(m_) -= c(j) * t_.row(i);
    }
    return iterate(n_) ? Status::kOptimal : Status::kUnbounded;
  }

  Eigen::VectorXd solution() const {
    Eigen::VectorXd x = Eigen::VectorXd::Zero(n_);
    for (int i = 0; i < rows(); ++i) {
      if (basis_[i] < n_) x(basis_[i]) = std::max(0.0, t_(i, rhs()));
    }
    return x;
  }

  void set_scale(double s) { scale_ = s; }

 private:
  int rows() const { return static_cast<int>(basis_.size()); }

  void pivot(int r, int col) {
    t_.row(r) /= t_(r, col);
    for (int i = 0; i <= m_; ++i) {
      if (i == r || (i < m_ && i >= rows())) continue;
      const double f = t_(i, col);
      if (f != 0.0) t_.row(i) -= f * t_.row(r);
    }
    basis_[r] = col;
  }

  // Bland's rule over columns [0, column_limit). Returns false if unbounded.
  bool iterate(int column_limit) {
    for (int iter = 0; iter < kMaxIterations; ++iter) {
      int enter = -1;
      for (int j = 0; j < column_limit; ++j) {
        if (t_(m_, j) < -kPivotEps) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return true;
      int leave = -1;
      double best = std::numeric_limits<double>::infinity();
      for (int i = 0; i < rows(); ++i) {
        const double a = t_(i, enter);
        if (a <= kPivotEps) continue;
        const double ratio = t_(i, rhs()) / a;
        if (ratio < best - 1e-15 ||
            (std::abs(ratio - best) <= 1e-15 && leave >= 0 && basis_[i] < basis_[leave])) {
          best = ratio;
          leave = i;
        }
      }
      if (leave < 0) return false;
      pivot(leave, enter);
    }
    throw ContractError("simplex iteration limit reached");
  }

  void drive_out_artificials() {
    for (int i = 0; i < rows();) {
      if (basis_[i] < n_) {
        ++i;
        continue;
      }
      int col = -1;
      for (int j = 0; j < n_; ++j) {
        if (std::abs(t_(i, j)) > kPivotEps) {
          col = j;
          break;
        }
      }
      if (col >= 0) {
        pivot(i, col);
        ++i;
        continue;
      }
      // Redundant row: move it past the active range and forget it.
      const int last = rows() - 1;
      t_.row(i).swap(t_.row(last));
      std::swap(basis_[i], basis_[last]);
      basis_.pop_back();
    }
  }

  int m_;
  int n_;
  double scale_ = 1.0;
  Eigen::MatrixXd t_;
  std::vector<int> basis_;
};

}  // namespace

Result minimize(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                const Eigen::VectorXd& c) {
  if (A.rows() != b.size() || A.cols() != c.size()) {
    throw DomainError("lp::minimize: dimension mismatch");
  }
  Result result;
  if (A.rows() == 0) {
    // Only the sign constraints remain.
    if ((c.array() < 0.0).any()) {
      result.status = Status::kUnbounded;
      return result;
    }
    result.status = Status::kOptimal;
    result.x = Eigen::VectorXd::Zero(A.cols());
    return result;
  }
  Tableau tableau(A, b);
  tableau.set_scale(std::max(1.0, b.cwiseAbs().maxCoeff()));
  if (!tableau.phase_one()) {
    result.status = Status::kInfeasible;
    return result;
  }
  result.status = tableau.phase_two(c);
  if (result.status == Status::kOptimal) {
    result.x = tableau.solution();
    result.objective = c.dot(result.x);
  }
  return result;
}

}  // namespace alab::lp
