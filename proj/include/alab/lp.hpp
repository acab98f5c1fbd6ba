#pragma once

#include <vector>

#include <Eigen/Dense>

namespace alab::lp {

enum class Status { kOptimal, kInfeasible, kUnbounded };

struct Result {
  Status status = Status::kInfeasible;
  Eigen::VectorXd x;
  double objective = 0.0;
};

// Dense two-phase simplex with Bland's rule for
//
//   minimize c^T x   subject to   A x = b,  x >= 0.
//
// Intended for small systems (tens of rows/columns). Redundant equality
// rows are detected in phase one and dropped.
Result minimize(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                const Eigen::VectorXd& c);

}  // namespace alab::lp
