#pragma once

#include <Eigen/Dense>

namespace ddrhc {

enum class LPStatus {
  Optimal,
  Infeasible,
  Unbounded,
  IterationLimit,
  NumericalFailure,
};

const char* to_string(LPStatus s);

/// Dense linear program
///
///   minimize    c . z
///   subject to  A_eq z == b_eq
///               A_in z <= b_in
///               z_j   >= lower_j   (entry -inf, or empty vector: free)
///
/// Either constraint block may be empty (0 rows).
struct LinearProgram {
  Eigen::VectorXd c;
  Eigen::MatrixXd A_eq;
  Eigen::VectorXd b_eq;
  Eigen::MatrixXd A_in;
  Eigen::VectorXd b_in;
  Eigen::VectorXd lower;

  int num_vars() const { return static_cast<int>(c.size()); }
};

struct LPSolution {
  LPStatus status = LPStatus::NumericalFailure;
  Eigen::VectorXd z;
  double objective = 0.0;
  int iterations = 0;
  /// Simplex multipliers per original row. For min c.z with optimal basis,
  /// reduced costs c - A^T y are >= 0 over the columns; dual_eq[i] pairs with
  /// equality row i, dual_in[i] with inequality row i.
  Eigen::VectorXd dual_eq;
  Eigen::VectorXd dual_in;
};

struct SimplexOptions {
  double feas_tol = 1e-9;
  double opt_tol = 1e-9;
  double pivot_tol = 1e-11;
  int max_iterations = 200000;
  /// Degenerate-pivot streak after which pricing switches to Bland's rule
  /// (stays there for the rest of the solve, which guarantees termination).
  int stall_limit = 64;
  int refactor_every = 64;
};

/// Two-phase revised simplex. Deterministic: fixed pricing and tie-breaking,
/// no randomization, so identical inputs give bit-identical outputs.
LPSolution solve_lp(const LinearProgram& lp, const SimplexOptions& opts = {});

}  // namespace ddrhc
