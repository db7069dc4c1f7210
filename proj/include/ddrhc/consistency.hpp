#pragma once

#include <Eigen/Dense>
#include <vector>

#include "ddrhc/polytope.hpp"

namespace ddrhc {

enum class DataTag { Training, Execution };

struct DataTriple {
  Eigen::VectorXd x;
  Eigen::VectorXd u;
  Eigen::VectorXd x_next;
  DataTag tag = DataTag::Training;
};

/// Ordered experiment data; execution triples follow training triples.
struct DataDictionary {
  std::vector<DataTriple> triples;

  int state_dim() const {
    return triples.empty() ? 0 : static_cast<int>(triples.front().x.size());
  }
  int input_dim() const {
    return triples.empty() ? 0 : static_cast<int>(triples.front().u.size());
  }
  int size() const { return static_cast<int>(triples.size()); }
  /// Checks dimensional consistency and training-before-execution order.
  void validate() const;
};

struct SystemVertex {
  Eigen::MatrixXd A;
  Eigen::MatrixXd B;
};

/// All systems (A, B) whose one-step predictions match every recorded triple
/// within the noise bound, stored through the Kronecker blocks of the
/// coefficient-space halfspace description
///
///   [ K_x  K_u ; -K_x  -K_u ] (a; b) <= [ 1 + t ; 1 - t ],
///
/// where a and b stack the rows of A and B, K_x stacks noise_shape (x) x_k^T
/// blocks, K_u stacks noise_shape (x) u_k^T blocks and t stacks
/// noise_shape . x_next blocks, one block per triple in dictionary order.
class ConsistencySet {
 public:
  static ConsistencySet build(const DataDictionary& data,
                              const Eigen::MatrixXd& noise_shape);

  /// Snapshot with one more triple appended; prior rows untouched.
  ConsistencySet updated(const DataTriple& triple) const;

  /// True iff ||noise_shape (A x_k + B u_k - x_next)||_inf <= 1 + tol for
  /// every recorded triple.
  bool membership(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                  double tol = kGeomTol) const;

  /// Full column rank of [K_x K_u]; guards compactness of the set.
  bool check_rank(double rel_tol = 1e-10) const;

  /// The halfspace view over the stacked coefficient vector (a; b).
  HPolytope as_polytope() const;

  /// Vertices of the coefficient polytope mapped back to matrix pairs.
  std::vector<SystemVertex> system_vertices() const;

  const Eigen::MatrixXd& state_kron() const { return state_kron_; }
  const Eigen::MatrixXd& input_kron() const { return input_kron_; }
  const Eigen::VectorXd& target() const { return target_; }
  const Eigen::MatrixXd& noise_shape() const { return noise_shape_; }
  int state_dim() const { return n_; }
  int input_dim() const { return m_; }
  int triple_count() const { return count_; }
  /// Rows of the stacked halfspace description (both sign blocks).
  int row_count() const { return 2 * static_cast<int>(state_kron_.rows()); }

 private:
  Eigen::MatrixXd state_kron_;  // rows(noise_shape) * T  x  n^2
  Eigen::MatrixXd input_kron_;  //                  ...   x  n*m
  Eigen::VectorXd target_;
  Eigen::MatrixXd noise_shape_;
  int n_ = 0, m_ = 0, count_ = 0;

  void append_blocks(const DataTriple& t);
};

/// Spec-level alias: returns a new snapshot with the triple appended.
inline ConsistencySet update(const ConsistencySet& cs, const DataTriple& t) {
  return cs.updated(t);
}

/// vec-of-transpose convention used throughout: the coefficient vector lists
/// the rows of the matrix. unflatten_rows(a, r, c)(i, j) == a[i * c + j].
Eigen::MatrixXd unflatten_rows(const Eigen::VectorXd& v, int rows, int cols);
Eigen::VectorXd flatten_rows(const Eigen::MatrixXd& M);

}  // namespace ddrhc
