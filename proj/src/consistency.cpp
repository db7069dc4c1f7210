#include "ddrhc/consistency.hpp"

#include <unsupported/Eigen/KroneckerProduct>

#include "ddrhc/errors.hpp"

namespace ddrhc {

void DataDictionary::validate() const {
  if (triples.empty()) throw ConfigError("data dictionary is empty");
  const int n = state_dim();
  const int m = input_dim();
  bool seen_execution = false;
  for (const auto& t : triples) {
    if (t.x.size() != n || t.x_next.size() != n || t.u.size() != m)
      throw ConfigError("data dictionary: inconsistent triple dimensions");
    if (!t.x.allFinite() || !t.u.allFinite() || !t.x_next.allFinite())
      throw ConfigError("data dictionary: non-finite entries");
    if (t.tag == DataTag::Execution) seen_execution = true;
    else if (seen_execution)
      throw ConfigError("data dictionary: training triple after execution data");
  }
}

Eigen::MatrixXd unflatten_rows(const Eigen::VectorXd& v, int rows, int cols) {
  if (v.size() != rows * cols) throw ConfigError("unflatten: size mismatch");
  Eigen::MatrixXd M(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) M(i, j) = v[i * cols + j];
  return M;
}

Eigen::VectorXd flatten_rows(const Eigen::MatrixXd& M) {
  Eigen::VectorXd v(M.rows() * M.cols());
  for (int i = 0; i < M.rows(); ++i)
    for (int j = 0; j < M.cols(); ++j) v[i * M.cols() + j] = M(i, j);
  return v;
}

void ConsistencySet::append_blocks(const DataTriple& t) {
  const int vr = static_cast<int>(noise_shape_.rows());
  const long at = state_kron_.rows();
  state_kron_.conservativeResize(at + vr, Eigen::NoChange);
  input_kron_.conservativeResize(at + vr, Eigen::NoChange);
  target_.conservativeResize(at + vr);
  state_kron_.bottomRows(vr) =
      Eigen::kroneckerProduct(noise_shape_, t.x.transpose());
  input_kron_.bottomRows(vr) =
      Eigen::kroneckerProduct(noise_shape_, t.u.transpose());
  target_.tail(vr) = noise_shape_ * t.x_next;
  ++count_;
}

ConsistencySet ConsistencySet::build(const DataDictionary& data,
                                     const Eigen::MatrixXd& noise_shape) {
  data.validate();
  const int n = data.state_dim();
  const int m = data.input_dim();
  if (noise_shape.rows() != n || noise_shape.cols() != n)
    throw ConfigError("noise shape must be n x n");
  if (!noise_shape.allFinite())
    throw ConfigError("noise shape has non-finite entries");
  ConsistencySet cs;
  cs.n_ = n;
  cs.m_ = m;
  cs.noise_shape_ = noise_shape;
  cs.state_kron_.resize(0, n * n);
  cs.input_kron_.resize(0, n * m);
  cs.target_.resize(0);
  for (const auto& t : data.triples) cs.append_blocks(t);
  return cs;
}

ConsistencySet ConsistencySet::updated(const DataTriple& t) const {
  if (t.x.size() != n_ || t.x_next.size() != n_ || t.u.size() != m_)
    throw ConfigError("update: triple dimension mismatch");
  ConsistencySet out = *this;
  out.append_blocks(t);
  return out;
}

bool ConsistencySet::membership(const Eigen::MatrixXd& A,
                                const Eigen::MatrixXd& B, double tol) const {
  if (A.rows() != n_ || A.cols() != n_ || B.rows() != n_ || B.cols() != m_)
    throw ConfigError("membership: dimension mismatch");
  const Eigen::VectorXd ab =
      (Eigen::VectorXd(n_ * n_ + n_ * m_) << flatten_rows(A), flatten_rows(B))
          .finished();
  const Eigen::VectorXd resid =
      state_kron_ * ab.head(n_ * n_) + input_kron_ * ab.tail(n_ * m_) - target_;
  return resid.lpNorm<Eigen::Infinity>() <= 1.0 + tol;
}

bool ConsistencySet::check_rank(double rel_tol) const {
  const int cols = n_ * n_ + n_ * m_;
  if (state_kron_.rows() < cols) return false;
  Eigen::MatrixXd D(state_kron_.rows(), cols);
  D << state_kron_, input_kron_;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(D);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv[0] <= 0.0) return false;
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv[i] > rel_tol * sv[0]) ++rank;
  return rank == cols;
}

HPolytope ConsistencySet::as_polytope() const {
  const long rows = state_kron_.rows();
  if (rows == 0) throw ConfigError("as_polytope: no data");
  const int cols = n_ * n_ + n_ * m_;
  HPolytope P;
  P.F.resize(2 * rows, cols);
  P.F << state_kron_, input_kron_, -state_kron_, -input_kron_;
  P.g.resize(2 * rows);
  P.g << Eigen::VectorXd::Ones(rows) + target_,
      Eigen::VectorXd::Ones(rows) - target_;
  return P;
}

std::vector<SystemVertex> ConsistencySet::system_vertices() const {
  VPolytope V;
  try {
    V = vertex_enum(as_polytope());
  } catch (const GeometryError&) {
    throw InfeasibleError(
        "consistency set is unbounded: the data matrix lacks full column "
        "rank (collect more data)");
  } catch (const InfeasibleError&) {
    throw InfeasibleError(
        "consistency set is empty: data violate the noise bound");
  }
  std::vector<SystemVertex> out;
  out.reserve(V.vertices.size());
  for (const auto& v : V.vertices) {
    SystemVertex s;
    s.A = unflatten_rows(v.head(n_ * n_), n_, n_);
    s.B = unflatten_rows(v.tail(n_ * m_), n_, m_);
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace ddrhc
