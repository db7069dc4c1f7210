#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

namespace ddrhc {

/// Geometric tolerance shared by row activity, vertex dedup, redundancy and
/// Farkas certificate checks.
inline constexpr double kGeomTol = 1e-8;

/// Halfspace representation { x : F x <= g }.
struct HPolytope {
  Eigen::MatrixXd F;
  Eigen::VectorXd g;

  int dim() const { return static_cast<int>(F.cols()); }
  int rows() const { return static_cast<int>(F.rows()); }
  bool contains_point(const Eigen::VectorXd& x, double tol = kGeomTol) const {
    return ((F * x - g).array() <= tol).all();
  }
  /// Rejects all-zero rows and non-finite entries.
  void validate() const;
};

/// Vertex representation; minimal after enumeration.
struct VPolytope {
  std::vector<Eigen::VectorXd> vertices;

  int dim() const { return vertices.empty() ? 0 : static_cast<int>(vertices.front().size()); }
  int count() const { return static_cast<int>(vertices.size()); }
};

/// Axis-aligned infinity-norm ball of the given radius as an H-rep.
HPolytope make_box(int dim, double radius);
/// Its 2^dim corners.
VPolytope box_vertices(int dim, double radius);
/// Vertices of { v : ||shape . v||_inf <= 1 } for invertible `shape`.
VPolytope norm_ball_vertices(const Eigen::MatrixXd& shape);

/// Minkowski-functional value max(0, max_i F_i.x / g_i). Requires g > 0
/// elementwise (origin strictly interior); throws GeometryError otherwise.
double gauge(const HPolytope& P, const Eigen::VectorXd& x);

/// Rescales rows so g == 1 elementwise; throws GeometryError if any g <= 0.
HPolytope normalized(const HPolytope& P);

/// Emptiness test: trivially true when g >= 0, otherwise via the signed
/// inradius LP.
bool is_nonempty(const HPolytope& P);

struct SupportResult {
  bool bounded = true;
  double value = 0.0;        // meaningful when bounded
  Eigen::VectorXd maximizer; // a point of P attaining the value
};

/// max of direction.x over P, solved through the dual program so the work
/// scales with dim(P) rather than the row count. Throws InfeasibleError when
/// P is empty.
SupportResult support(const HPolytope& P, const Eigen::VectorXd& direction);

/// Removes every row implied by the others; the surviving system describes
/// the same set. Throws InfeasibleError on an empty input set.
HPolytope remove_redundancy(const HPolytope& P);

struct Containment {
  bool contained = false;
  Eigen::MatrixXd Y;  // nonnegative multipliers, rows(outer) x rows(inner)
};

/// Inclusion inner <= outer with a multiplier certificate: contained iff
/// a Y >= 0 exists with Y.F_inner == F_outer and Y.g_inner <= g_outer.
Containment contains(const HPolytope& outer, const HPolytope& inner);

/// Re-checks both certificate identities to `tol`.
bool verify_containment(const Eigen::MatrixXd& Y, const HPolytope& outer,
                        const HPolytope& inner, double tol = kGeomTol);

/// Exact vertex list via incremental halfspace insertion starting from a
/// strictly larger bounding box. Throws GeometryError on unbounded input and
/// InfeasibleError on empty input. Output is sorted lexicographically.
VPolytope vertex_enum(const HPolytope& P);

/// Orthogonal projection onto the listed coordinates (ascending order in the
/// output) by Fourier-Motzkin elimination, with redundancy removal after
/// each eliminated variable.
HPolytope project(const HPolytope& P, const std::vector<int>& keep);

/// Stacked rows, then redundancy-removed. Throws on dimension mismatch.
HPolytope intersect(const HPolytope& P, const HPolytope& Q);

struct ShrinkResult {
  HPolytope set;
  bool origin_interior = true;  // false when some shrunken offset is <= 0
};

/// Pontryagin difference against a finitely generated disturbance set:
/// same normals, offsets reduced by the support of the noise vertices.
ShrinkResult pontryagin_shrink(const HPolytope& P, const VPolytope& noise);

}  // namespace ddrhc
