#pragma once

#include <Eigen/Dense>

#include "ddrhc/consistency.hpp"
#include "ddrhc/lp.hpp"
#include "ddrhc/polytope.hpp"

namespace ddrhc {

struct ControlDecision {
  Eigen::VectorXd u;
  /// Worst-case contraction over all consistent systems and admissible
  /// noise; +inf sentinel when the state was inside the near-origin floor
  /// (see gauge_bound for the absolute one-step bound in that case).
  double lambda = 0.0;
  LPStatus status = LPStatus::NumericalFailure;
  Eigen::MatrixXd Y;         // nonnegative multiplier certificate (dual path)
  double solve_seconds = 0.0;
  bool near_origin = false;
  double gauge_bound = 0.0;  // lambda * psi(x), or the absolute bound near 0
  double psi = 0.0;          // gauge of the queried state
};

struct ControllerContext {
  HPolytope carrier;         // gauge carrier, offsets normalized to 1
  HPolytope input_set;
  VPolytope noise_vertices;  // vertices of { v : ||V v||_inf <= 1 }
  ConsistencySet cs;
  /// Drops the disturbance blocks entirely (exact one-step problem).
  bool noise_free = false;
};

ControllerContext make_context(const HPolytope& carrier,
                               const HPolytope& input_set,
                               const ConsistencySet& cs);

/// One-step synthesis as a single linear program over (Y, u, lambda): the
/// consistency-times-noise polytope must map inside lambda * psi(x) times
/// the carrier, expressed through nonnegative multipliers. Never enumerates
/// consistency-set vertices.
ControlDecision solve_dual(const ControllerContext& ctx,
                           const Eigen::VectorXd& x);

/// Ground-truth oracle: same synthesis with the consistency set replaced by
/// its explicit vertex list (and the noise by its vertices).
ControlDecision solve_primal_vertex(const ControllerContext& ctx,
                                    const Eigen::VectorXd& x,
                                    const std::vector<SystemVertex>& vertices);

/// Recomputes both multiplier identities from the raw data at the returned
/// (u, lambda, Y); true iff all residuals are within tol.
bool verify_certificate(const ControlDecision& d, const ControllerContext& ctx,
                        const Eigen::VectorXd& x, double tol = 1e-6);

/// State gauge below which the contraction-ratio objective degenerates and
/// the controller minimizes the absolute one-step gauge instead.
inline constexpr double kLambdaFloor = 1e-6;

}  // namespace ddrhc
