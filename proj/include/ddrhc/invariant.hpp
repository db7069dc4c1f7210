#pragma once

#include <cstdint>
#include <vector>

#include "ddrhc/consistency.hpp"
#include "ddrhc/polytope.hpp"

namespace ddrhc {

struct InvariantResult {
  HPolytope X_I;               // normalized gauge carrier (offsets == 1)
  int iterations_run = 0;
  bool converged = false;      // fixed point reached before the cap
  std::vector<int> row_counts; // per-iteration facet counts
};

/// One backward iteration: the set of states from which an admissible input
/// keeps every vertex system inside the noise-shrunk current set.
HPolytope backward_step(const HPolytope& current, const HPolytope& input_set,
                        const VPolytope& noise,
                        const std::vector<SystemVertex>& systems);

/// Iterates backward_step from the state constraint set until mutual
/// containment (fixed point) or max_iter. Throws InfeasibleError when the
/// construction collapses (no invariant set with the origin interior).
InvariantResult compute_invariant(const HPolytope& state_set,
                                  const HPolytope& input_set,
                                  const VPolytope& noise,
                                  const std::vector<SystemVertex>& systems,
                                  int max_iter = 20);

struct CertificationReport {
  int samples = 0;
  int failures = 0;
  std::vector<Eigen::VectorXd> failure_points;
};

/// Samples boundary points of the candidate set and checks, one feasibility
/// LP per point, that some admissible input maps every vertex system back
/// into the set for every noise vertex. Report-only.
CertificationReport certify_invariance(const HPolytope& candidate,
                                       const HPolytope& input_set,
                                       const VPolytope& noise,
                                       const std::vector<SystemVertex>& systems,
                                       int samples, std::uint64_t seed);

}  // namespace ddrhc
