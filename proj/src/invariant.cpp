#include "ddrhc/invariant.hpp"

#include "ddrhc/errors.hpp"
#include "ddrhc/rng.hpp"

namespace ddrhc {

HPolytope backward_step(const HPolytope& current, const HPolytope& input_set,
                        const VPolytope& noise,
                        const std::vector<SystemVertex>& systems) {
  if (systems.empty()) throw ConfigError("backward_step: no vertex systems");
  const int n = current.dim();
  const int m = input_set.dim();

  const ShrinkResult shrunk = pontryagin_shrink(current, noise);
  if ((shrunk.set.g.array() <= 0.0).all())
    throw InfeasibleError(
        "no invariant set found: noise swallows the whole set");

  // Joint one-step constraints over every vertex system, in (x, u) space.
  const int rF = current.rows();
  const int rH = input_set.rows();
  const long total = static_cast<long>(systems.size()) * rF + rH;
  HPolytope M;
  M.F.setZero(total, n + m);
  M.g.resize(total);
  long at = 0;
  for (const auto& sys : systems) {
    M.F.block(at, 0, rF, n) = current.F * sys.A;
    M.F.block(at, n, rF, m) = current.F * sys.B;
    M.g.segment(at, rF) = shrunk.set.g;
    at += rF;
  }
  M.F.block(at, n, rH, m) = input_set.F;
  M.g.tail(rH) = input_set.g;

  if (!is_nonempty(M))
    throw InfeasibleError("no invariant set found: one-step set is empty");
  M = remove_redundancy(M);

  std::vector<int> keep(n);
  for (int i = 0; i < n; ++i) keep[i] = i;
  const HPolytope reach = project(M, keep);
  return intersect(reach, current);
}

InvariantResult compute_invariant(const HPolytope& state_set,
                                  const HPolytope& input_set,
                                  const VPolytope& noise,
                                  const std::vector<SystemVertex>& systems,
                                  int max_iter) {
  if (max_iter < 1) throw ConfigError("compute_invariant: max_iter < 1");
  InvariantResult res;
  HPolytope current = normalized(remove_redundancy(state_set));
  for (int k = 0; k < max_iter; ++k) {
    HPolytope next = backward_step(current, input_set, noise, systems);
    if ((next.g.array() <= 0.0).any())
      throw InfeasibleError(
          "no invariant set found: origin left the interior");
    next = normalized(next);
    res.row_counts.push_back(next.rows());
    res.iterations_run = k + 1;
    if (contains(current, next).contained &&
        contains(next, current).contained) {
      res.converged = true;
      res.X_I = next;
      return res;
    }
    current = next;
  }
  res.X_I = current;
  return res;
}

CertificationReport certify_invariance(const HPolytope& candidate,
                                       const HPolytope& input_set,
                                       const VPolytope& noise,
                                       const std::vector<SystemVertex>& systems,
                                       int samples, std::uint64_t seed) {
  candidate.validate();
  if (systems.empty()) throw ConfigError("certify: no vertex systems");
  const int n = candidate.dim();
  const int m = input_set.dim();
  const int rF = candidate.rows();
  const int rH = input_set.rows();

  // Fold the noise into per-row support offsets.
  Eigen::VectorXd noise_support(rF);
  for (int i = 0; i < rF; ++i) {
    double w = -std::numeric_limits<double>::infinity();
    for (const auto& v : noise.vertices)
      w = std::max(w, candidate.F.row(i).dot(v));
    noise_support[i] = w;
  }

  CertificationReport rep;
  rep.samples = samples;
  Rng rng(seed);
  const double slack = 1e-6;
  for (int s = 0; s < samples; ++s) {
    Eigen::VectorXd dir = rng.gaussian_vec(n);
    double psi = gauge(candidate, dir);
    while (psi <= 1e-12) {
      dir = rng.gaussian_vec(n);
      psi = gauge(candidate, dir);
    }
    const Eigen::VectorXd x = dir / psi;  // on the boundary

    // Feasibility in u: every vertex system lands inside for every noise
    // vertex (noise folded into the offsets above).
    HPolytope feas;
    feas.F.resize(static_cast<long>(systems.size()) * rF + rH, m);
    feas.g.resize(feas.F.rows());
    long at = 0;
    for (const auto& sys : systems) {
      feas.F.block(at, 0, rF, m) = candidate.F * sys.B;
      feas.g.segment(at, rF) =
          candidate.g - noise_support - candidate.F * (sys.A * x) +
          Eigen::VectorXd::Constant(rF, slack);
      at += rF;
    }
    feas.F.bottomRows(rH) = input_set.F;
    feas.g.tail(rH) = input_set.g;

    if (!is_nonempty(feas)) {
      ++rep.failures;
      rep.failure_points.push_back(x);
    }
  }
  return rep;
}

}  // namespace ddrhc
