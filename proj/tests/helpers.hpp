#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <vector>

#include "ddrhc/lp.hpp"
#include "ddrhc/polytope.hpp"
#include "ddrhc/rng.hpp"

namespace ddrhc::testing {

/// Brute-force vertex enumeration, independent of the library paths it is
/// used to check: solve every n-row subsystem of Fx == g and keep the
/// solutions feasible for all rows.
inline std::vector<Eigen::VectorXd> brute_force_vertices(
    const Eigen::MatrixXd& F, const Eigen::VectorXd& g, double tol = 1e-7) {
  const int n = static_cast<int>(F.cols());
  const int r = static_cast<int>(F.rows());
  std::vector<Eigen::VectorXd> verts;
  std::vector<int> idx(n);
  // Iterate over all n-subsets of rows.
  std::vector<int> comb(n);
  for (int i = 0; i < n; ++i) comb[i] = i;
  auto next_comb = [&]() {
    int i = n - 1;
    while (i >= 0 && comb[i] == r - n + i) --i;
    if (i < 0) return false;
    ++comb[i];
    for (int j = i + 1; j < n; ++j) comb[j] = comb[j - 1] + 1;
    return true;
  };
  if (r < n) return verts;
  do {
    Eigen::MatrixXd A(n, n);
    Eigen::VectorXd b(n);
    for (int i = 0; i < n; ++i) {
      A.row(i) = F.row(comb[i]);
      b[i] = g[comb[i]];
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
    lu.setThreshold(1e-10);
    if (!lu.isInvertible()) continue;
    const Eigen::VectorXd x = lu.solve(b);
    if (((F * x - g).array() <= tol).all()) {
      bool dup = false;
      for (const auto& v : verts)
        if ((v - x).lpNorm<Eigen::Infinity>() <= 1e-6) {
          dup = true;
          break;
        }
      if (!dup) verts.push_back(x);
    }
  } while (next_comb());
  return verts;
}

/// Membership in the convex hull of a point list, via a feasibility LP on
/// the barycentric weights.
inline bool in_hull(const std::vector<Eigen::VectorXd>& pts,
                    const Eigen::VectorXd& p, double tol = 1e-7) {
  if (pts.empty()) return false;
  const int n = static_cast<int>(p.size());
  const int k = static_cast<int>(pts.size());
  LinearProgram lp;
  lp.c = Eigen::VectorXd::Zero(k);
  lp.A_eq.resize(n + 1, k);
  for (int j = 0; j < k; ++j) lp.A_eq.col(j).head(n) = pts[j];
  lp.A_eq.row(n).setOnes();
  lp.b_eq.resize(n + 1);
  lp.b_eq.head(n) = p;
  lp.b_eq[n] = 1.0;
  lp.lower = Eigen::VectorXd::Zero(k);
  const LPSolution sol = solve_lp(lp);
  if (sol.status == LPStatus::Optimal) return true;
  if (sol.status == LPStatus::Infeasible) {
    // Retry with a small tolerance box so boundary points are not rejected
    // for roundoff reasons.
    LinearProgram relaxed = lp;
    relaxed.A_eq.resize(1, k);
    relaxed.A_eq.setOnes();
    relaxed.b_eq.resize(1);
    relaxed.b_eq[0] = 1.0;
    relaxed.A_in.resize(2 * n, k);
    for (int j = 0; j < k; ++j) {
      relaxed.A_in.col(j).head(n) = pts[j];
      relaxed.A_in.col(j).tail(n) = -pts[j];
    }
    relaxed.b_in.resize(2 * n);
    relaxed.b_in.head(n) = p.array() + tol;
    relaxed.b_in.tail(n) = -(p.array() - tol);
    return solve_lp(relaxed).status == LPStatus::Optimal;
  }
  return false;
}

/// Random bounded polytope with the origin interior: a loose box plus a few
/// random cutting rows.
inline HPolytope random_polytope(Rng& rng, int dim, int extra_rows) {
  HPolytope box = make_box(dim, 2.0 + rng.uniform01());
  const int base = box.rows();
  HPolytope P;
  P.F.resize(base + extra_rows, dim);
  P.g.resize(base + extra_rows);
  P.F.topRows(base) = box.F;
  P.g.head(base) = box.g;
  for (int i = 0; i < extra_rows; ++i) {
    Eigen::VectorXd f = rng.gaussian_vec(dim);
    while (f.norm() < 1e-3) f = rng.gaussian_vec(dim);
    f.normalize();
    P.F.row(base + i) = f;
    P.g[base + i] = rng.uniform(0.5, 2.5);
  }
  return P;
}

inline bool same_vertex_sets(const std::vector<Eigen::VectorXd>& a,
                             const std::vector<Eigen::VectorXd>& b,
                             double tol = 1e-6) {
  if (a.size() != b.size()) return false;
  for (const auto& p : a) {
    bool found = false;
    for (const auto& q : b)
      if ((p - q).lpNorm<Eigen::Infinity>() <= tol) {
        found = true;
        break;
      }
    if (!found) return false;
  }
  return true;
}

}  // namespace ddrhc::testing
