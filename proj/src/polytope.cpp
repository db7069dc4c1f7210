#include "ddrhc/polytope.hpp"

#include <algorithm>
#include <cmath>

#include "ddrhc/errors.hpp"
#include "ddrhc/lp.hpp"

namespace ddrhc {

void HPolytope::validate() const {
  if (F.rows() != g.size()) throw ConfigError("polytope: F/g row mismatch");
  if (F.rows() == 0 || F.cols() == 0) throw ConfigError("polytope: empty H-rep");
  if (!F.allFinite() || !g.allFinite())
    throw ConfigError("polytope: non-finite entries");
  for (int i = 0; i < F.rows(); ++i) {
    if (F.row(i).lpNorm<Eigen::Infinity>() <= 0.0)
      throw ConfigError("polytope: all-zero facet row");
  }
}

HPolytope make_box(int dim, double radius) {
  HPolytope P;
  P.F.resize(2 * dim, dim);
  P.F << Eigen::MatrixXd::Identity(dim, dim), -Eigen::MatrixXd::Identity(dim, dim);
  P.g = Eigen::VectorXd::Constant(2 * dim, radius);
  return P;
}

VPolytope box_vertices(int dim, double radius) {
  VPolytope V;
  const int count = 1 << dim;
  for (int mask = 0; mask < count; ++mask) {
    Eigen::VectorXd v(dim);
    for (int i = 0; i < dim; ++i) v[i] = (mask >> i & 1) ? radius : -radius;
    V.vertices.push_back(v);
  }
  return V;
}

VPolytope norm_ball_vertices(const Eigen::MatrixXd& shape) {
  if (shape.rows() != shape.cols())
    throw ConfigError("noise shape must be square");
  Eigen::FullPivLU<Eigen::MatrixXd> lu(shape);
  if (!lu.isInvertible())
    throw ConfigError("noise shape must be invertible");
  const int n = static_cast<int>(shape.rows());
  VPolytope V;
  for (const Eigen::VectorXd& c : box_vertices(n, 1.0).vertices)
    V.vertices.push_back(lu.solve(c));
  return V;
}

double gauge(const HPolytope& P, const Eigen::VectorXd& x) {
  P.validate();
  if (x.size() != P.dim()) throw ConfigError("gauge: dimension mismatch");
  if ((P.g.array() <= 0.0).any())
    throw GeometryError("gauge undefined: origin not strictly interior");
  const double m = (P.F * x).cwiseQuotient(P.g).maxCoeff();
  return std::max(0.0, m);
}

HPolytope normalized(const HPolytope& P) {
  P.validate();
  if ((P.g.array() <= 0.0).any())
    throw GeometryError("cannot normalize: some offset is <= 0");
  HPolytope out;
  out.F = P.g.cwiseInverse().asDiagonal() * P.F;
  out.g = Eigen::VectorXd::Ones(P.rows());
  return out;
}

SupportResult support(const HPolytope& P, const Eigen::VectorXd& direction) {
  P.validate();
  if (direction.size() != P.dim())
    throw ConfigError("support: dimension mismatch");
  // max direction.x over {Fx <= g} through its dual
  //   min g.y  s.t.  F^T y = direction, y >= 0,
  // whose equality multipliers are a maximizing point.
  LinearProgram d;
  d.c = P.g;
  d.A_eq = P.F.transpose();
  d.b_eq = direction;
  d.lower = Eigen::VectorXd::Zero(P.rows());
  const LPSolution sol = solve_lp(d);
  switch (sol.status) {
    case LPStatus::Optimal:
      return {true, sol.objective, sol.dual_eq};
    case LPStatus::Infeasible:
      return {false, 0.0, {}};
    case LPStatus::Unbounded:
      throw InfeasibleError("support of an empty set");
    default:
      throw NumericalError("support LP failed");
  }
}

bool is_nonempty(const HPolytope& P) {
  P.validate();
  if ((P.g.array() >= 0.0).all()) return true;  // origin is a member
  // Signed inradius: max t s.t. Fx + ||F_i|| t <= g. Nonnegative optimum
  // (or unboundedness) certifies a point of P.
  const int n = P.dim();
  HPolytope ext;
  ext.F.resize(P.rows(), n + 1);
  ext.F.leftCols(n) = P.F;
  ext.F.col(n) = P.F.rowwise().norm();
  ext.g = P.g;
  Eigen::VectorXd dir = Eigen::VectorXd::Zero(n + 1);
  dir[n] = 1.0;
  const SupportResult r = support(ext, dir);
  if (!r.bounded) return true;
  return r.value >= -1e-9 * std::max(1.0, P.g.lpNorm<Eigen::Infinity>());
}

HPolytope remove_redundancy(const HPolytope& P) {
  P.validate();
  if (!is_nonempty(P)) throw InfeasibleError("remove_redundancy: empty set");
  const int r = P.rows();
  std::vector<bool> active(r, true);

  // Cheap pre-pass: among rows with equal normals keep only the tightest.
  {
    Eigen::MatrixXd N = P.F;
    Eigen::VectorXd s(r);
    for (int i = 0; i < r; ++i) {
      s[i] = N.row(i).norm();
      N.row(i) /= s[i];
    }
    for (int i = 0; i < r; ++i) {
      if (!active[i]) continue;
      for (int j = i + 1; j < r; ++j) {
        if (!active[j]) continue;
        if ((N.row(i) - N.row(j)).lpNorm<Eigen::Infinity>() > 1e-12) continue;
        if (P.g[j] / s[j] >= P.g[i] / s[i])
          active[j] = false;
        else
          active[i] = false;
        if (!active[i]) break;
      }
    }
  }

  auto gather = [&](int skip) {
    HPolytope sub;
    int cnt = 0;
    for (int k = 0; k < r; ++k)
      if (active[k] && k != skip) ++cnt;
    sub.F.resize(cnt, P.dim());
    sub.g.resize(cnt);
    int idx = 0;
    for (int k = 0; k < r; ++k) {
      if (!active[k] || k == skip) continue;
      sub.F.row(idx) = P.F.row(k);
      sub.g[idx] = P.g[k];
      ++idx;
    }
    return sub;
  };

  for (int i = 0; i < r; ++i) {
    if (!active[i]) continue;
    const HPolytope others = gather(i);
    if (others.rows() == 0) continue;  // last surviving row
    const SupportResult res = support(others, P.F.row(i).transpose());
    if (res.bounded &&
        res.value <= P.g[i] + kGeomTol * std::max(1.0, std::abs(P.g[i])))
      active[i] = false;
  }
  HPolytope out = gather(-1);
  if (out.rows() == 0) throw NumericalError("remove_redundancy: no rows left");
  return out;
}

Containment contains(const HPolytope& outer, const HPolytope& inner) {
  outer.validate();
  inner.validate();
  if (outer.dim() != inner.dim())
    throw ConfigError("contains: dimension mismatch");
  const int rM = outer.rows();
  const int rN = inner.rows();
  Containment out;
  out.Y = Eigen::MatrixXd::Zero(rM, rN);
  for (int p = 0; p < rM; ++p) {
    LinearProgram d;
    d.c = inner.g;
    d.A_eq = inner.F.transpose();
    d.b_eq = outer.F.row(p).transpose();
    d.lower = Eigen::VectorXd::Zero(rN);
    const LPSolution sol = solve_lp(d);
    if (sol.status == LPStatus::Unbounded)
      throw InfeasibleError("contains: inner set is empty");
    if (sol.status == LPStatus::Infeasible) return {false, {}};
    if (sol.status != LPStatus::Optimal)
      throw NumericalError("contains: multiplier LP failed");
    if (sol.objective >
        outer.g[p] + kGeomTol * std::max(1.0, std::abs(outer.g[p])))
      return {false, {}};
    out.Y.row(p) = sol.z.transpose();
  }
  out.contained = true;
  return out;
}

bool verify_containment(const Eigen::MatrixXd& Y, const HPolytope& outer,
                        const HPolytope& inner, double tol) {
  if (Y.rows() != outer.rows() || Y.cols() != inner.rows()) return false;
  if ((Y.array() < -tol).any()) return false;
  const Eigen::MatrixXd R = Y * inner.F - outer.F;
  const double scale = std::max(1.0, outer.F.lpNorm<Eigen::Infinity>());
  if (R.lpNorm<Eigen::Infinity>() > tol * scale) return false;
  const Eigen::VectorXd s = Y * inner.g - outer.g;
  const double gscale = std::max(1.0, outer.g.lpNorm<Eigen::Infinity>());
  return (s.array() <= tol * gscale).all();
}

namespace {

struct DDVertex {
  Eigen::VectorXd p;
  std::vector<int> active;  // sorted row ids
};

std::vector<int> common_active(const DDVertex& a, const DDVertex& b) {
  std::vector<int> out;
  std::set_intersection(a.active.begin(), a.active.end(), b.active.begin(),
                        b.active.end(), std::back_inserter(out));
  return out;
}

void merge_active(std::vector<int>& dst, const std::vector<int>& src) {
  std::vector<int> merged;
  std::set_union(dst.begin(), dst.end(), src.begin(), src.end(),
                 std::back_inserter(merged));
  dst = std::move(merged);
}

}  // namespace

VPolytope vertex_enum(const HPolytope& P) {
  P.validate();
  const int n = P.dim();
  const int r = P.rows();

  // Bounding box from support values; unboundedness is a hard error.
  Eigen::VectorXd lo(n), hi(n);
  for (int i = 0; i < n; ++i) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
    e[i] = 1.0;
    SupportResult up = support(P, e);      // throws InfeasibleError if empty
    SupportResult dn = support(P, -e);
    if (!up.bounded || !dn.bounded)
      throw GeometryError("vertex_enum: unbounded polytope");
    hi[i] = up.value;
    lo[i] = -dn.value;
  }
  const double span = (hi - lo).maxCoeff();
  const double pad = 0.5 * std::max(1.0, span);

  // Normalized row table: 2n box rows then the polytope's own rows.
  Eigen::MatrixXd rows(2 * n + r, n);
  Eigen::VectorXd offs(2 * n + r);
  rows.setZero();
  for (int i = 0; i < n; ++i) {
    rows(2 * i, i) = 1.0;
    offs[2 * i] = hi[i] + pad;
    rows(2 * i + 1, i) = -1.0;
    offs[2 * i + 1] = -(lo[i] - pad);
  }
  for (int i = 0; i < r; ++i) {
    const double s = P.F.row(i).norm();
    rows.row(2 * n + i) = P.F.row(i) / s;
    offs[2 * n + i] = P.g[i] / s;
  }

  const double box_scale =
      std::max(hi.cwiseAbs().maxCoeff(), lo.cwiseAbs().maxCoeff()) + pad;
  const double tol_on = kGeomTol * std::max(1.0, box_scale);

  // Start from the padded box corners.
  std::vector<DDVertex> verts;
  for (int mask = 0; mask < (1 << n); ++mask) {
    DDVertex v;
    v.p.resize(n);
    for (int i = 0; i < n; ++i) {
      const bool up = (mask >> i) & 1;
      v.p[i] = up ? hi[i] + pad : lo[i] - pad;
      v.active.push_back(up ? 2 * i : 2 * i + 1);
    }
    std::sort(v.active.begin(), v.active.end());
    verts.push_back(std::move(v));
  }

  auto rank_at_least = [&](const std::vector<int>& ids, int need) {
    if (static_cast<int>(ids.size()) < need) return false;
    if (need <= 0) return true;
    Eigen::MatrixXd M(ids.size(), n);
    for (size_t k = 0; k < ids.size(); ++k) M.row(k) = rows.row(ids[k]);
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(M);
    qr.setThreshold(1e-10);
    return qr.rank() >= need;
  };

  for (int i = 0; i < r; ++i) {
    const int id = 2 * n + i;
    const Eigen::RowVectorXd f = rows.row(id);
    const double gamma = offs[id];

    std::vector<DDVertex> inside, onset;
    std::vector<DDVertex> outside;
    for (auto& v : verts) {
      const double s = f.dot(v.p) - gamma;
      if (s > tol_on)
        outside.push_back(std::move(v));
      else if (s < -tol_on)
        inside.push_back(std::move(v));
      else {
        auto it = std::lower_bound(v.active.begin(), v.active.end(), id);
        v.active.insert(it, id);
        onset.push_back(std::move(v));
      }
    }
    if (outside.empty()) {
      verts = std::move(inside);
      for (auto& v : onset) verts.push_back(std::move(v));
      continue;
    }

    std::vector<DDVertex> fresh;
    for (const auto& a : inside) {
      const double fa = f.dot(a.p);
      for (const auto& b : outside) {
        std::vector<int> common = common_active(a, b);
        if (!rank_at_least(common, n - 1)) continue;
        const double fb = f.dot(b.p);
        const double t = (gamma - fa) / (fb - fa);
        DDVertex nv;
        nv.p = a.p + t * (b.p - a.p);
        nv.active = std::move(common);
        auto it = std::lower_bound(nv.active.begin(), nv.active.end(), id);
        nv.active.insert(it, id);
        bool dup = false;
        for (auto& ex : fresh) {
          if ((ex.p - nv.p).lpNorm<Eigen::Infinity>() <= tol_on) {
            merge_active(ex.active, nv.active);
            dup = true;
            break;
          }
        }
        if (!dup) fresh.push_back(std::move(nv));
      }
    }
    verts = std::move(inside);
    for (auto& v : onset) {
      bool dup = false;
      for (auto& ex : fresh) {
        if ((ex.p - v.p).lpNorm<Eigen::Infinity>() <= tol_on) {
          merge_active(ex.active, v.active);
          dup = true;
          break;
        }
      }
      if (!dup) verts.push_back(std::move(v));
    }
    for (auto& v : fresh) verts.push_back(std::move(v));
    if (verts.empty()) throw InfeasibleError("vertex_enum: empty polytope");
  }

  // Final hygiene: every vertex must satisfy the input rows.
  std::vector<Eigen::VectorXd> pts;
  for (const auto& v : verts) {
    bool ok = true;
    for (int i = 0; i < r && ok; ++i)
      ok = rows.row(2 * n + i).dot(v.p) <= offs[2 * n + i] + 10 * tol_on;
    if (ok) pts.push_back(v.p);
  }
  // Global dedup, then a deterministic order.
  std::vector<Eigen::VectorXd> uniq;
  for (const auto& p : pts) {
    bool dup = false;
    for (const auto& q : uniq)
      if ((p - q).lpNorm<Eigen::Infinity>() <= tol_on) {
        dup = true;
        break;
      }
    if (!dup) uniq.push_back(p);
  }
  std::sort(uniq.begin(), uniq.end(),
            [](const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
              for (int i = 0; i < a.size(); ++i) {
                if (a[i] < b[i]) return true;
                if (a[i] > b[i]) return false;
              }
              return false;
            });
  if (uniq.empty()) throw InfeasibleError("vertex_enum: empty polytope");
  VPolytope out;
  out.vertices = std::move(uniq);
  return out;
}

HPolytope project(const HPolytope& P, const std::vector<int>& keep) {
  P.validate();
  const int n = P.dim();
  if (keep.empty()) throw ConfigError("project: no coordinates kept");
  std::vector<int> keep_sorted = keep;
  std::sort(keep_sorted.begin(), keep_sorted.end());
  if (std::unique(keep_sorted.begin(), keep_sorted.end()) != keep_sorted.end())
    throw ConfigError("project: duplicate indices");
  if (keep_sorted.front() < 0 || keep_sorted.back() >= n)
    throw ConfigError("project: index out of range");

  std::vector<int> elim;
  {
    std::vector<bool> kept(n, false);
    for (int k : keep_sorted) kept[k] = true;
    for (int i = 0; i < n; ++i)
      if (!kept[i]) elim.push_back(i);
  }

  Eigen::MatrixXd F = P.F;
  Eigen::VectorXd g = P.g;

  auto coef_class = [](double a, double scale) {
    const double tol = 1e-12 * std::max(1.0, scale);
    if (a > tol) return +1;
    if (a < -tol) return -1;
    return 0;
  };

  while (!elim.empty()) {
    // Pick the variable whose elimination creates the fewest rows.
    size_t best_k = 0;
    long best_cost = -1;
    for (size_t k = 0; k < elim.size(); ++k) {
      long pos = 0, neg = 0;
      for (int i = 0; i < F.rows(); ++i) {
        const int c = coef_class(F(i, elim[k]), F.row(i).lpNorm<Eigen::Infinity>());
        if (c > 0) ++pos;
        if (c < 0) ++neg;
      }
      const long cost = pos * neg;
      if (best_cost < 0 || cost < best_cost) {
        best_cost = cost;
        best_k = k;
      }
    }
    const int e = elim[best_k];
    elim.erase(elim.begin() + static_cast<long>(best_k));

    std::vector<int> pos, neg, zero;
    for (int i = 0; i < F.rows(); ++i) {
      const int c = coef_class(F(i, e), F.row(i).lpNorm<Eigen::Infinity>());
      if (c > 0)
        pos.push_back(i);
      else if (c < 0)
        neg.push_back(i);
      else
        zero.push_back(i);
    }

    const long n_new = static_cast<long>(zero.size()) +
                       static_cast<long>(pos.size()) * static_cast<long>(neg.size());
    Eigen::MatrixXd F2(n_new, n);
    Eigen::VectorXd g2(n_new);
    long idx = 0;
    for (int i : zero) {
      F2.row(idx) = F.row(i);
      g2[idx] = g[i];
      ++idx;
    }
    for (int i : pos) {
      const Eigen::RowVectorXd ri = F.row(i) / F(i, e);
      const double gi = g[i] / F(i, e);
      for (int j : neg) {
        const double s = -F(j, e);
        F2.row(idx) = ri + F.row(j) / s;
        g2[idx] = gi + g[j] / s;
        ++idx;
      }
    }
    F2.col(e).setZero();

    // Drop vacuous rows; a zero row with negative offset means emptiness.
    std::vector<int> live;
    for (int i = 0; i < F2.rows(); ++i) {
      const double norm = F2.row(i).lpNorm<Eigen::Infinity>();
      if (norm <= 1e-12) {
        if (g2[i] < -1e-9)
          throw InfeasibleError("project: empty polytope");
        continue;
      }
      live.push_back(i);
    }
    if (live.empty())
      throw GeometryError("project: projection is the whole subspace");
    Eigen::MatrixXd F3(live.size(), n);
    Eigen::VectorXd g3(live.size());
    for (size_t i = 0; i < live.size(); ++i) {
      F3.row(i) = F2.row(live[i]);
      g3[i] = g2[live[i]];
    }

    const HPolytope cleaned = remove_redundancy({F3, g3});
    F = cleaned.F;
    g = cleaned.g;
  }

  HPolytope out;
  out.F.resize(F.rows(), keep_sorted.size());
  for (size_t k = 0; k < keep_sorted.size(); ++k)
    out.F.col(k) = F.col(keep_sorted[k]);
  out.g = g;
  return out;
}

HPolytope intersect(const HPolytope& P, const HPolytope& Q) {
  P.validate();
  Q.validate();
  if (P.dim() != Q.dim()) throw ConfigError("intersect: dimension mismatch");
  HPolytope stacked;
  stacked.F.resize(P.rows() + Q.rows(), P.dim());
  stacked.F << P.F, Q.F;
  stacked.g.resize(P.rows() + Q.rows());
  stacked.g << P.g, Q.g;
  return remove_redundancy(stacked);
}

ShrinkResult pontryagin_shrink(const HPolytope& P, const VPolytope& noise) {
  P.validate();
  if (noise.vertices.empty())
    throw ConfigError("pontryagin_shrink: empty noise vertex list");
  if (noise.dim() != P.dim())
    throw ConfigError("pontryagin_shrink: dimension mismatch");
  ShrinkResult out;
  out.set.F = P.F;
  out.set.g = P.g;
  for (int i = 0; i < P.rows(); ++i) {
    double worst = -std::numeric_limits<double>::infinity();
    for (const auto& v : noise.vertices)
      worst = std::max(worst, P.F.row(i).dot(v));
    out.set.g[i] -= worst;
  }
  out.origin_interior = (out.set.g.array() > 0.0).all();
  return out;
}

}  // namespace ddrhc
