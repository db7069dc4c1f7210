#include "ddrhc/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "ddrhc/errors.hpp"

namespace ddrhc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// One standard-form column per original variable, two for free variables.
struct ColMap {
  int var;      // original variable index
  double sign;  // +1 or -1 (negative half of a split free variable)
};

struct Standardized {
  Eigen::MatrixXd A;  // m x n_cols, structural + slack + artificial columns
  Eigen::VectorXd b;  // >= 0 after row sign flips
  std::vector<ColMap> cols;     // structural columns only
  std::vector<double> shift;    // per original variable, 0 for free
  std::vector<bool> flipped;    // per row
  std::vector<int> orig_row;    // survives row drops; maps to eq-then-in order
  int m = 0;
  int n_struct = 0;   // structural columns
  int n_real = 0;     // structural + slack
  int n_total = 0;    // + artificial
  int m_eq = 0;
  int m_in = 0;
};

void validate(const LinearProgram& lp) {
  const int nv = lp.num_vars();
  if (nv <= 0) throw ConfigError("lp: empty objective");
  if (!lp.c.allFinite()) throw ConfigError("lp: non-finite objective");
  auto check_block = [&](const Eigen::MatrixXd& A, const Eigen::VectorXd& b, const char* name) {
    if (A.rows() != b.size())
      throw ConfigError(std::string("lp: row mismatch in ") + name);
    if (A.rows() > 0 && A.cols() != nv)
      throw ConfigError(std::string("lp: column mismatch in ") + name);
    if (A.rows() > 0 && (!A.allFinite() || !b.allFinite()))
      throw ConfigError(std::string("lp: non-finite entries in ") + name);
  };
  check_block(lp.A_eq, lp.b_eq, "equality block");
  check_block(lp.A_in, lp.b_in, "inequality block");
  if (lp.lower.size() != 0 && lp.lower.size() != nv)
    throw ConfigError("lp: lower-bound vector size mismatch");
}

Standardized standardize(const LinearProgram& lp) {
  const int nv = lp.num_vars();
  Standardized s;
  s.m_eq = static_cast<int>(lp.A_eq.rows());
  s.m_in = static_cast<int>(lp.A_in.rows());
  s.m = s.m_eq + s.m_in;

  s.shift.assign(nv, 0.0);
  for (int j = 0; j < nv; ++j) {
    const double lb = lp.lower.size() ? lp.lower[j] : -kInf;
    if (std::isfinite(lb)) {
      s.shift[j] = lb;
      s.cols.push_back({j, +1.0});
    } else {
      s.cols.push_back({j, +1.0});
      s.cols.push_back({j, -1.0});
    }
  }
  s.n_struct = static_cast<int>(s.cols.size());
  s.n_real = s.n_struct + s.m_in;
  s.n_total = s.n_real;  // artificial columns appended by the caller

  Eigen::VectorXd shift = Eigen::VectorXd::Zero(nv);
  for (int j = 0; j < nv; ++j) shift[j] = s.shift[j];

  s.A.setZero(s.m, s.n_real);
  s.b.resize(s.m);
  for (int k = 0; k < s.n_struct; ++k) {
    const ColMap& cm = s.cols[k];
    if (s.m_eq) s.A.col(k).head(s.m_eq) = cm.sign * lp.A_eq.col(cm.var);
    if (s.m_in) s.A.col(k).tail(s.m_in) = cm.sign * lp.A_in.col(cm.var);
  }
  if (s.m_eq) s.b.head(s.m_eq) = lp.b_eq - lp.A_eq * shift;
  if (s.m_in) s.b.tail(s.m_in) = lp.b_in - lp.A_in * shift;
  for (int i = 0; i < s.m_in; ++i) s.A(s.m_eq + i, s.n_struct + i) = 1.0;

  s.flipped.assign(s.m, false);
  s.orig_row.resize(s.m);
  for (int i = 0; i < s.m; ++i) {
    s.orig_row[i] = i;
    if (s.b[i] < 0) {
      s.A.row(i) = -s.A.row(i);
      s.b[i] = -s.b[i];
      s.flipped[i] = true;
    }
  }
  return s;
}

// Revised simplex working state over the standardized problem.
class Simplex {
 public:
  Simplex(Standardized& s, const SimplexOptions& opts) : s_(s), opts_(opts) {
    bscale_ = std::max(1.0, s_.b.size() ? s_.b.lpNorm<Eigen::Infinity>() : 0.0);
  }

  // Adds artificial columns for rows without a usable slack and builds the
  // starting basis.
  void init_basis() {
    std::vector<int> needs_artificial;
    basis_.assign(s_.m, -1);
    for (int i = 0; i < s_.m; ++i) {
      const int slack = (i >= s_.m_eq) ? s_.n_struct + (i - s_.m_eq) : -1;
      if (slack >= 0 && !s_.flipped[i]) {
        basis_[i] = slack;
      } else {
        needs_artificial.push_back(i);
      }
    }
    const int n_art = static_cast<int>(needs_artificial.size());
    s_.A.conservativeResize(Eigen::NoChange, s_.n_real + n_art);
    s_.A.rightCols(n_art).setZero();
    for (int k = 0; k < n_art; ++k) {
      const int row = needs_artificial[k];
      s_.A(row, s_.n_real + k) = 1.0;
      basis_[row] = s_.n_real + k;
    }
    s_.n_total = s_.n_real + n_art;
    sync_basic_flags();
    refactor();
  }

  bool refactor() {
    const int m = s_.m;
    Eigen::MatrixXd B(m, m);
    for (int i = 0; i < m; ++i) B.col(i) = s_.A.col(basis_[i]);
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(B);
    const Eigen::VectorXd d = lu.matrixLU().diagonal().cwiseAbs();
    if (m > 0) {
      const double dmax = d.maxCoeff();
      if (dmax <= 0 || d.minCoeff() < 1e-13 * dmax) return false;
    }
    Binv_ = lu.inverse();
    pivots_since_refactor_ = 0;
    return true;
  }

  // Minimizes cost over the current feasible basis; prices only columns
  // below `allowed`. Returns Optimal, Unbounded, IterationLimit or
  // NumericalFailure.
  LPStatus run(const Eigen::VectorXd& cost, int allowed, int* iterations) {
    const int m = s_.m;
    bool bland = false;
    int stall = 0;
    while (true) {
      if (*iterations >= opts_.max_iterations) return LPStatus::IterationLimit;
      if (pivots_since_refactor_ >= opts_.refactor_every) {
        if (!refactor()) return LPStatus::NumericalFailure;
      }
      Eigen::VectorXd beta = Binv_ * s_.b;
      Eigen::VectorXd cb(m);
      for (int i = 0; i < m; ++i) cb[i] = cost[basis_[i]];
      Eigen::VectorXd pi = Binv_.transpose() * cb;
      Eigen::VectorXd d =
          cost.head(allowed) - s_.A.leftCols(allowed).transpose() * pi;

      int enter = -1;
      if (bland) {
        for (int j = 0; j < allowed; ++j) {
          if (!is_basic_[j] && d[j] < -opts_.opt_tol) {
            enter = j;
            break;
          }
        }
      } else {
        double best = -opts_.opt_tol;
        for (int j = 0; j < allowed; ++j) {
          if (!is_basic_[j] && d[j] < best) {
            best = d[j];
            enter = j;
          }
        }
      }
      if (enter < 0) return LPStatus::Optimal;

      Eigen::VectorXd w = Binv_ * s_.A.col(enter);
      int leave = -1;
      double best_ratio = kInf;
      for (int i = 0; i < m; ++i) {
        if (w[i] > opts_.pivot_tol) {
          const double num = std::max(beta[i], 0.0);
          const double ratio = num / w[i];
          if (ratio < best_ratio - 1e-15 ||
              (ratio <= best_ratio + 1e-15 &&
               (leave < 0 || basis_[i] < basis_[leave]))) {
            best_ratio = ratio;
            leave = i;
          }
        }
      }
      if (leave < 0) return LPStatus::Unbounded;

      if (best_ratio <= 1e-12 * bscale_) {
        if (++stall > opts_.stall_limit) bland = true;
      } else {
        stall = 0;
      }
      pivot(leave, enter, w);
      ++(*iterations);
    }
  }

  // Pivots basic artificials out; rows that admit no pivot are redundant and
  // removed. Returns false on numerical breakdown.
  bool eliminate_artificials() {
    std::vector<int> drop_rows;
    for (int r = 0; r < s_.m; ++r) {
      if (basis_[r] < s_.n_real) continue;
      Eigen::RowVectorXd row = Binv_.row(r) * s_.A.leftCols(s_.n_real);
      int enter = -1;
      for (int j = 0; j < s_.n_real; ++j) {
        if (!is_basic_[j] && std::abs(row[j]) > 1e-9) {
          enter = j;
          break;
        }
      }
      if (enter >= 0) {
        Eigen::VectorXd w = Binv_ * s_.A.col(enter);
        pivot(r, enter, w);
      } else {
        drop_rows.push_back(r);
      }
    }
    if (!drop_rows.empty()) {
      std::vector<bool> dead(s_.m, false);
      for (int r : drop_rows) dead[r] = true;
      const int new_m = s_.m - static_cast<int>(drop_rows.size());
      Eigen::MatrixXd A2(new_m, s_.A.cols());
      Eigen::VectorXd b2(new_m);
      std::vector<bool> fl2;
      std::vector<int> orig2;
      std::vector<int> basis2;
      int k = 0;
      for (int i = 0; i < s_.m; ++i) {
        if (dead[i]) continue;
        A2.row(k) = s_.A.row(i);
        b2[k] = s_.b[i];
        fl2.push_back(s_.flipped[i]);
        orig2.push_back(s_.orig_row[i]);
        basis2.push_back(basis_[i]);
        ++k;
      }
      s_.A.swap(A2);
      s_.b.swap(b2);
      s_.flipped = std::move(fl2);
      s_.orig_row = std::move(orig2);
      s_.m = new_m;
      basis_ = std::move(basis2);
      sync_basic_flags();
      if (!refactor()) return false;
    }
    for (int b : basis_)
      if (b >= s_.n_real) return false;
    return true;
  }

  Eigen::VectorXd basic_values() const { return Binv_ * s_.b; }
  Eigen::VectorXd multipliers(const Eigen::VectorXd& cost) const {
    Eigen::VectorXd cb(s_.m);
    for (int i = 0; i < s_.m; ++i) cb[i] = cost[basis_[i]];
    return Binv_.transpose() * cb;
  }
  const std::vector<int>& basis() const { return basis_; }

 private:
  void sync_basic_flags() {
    is_basic_.assign(s_.n_total, false);
    for (int b : basis_) is_basic_[b] = true;
  }

  void pivot(int r, int enter, const Eigen::VectorXd& w) {
    is_basic_[basis_[r]] = false;
    is_basic_[enter] = true;
    basis_[r] = enter;
    Binv_.row(r) /= w[r];
    Eigen::VectorXd w2 = w;
    w2[r] = 0.0;
    Binv_.noalias() -= w2 * Binv_.row(r);
    ++pivots_since_refactor_;
  }

  Standardized& s_;
  const SimplexOptions& opts_;
  std::vector<int> basis_;
  std::vector<bool> is_basic_;
  Eigen::MatrixXd Binv_;
  int pivots_since_refactor_ = 0;
  double bscale_ = 1.0;
};

}  // namespace

const char* to_string(LPStatus s) {
  switch (s) {
    case LPStatus::Optimal: return "optimal";
    case LPStatus::Infeasible: return "infeasible";
    case LPStatus::Unbounded: return "unbounded";
    case LPStatus::IterationLimit: return "iteration-limit";
    case LPStatus::NumericalFailure: return "numerical-failure";
  }
  return "unknown";
}

LPSolution solve_lp(const LinearProgram& lp, const SimplexOptions& opts) {
  validate(lp);
  Standardized s = standardize(lp);
  Simplex simplex(s, opts);
  simplex.init_basis();

  LPSolution out;
  out.iterations = 0;

  // Phase 1: minimize the sum of artificial variables.
  if (s.n_total > s.n_real) {
    Eigen::VectorXd phase1 = Eigen::VectorXd::Zero(s.n_total);
    phase1.tail(s.n_total - s.n_real).setOnes();
    const LPStatus st = simplex.run(phase1, s.n_total, &out.iterations);
    if (st == LPStatus::IterationLimit || st == LPStatus::NumericalFailure ||
        st == LPStatus::Unbounded) {
      out.status = (st == LPStatus::Unbounded) ? LPStatus::NumericalFailure : st;
      return out;
    }
    const Eigen::VectorXd beta = simplex.basic_values();
    double art_sum = 0.0;
    for (int i = 0; i < s.m; ++i)
      if (simplex.basis()[i] >= s.n_real) art_sum += std::max(beta[i], 0.0);
    if (art_sum > opts.feas_tol * std::max(1.0, s.b.lpNorm<Eigen::Infinity>())) {
      out.status = LPStatus::Infeasible;
      return out;
    }
    if (!simplex.eliminate_artificials()) {
      out.status = LPStatus::NumericalFailure;
      return out;
    }
  }

  // Phase 2 over the real columns.
  Eigen::VectorXd cost = Eigen::VectorXd::Zero(s.A.cols());
  for (int k = 0; k < s.n_struct; ++k)
    cost[k] = s.cols[k].sign * lp.c[s.cols[k].var];
  const LPStatus st = simplex.run(cost, s.n_real, &out.iterations);
  if (st != LPStatus::Optimal) {
    out.status = st;
    return out;
  }

  Eigen::VectorXd w = Eigen::VectorXd::Zero(s.A.cols());
  const Eigen::VectorXd beta = simplex.basic_values();
  for (int i = 0; i < s.m; ++i) w[simplex.basis()[i]] = std::max(beta[i], 0.0);

  out.z = Eigen::VectorXd::Zero(lp.num_vars());
  for (int j = 0; j < lp.num_vars(); ++j) out.z[j] = s.shift[j];
  for (int k = 0; k < s.n_struct; ++k)
    out.z[s.cols[k].var] += s.cols[k].sign * w[k];
  out.objective = lp.c.dot(out.z);

  // Rows dropped as redundant in phase 1 get zero multipliers.
  const Eigen::VectorXd pi = simplex.multipliers(cost);
  out.dual_eq = Eigen::VectorXd::Zero(lp.A_eq.rows());
  out.dual_in = Eigen::VectorXd::Zero(lp.A_in.rows());
  for (int i = 0; i < s.m; ++i) {
    const double v = s.flipped[i] ? -pi[i] : pi[i];
    const int orig = s.orig_row[i];
    if (orig < s.m_eq)
      out.dual_eq[orig] = v;
    else
      out.dual_in[orig - s.m_eq] = v;
  }

  out.status = LPStatus::Optimal;
  return out;
}

}  // namespace ddrhc
