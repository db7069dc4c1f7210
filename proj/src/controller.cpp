#include "ddrhc/controller.hpp"

#include <chrono>
#include <cmath>
#include <limits>

#include "ddrhc/errors.hpp"

namespace ddrhc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct StackedSystem {
  Eigen::MatrixXd N;  // consistency rows (+/-) and, unless noise-free, V rows
  Eigen::VectorXd q;
  int n_cols = 0;     // n^2 + n*m (+ n with noise)
};

StackedSystem stack_constraint_polytope(const ConsistencySet& cs,
                                        bool noise_free) {
  const int n = cs.state_dim();
  const int m = cs.input_dim();
  const long kr = cs.state_kron().rows();
  const int vr = noise_free ? 0 : n;
  StackedSystem s;
  s.n_cols = n * n + n * m + (noise_free ? 0 : n);
  s.N.setZero(2 * kr + 2 * vr, s.n_cols);
  s.q.resize(2 * kr + 2 * vr);
  s.N.block(0, 0, kr, n * n) = cs.state_kron();
  s.N.block(0, n * n, kr, n * m) = cs.input_kron();
  s.N.block(kr, 0, kr, n * n) = -cs.state_kron();
  s.N.block(kr, n * n, kr, n * m) = -cs.input_kron();
  s.q.head(kr) = Eigen::VectorXd::Ones(kr) + cs.target();
  s.q.segment(kr, kr) = Eigen::VectorXd::Ones(kr) - cs.target();
  if (!noise_free) {
    s.N.block(2 * kr, n * n + n * m, n, n) = cs.noise_shape();
    s.N.block(2 * kr + n, n * n + n * m, n, n) = -cs.noise_shape();
    s.q.tail(2 * n).setOnes();
  }
  return s;
}

// Carrier rows applied to the stacked coefficient vector at (x, u): the
// target of the multiplier identity. The input block is linear in u and is
// assembled by the LP; this returns it for a concrete u.
Eigen::MatrixXd carrier_image(const HPolytope& carrier,
                              const Eigen::VectorXd& x,
                              const Eigen::VectorXd& u, bool noise_free) {
  const int n = static_cast<int>(x.size());
  const int m = static_cast<int>(u.size());
  const int rG = carrier.rows();
  Eigen::MatrixXd M(rG, n * n + n * m + (noise_free ? 0 : n));
  for (int p = 0; p < rG; ++p) {
    for (int i = 0; i < n; ++i) {
      for (int r = 0; r < n; ++r) M(p, i * n + r) = carrier.F(p, i) * x[r];
      for (int j = 0; j < m; ++j)
        M(p, n * n + i * m + j) = carrier.F(p, i) * u[j];
    }
    if (!noise_free) M.block(p, n * n + n * m, 1, n) = carrier.F.row(p);
  }
  return M;
}

}  // namespace

ControllerContext make_context(const HPolytope& carrier,
                               const HPolytope& input_set,
                               const ConsistencySet& cs) {
  ControllerContext ctx;
  ctx.carrier = normalized(carrier);
  ctx.input_set = input_set;
  ctx.cs = cs;
  ctx.noise_vertices = norm_ball_vertices(cs.noise_shape());
  return ctx;
}

ControlDecision solve_dual(const ControllerContext& ctx,
                           const Eigen::VectorXd& x) {
  const auto t0 = std::chrono::steady_clock::now();
  const int n = ctx.cs.state_dim();
  const int m = ctx.cs.input_dim();
  if (x.size() != n) throw ConfigError("solve_dual: state dimension mismatch");
  const HPolytope& G = ctx.carrier;
  const int rG = G.rows();
  const int rH = ctx.input_set.rows();

  StackedSystem sys = stack_constraint_polytope(ctx.cs, ctx.noise_free);
  const int nN = static_cast<int>(sys.N.rows());
  const int nC = sys.n_cols;

  // Row scaling keeps the simplex well conditioned when the noise shape is
  // large (tight bounds); the returned multipliers are unscaled again below.
  Eigen::VectorXd rowscale(nN);
  for (int t = 0; t < nN; ++t)
    rowscale[t] = std::max(1.0, sys.N.row(t).lpNorm<Eigen::Infinity>());
  Eigen::MatrixXd Ns = rowscale.cwiseInverse().asDiagonal() * sys.N;
  Eigen::VectorXd qs = sys.q.cwiseQuotient(rowscale);

  const double psi = gauge(G, x);
  const bool near = psi <= kLambdaFloor;
  const double rhs_coef = near ? 1.0 : psi;

  const int nY = rG * nN;
  const int n_vars = nY + m + 1;  // multipliers, input, contraction
  const int lam = nY + m;

  LinearProgram lp;
  lp.c = Eigen::VectorXd::Zero(n_vars);
  lp.c[lam] = 1.0;
  lp.lower = Eigen::VectorXd::Constant(n_vars, -kInf);
  lp.lower.head(nY).setZero();
  lp.lower[lam] = 0.0;

  // Multiplier identity rows, one per (carrier row, coefficient column).
  lp.A_eq.setZero(static_cast<long>(rG) * nC, n_vars);
  lp.b_eq.resize(static_cast<long>(rG) * nC);
  for (int p = 0; p < rG; ++p) {
    lp.A_eq.block(static_cast<long>(p) * nC, static_cast<long>(p) * nN, nC, nN) =
        Ns.transpose();
    for (int i = 0; i < n; ++i) {
      for (int r = 0; r < n; ++r)
        lp.b_eq[static_cast<long>(p) * nC + i * n + r] = G.F(p, i) * x[r];
      for (int j = 0; j < m; ++j) {
        lp.A_eq(static_cast<long>(p) * nC + n * n + i * m + j, nY + j) =
            -G.F(p, i);
        lp.b_eq[static_cast<long>(p) * nC + n * n + i * m + j] = 0.0;
      }
      if (!ctx.noise_free)
        for (int r = 0; r < n; ++r)
          lp.b_eq[static_cast<long>(p) * nC + n * n + n * m + r] = G.F(p, r);
    }
  }

  // Offset rows Y q <= rhs_coef * lambda, plus the input constraints.
  lp.A_in.setZero(rG + rH, n_vars);
  lp.b_in.setZero(rG + rH);
  for (int p = 0; p < rG; ++p) {
    lp.A_in.row(p).segment(static_cast<long>(p) * nN, nN) = qs.transpose();
    lp.A_in(p, lam) = -rhs_coef;
  }
  lp.A_in.block(rG, nY, rH, m) = ctx.input_set.F;
  lp.b_in.tail(rH) = ctx.input_set.g;

  const LPSolution sol = solve_lp(lp);
  ControlDecision d;
  d.status = sol.status;
  d.psi = psi;
  d.near_origin = near;
  if (sol.status == LPStatus::Infeasible)
    throw InfeasibleError("state outside robustly controllable region");
  if (sol.status != LPStatus::Optimal)
    throw NumericalError(std::string("one-step synthesis LP: ") +
                         to_string(sol.status));

  d.u = sol.z.segment(nY, m);
  const double value = sol.z[lam];
  d.lambda = near ? kInf : value;
  d.gauge_bound = near ? value : value * psi;
  d.Y.resize(rG, nN);
  for (int p = 0; p < rG; ++p)
    for (int t = 0; t < nN; ++t)
      d.Y(p, t) = sol.z[static_cast<long>(p) * nN + t] / rowscale[t];
  d.solve_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return d;
}

ControlDecision solve_primal_vertex(const ControllerContext& ctx,
                                    const Eigen::VectorXd& x,
                                    const std::vector<SystemVertex>& vertices) {
  const auto t0 = std::chrono::steady_clock::now();
  const int n = ctx.cs.state_dim();
  const int m = ctx.cs.input_dim();
  if (x.size() != n)
    throw ConfigError("solve_primal_vertex: state dimension mismatch");
  if (vertices.empty())
    throw ConfigError("solve_primal_vertex: empty vertex list");
  const HPolytope& G = ctx.carrier;
  const int rG = G.rows();
  const int rH = ctx.input_set.rows();

  const double psi = gauge(G, x);
  const bool near = psi <= kLambdaFloor;
  const double rhs_coef = near ? 1.0 : psi;

  Eigen::VectorXd noise_support = Eigen::VectorXd::Zero(rG);
  if (!ctx.noise_free) {
    for (int p = 0; p < rG; ++p) {
      double w = -kInf;
      for (const auto& v : ctx.noise_vertices.vertices)
        w = std::max(w, G.F.row(p).dot(v));
      noise_support[p] = w;
    }
  }

  // Feasible (u, lambda) region; minimizing lambda is a support query.
  HPolytope Q;
  Q.F.setZero(static_cast<long>(vertices.size()) * rG + rH + 1, m + 1);
  Q.g.resize(Q.F.rows());
  long at = 0;
  for (const auto& sys : vertices) {
    Q.F.block(at, 0, rG, m) = G.F * sys.B;
    Q.F.block(at, m, rG, 1).setConstant(-rhs_coef);
    Q.g.segment(at, rG) = -(G.F * (sys.A * x)) - noise_support;
    at += rG;
  }
  Q.F.block(at, 0, rH, m) = ctx.input_set.F;
  Q.g.segment(at, rH) = ctx.input_set.g;
  Q.F(at + rH, m) = -1.0;  // lambda >= 0
  Q.g[at + rH] = 0.0;

  Eigen::VectorXd dir = Eigen::VectorXd::Zero(m + 1);
  dir[m] = -1.0;
  SupportResult res;
  try {
    res = support(Q, dir);
  } catch (const InfeasibleError&) {
    throw InfeasibleError("state outside robustly controllable region");
  }
  if (!res.bounded)
    throw NumericalError("vertex synthesis LP unbounded");

  ControlDecision d;
  d.status = LPStatus::Optimal;
  d.psi = psi;
  d.near_origin = near;
  d.u = res.maximizer.head(m);
  const double value = -res.value;
  d.lambda = near ? kInf : value;
  d.gauge_bound = near ? value : value * psi;
  d.solve_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return d;
}

bool verify_certificate(const ControlDecision& d, const ControllerContext& ctx,
                        const Eigen::VectorXd& x, double tol) {
  if (d.Y.size() == 0) return false;
  const StackedSystem sys = stack_constraint_polytope(ctx.cs, ctx.noise_free);
  if (d.Y.rows() != ctx.carrier.rows() || d.Y.cols() != sys.N.rows())
    return false;
  if ((d.Y.array() < -tol).any()) return false;

  const Eigen::MatrixXd M =
      carrier_image(ctx.carrier, x, d.u, ctx.noise_free);
  const Eigen::MatrixXd R = d.Y * sys.N - M;
  const double mscale = std::max(1.0, M.lpNorm<Eigen::Infinity>());
  if (R.lpNorm<Eigen::Infinity>() > tol * mscale) return false;

  const Eigen::VectorXd s =
      d.Y * sys.q - Eigen::VectorXd::Constant(ctx.carrier.rows(), d.gauge_bound);
  const double gscale = std::max(1.0, std::abs(d.gauge_bound));
  return (s.array() <= tol * gscale).all();
}

}  // namespace ddrhc
