#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cstring>
#include <limits>

#include "ddrhc/lp.hpp"
#include "ddrhc/rng.hpp"
#include "helpers.hpp"

using namespace ddrhc;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

LinearProgram one_var(double lo) {
  LinearProgram lp;
  lp.c = Eigen::VectorXd::Ones(1);
  lp.A_in.resize(1, 1);
  lp.A_in << -1.0;
  lp.b_in.resize(1);
  lp.b_in << -lo;  // x >= lo
  return lp;
}
}  // namespace

TEST_CASE("minimize x subject to x >= 1") {
  const LPSolution sol = solve_lp(one_var(1.0));
  REQUIRE(sol.status == LPStatus::Optimal);
  CHECK(sol.z[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(sol.objective == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(sol.iterations >= 0);
}

TEST_CASE("conflicting bounds are infeasible") {
  LinearProgram lp = one_var(1.0);
  lp.A_in.conservativeResize(2, 1);
  lp.A_in(1, 0) = 1.0;
  lp.b_in.conservativeResize(2);
  lp.b_in[1] = 0.0;  // x <= 0 together with x >= 1
  CHECK(solve_lp(lp).status == LPStatus::Infeasible);
}

TEST_CASE("free descent direction is unbounded") {
  LinearProgram lp;
  lp.c = Eigen::VectorXd::Ones(1);
  lp.A_in.resize(1, 1);
  lp.A_in << 1.0;
  lp.b_in.resize(1);
  lp.b_in << 5.0;  // x <= 5, no lower bound
  CHECK(solve_lp(lp).status == LPStatus::Unbounded);
}

TEST_CASE("equality constraints and finite lower bounds") {
  // min x + 2y  s.t.  x + y == 2, x >= 0, y >= 0  ->  (2, 0)
  LinearProgram lp;
  lp.c.resize(2);
  lp.c << 1.0, 2.0;
  lp.A_eq.resize(1, 2);
  lp.A_eq << 1.0, 1.0;
  lp.b_eq.resize(1);
  lp.b_eq << 2.0;
  lp.lower = Eigen::VectorXd::Zero(2);
  const LPSolution sol = solve_lp(lp);
  REQUIRE(sol.status == LPStatus::Optimal);
  CHECK(sol.objective == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(sol.z[0] == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(sol.z[1] == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("negative lower bounds shift correctly") {
  LinearProgram lp;
  lp.c = Eigen::VectorXd::Ones(1);
  lp.lower = Eigen::VectorXd::Constant(1, -5.0);
  lp.A_in.resize(1, 1);
  lp.A_in << 1.0;
  lp.b_in.resize(1);
  lp.b_in << 10.0;
  const LPSolution sol = solve_lp(lp);
  REQUIRE(sol.status == LPStatus::Optimal);
  CHECK(sol.z[0] == doctest::Approx(-5.0).epsilon(1e-12));
}

TEST_CASE("redundant equality rows are tolerated") {
  // x + y == 1 stated twice plus x - y == 0 -> (0.5, 0.5)
  LinearProgram lp;
  lp.c.resize(2);
  lp.c << 1.0, 1.0;
  lp.A_eq.resize(3, 2);
  lp.A_eq << 1, 1, 1, 1, 1, -1;
  lp.b_eq.resize(3);
  lp.b_eq << 1.0, 1.0, 0.0;
  const LPSolution sol = solve_lp(lp);
  REQUIRE(sol.status == LPStatus::Optimal);
  CHECK(sol.z[0] == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(sol.z[1] == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("classic degenerate cycling instance terminates") {
  // Beale's example; cycles under naive most-negative pricing without
  // anti-cycling safeguards.
  LinearProgram lp;
  lp.c.resize(4);
  lp.c << -0.75, 150.0, -0.02, 6.0;
  lp.A_in.resize(3, 4);
  lp.A_in << 0.25, -60.0, -1.0 / 25.0, 9.0,
      0.5, -90.0, -1.0 / 50.0, 3.0,
      0.0, 0.0, 1.0, 0.0;
  lp.b_in.resize(3);
  lp.b_in << 0.0, 0.0, 1.0;
  lp.lower = Eigen::VectorXd::Zero(4);
  const LPSolution sol = solve_lp(lp);
  REQUIRE(sol.status == LPStatus::Optimal);
  CHECK(sol.objective == doctest::Approx(-0.05).epsilon(1e-9));
}

TEST_CASE("random bounded programs match vertex brute force") {
  Rng rng(2024);
  int solved = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 2 + static_cast<int>(rng.next_u64() % 5);  // 2..6
    const int extra = 2 + static_cast<int>(rng.next_u64() % 7);
    const HPolytope P = ddrhc::testing::random_polytope(rng, n, extra);
    Eigen::VectorXd c = rng.gaussian_vec(n);

    const auto verts = ddrhc::testing::brute_force_vertices(P.F, P.g);
    REQUIRE(!verts.empty());
    double best = kInf;
    for (const auto& v : verts) best = std::min(best, c.dot(v));

    LinearProgram lp;
    lp.c = c;
    lp.A_in = P.F;
    lp.b_in = P.g;
    const LPSolution sol = solve_lp(lp);
    REQUIRE(sol.status == LPStatus::Optimal);
    CHECK(std::abs(sol.objective - best) <= 1e-8 * std::max(1.0, std::abs(best)));
    // Weak duality spot check: no enumerated feasible point does better.
    for (const auto& v : verts) CHECK(c.dot(v) >= sol.objective - 1e-9);
    ++solved;
  }
  CHECK(solved == 60);
}

TEST_CASE("identical inputs give bit-identical outputs") {
  Rng rng(77);
  const HPolytope P = ddrhc::testing::random_polytope(rng, 4, 6);
  const Eigen::VectorXd c = rng.gaussian_vec(4);
  LinearProgram lp;
  lp.c = c;
  lp.A_in = P.F;
  lp.b_in = P.g;
  const LPSolution a = solve_lp(lp);
  const LPSolution b = solve_lp(lp);
  REQUIRE(a.status == LPStatus::Optimal);
  REQUIRE(b.status == LPStatus::Optimal);
  CHECK(a.iterations == b.iterations);
  CHECK(std::memcmp(a.z.data(), b.z.data(), sizeof(double) * a.z.size()) == 0);
  CHECK(std::memcmp(&a.objective, &b.objective, sizeof(double)) == 0);
}

TEST_CASE("iteration cap is never hit on the working sizes") {
  Rng rng(5150);
  for (int trial = 0; trial < 10; ++trial) {
    const HPolytope P = ddrhc::testing::random_polytope(rng, 5, 10);
    LinearProgram lp;
    lp.c = rng.gaussian_vec(5);
    lp.A_in = P.F;
    lp.b_in = P.g;
    const LPSolution sol = solve_lp(lp);
    REQUIRE(sol.status == LPStatus::Optimal);
    CHECK(sol.iterations < 10000);
  }
}

TEST_CASE("dual multipliers recover the support maximizer") {
  // max (1,0).x over the unit square through the dual program directly.
  LinearProgram d;
  const HPolytope sq = make_box(2, 1.0);
  d.c = sq.g;
  d.A_eq = sq.F.transpose();
  d.b_eq.resize(2);
  d.b_eq << 1.0, 0.0;
  d.lower = Eigen::VectorXd::Zero(4);
  const LPSolution sol = solve_lp(d);
  REQUIRE(sol.status == LPStatus::Optimal);
  CHECK(sol.objective == doctest::Approx(1.0).epsilon(1e-12));
  // The multipliers are a point of the square attaining the support value.
  CHECK(sol.dual_eq[0] == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(std::abs(sol.dual_eq[1]) <= 1.0 + 1e-9);
}
