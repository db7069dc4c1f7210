#include "ddrhc/simulator.hpp"

#include <cmath>
#include <cstring>
#include <limits>

#include "ddrhc/errors.hpp"

namespace ddrhc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::uint64_t fnv_mix(std::uint64_t h, const void* data, size_t len) {
  const unsigned char* p = static_cast<const unsigned char*>(data);
  for (size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t fnv_vec(std::uint64_t h, const Eigen::VectorXd& v) {
  return fnv_mix(h, v.data(), sizeof(double) * v.size());
}

std::uint64_t hash_run(const SimConfig& cfg, const TruePlant& plant) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  h = fnv_vec(h, cfg.x0);
  h = fnv_mix(h, &cfg.steps, sizeof cfg.steps);
  const int mode = static_cast<int>(cfg.mode);
  h = fnv_mix(h, &mode, sizeof mode);
  h = fnv_mix(h, &cfg.seed, sizeof cfg.seed);
  h = fnv_mix(h, plant.A.data(), sizeof(double) * plant.A.size());
  h = fnv_mix(h, plant.B.data(), sizeof(double) * plant.B.size());
  h = fnv_mix(h, &plant.eps, sizeof plant.eps);
  return h;
}

Eigen::VectorXd draw_noise(const TruePlant& plant, int k, Rng& rng) {
  const int n = plant.state_dim();
  switch (plant.mode) {
    case NoiseMode::UniformIID:
      return rng.uniform_box(n, plant.eps);
    case NoiseMode::ConstantVector:
      return plant.constant_noise;
    case NoiseMode::CustomSequence:
      if (k >= static_cast<int>(plant.custom_noise.size()))
        throw ConfigError("custom noise sequence shorter than the run");
      return plant.custom_noise[k];
  }
  throw ConfigError("unknown noise mode");
}

}  // namespace

void TruePlant::validate() const {
  const int n = state_dim();
  if (A.cols() != n || B.rows() != n)
    throw ConfigError("plant: A must be square and B row-matched");
  if (!A.allFinite() || !B.allFinite())
    throw ConfigError("plant: non-finite entries");
  if (eps < 0.0) throw ConfigError("plant: negative noise bound");
  if (mode == NoiseMode::ConstantVector) {
    if (constant_noise.size() != n)
      throw ConfigError("plant: constant noise dimension mismatch");
    if (constant_noise.lpNorm<Eigen::Infinity>() > eps + 1e-12)
      throw ConfigError("plant: constant noise exceeds the bound");
  }
  if (mode == NoiseMode::CustomSequence) {
    for (const auto& v : custom_noise) {
      if (v.size() != n) throw ConfigError("plant: custom noise dimension");
      if (v.lpNorm<Eigen::Infinity>() > eps + 1e-12)
        throw ConfigError("plant: custom noise exceeds the bound");
    }
  }
}

Eigen::VectorXd sample_polytope(const HPolytope& P, Rng& rng,
                                int max_attempts) {
  const int n = P.dim();
  Eigen::VectorXd lo(n), hi(n);
  for (int i = 0; i < n; ++i) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
    e[i] = 1.0;
    const SupportResult up = support(P, e);
    const SupportResult dn = support(P, -e);
    if (!up.bounded || !dn.bounded)
      throw GeometryError("sample_polytope: unbounded set");
    hi[i] = up.value;
    lo[i] = -dn.value;
  }
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    Eigen::VectorXd x(n);
    for (int i = 0; i < n; ++i) x[i] = rng.uniform(lo[i], hi[i]);
    if (P.contains_point(x, 0.0)) return x;
  }
  throw NumericalError("sample_polytope: rejection sampling failed");
}

DataDictionary gen_training_data(const TruePlant& plant, int N,
                                 const HPolytope& X, const HPolytope& U,
                                 std::uint64_t seed,
                                 const Eigen::MatrixXd& noise_shape,
                                 int max_retries) {
  plant.validate();
  if (N < 1) throw ConfigError("gen_training_data: N must be >= 1");
  const int n = plant.state_dim();
  const int m = plant.input_dim();

  for (int attempt = 0; attempt < max_retries; ++attempt) {
    Rng rng(Rng::derive(seed, attempt));
    DataDictionary d;
    for (int k = 0; k < N; ++k) {
      DataTriple t;
      t.x = sample_polytope(X, rng);
      t.u = sample_polytope(U, rng);
      const Eigen::VectorXd v = rng.uniform_box(n, plant.eps);
      t.x_next = plant.A * t.x + plant.B * t.u + v;
      t.tag = DataTag::Training;
      d.triples.push_back(std::move(t));
    }
    (void)m;
    const ConsistencySet cs = ConsistencySet::build(d, noise_shape);
    if (cs.check_rank()) return d;
  }
  throw InfeasibleError(
      "training data never reached full column rank; increase N");
}

TrajectoryLog run(const SimConfig& cfg, const TruePlant& plant,
                  const HPolytope& X_I, const HPolytope& U,
                  const Eigen::MatrixXd& noise_shape,
                  const DataDictionary& training) {
  plant.validate();
  if (cfg.steps < 1) throw ConfigError("run: steps must be >= 1");
  const HPolytope carrier = normalized(X_I);
  if (gauge(carrier, cfg.x0) > 1.0 + kGeomTol)
    throw InfeasibleError("run: initial state outside the invariant set");

  ControllerContext ctx =
      make_context(carrier, U, ConsistencySet::build(training, noise_shape));

  TrajectoryLog log;
  log.mode = (cfg.mode == SimMode::RecedingHorizon) ? "rh" : "static";
  log.seed = cfg.seed;
  log.config_hash = hash_run(cfg, plant);

  Rng noise_rng(cfg.seed);
  Eigen::VectorXd x = cfg.x0;
  int uub_countdown = -1;
  for (int k = 0; k < cfg.steps; ++k) {
    const double g_now = gauge(carrier, x);
    if (g_now > 1.0 + 1e-6) {
      log.safety_ok = false;
      log.violation_steps.push_back(k);
    }

    const ControlDecision d = solve_dual(ctx, x);
    const Eigen::VectorXd v = draw_noise(plant, k, noise_rng);
    const Eigen::VectorXd x_next = plant.A * x + plant.B * d.u + v;

    StepRecord rec;
    rec.k = k;
    rec.x = x;
    rec.u = d.u;
    rec.v = v;
    rec.lambda = d.lambda;
    rec.psi = d.psi;
    rec.cs_rows = ctx.cs.row_count();
    rec.solve_ms = d.solve_seconds * 1e3;
    log.steps.push_back(std::move(rec));

    if (log.first_uub_step < 0 && !d.near_origin && d.lambda >= 1.0) {
      log.first_uub_step = k;
      if (cfg.stop_on_uub) uub_countdown = cfg.grace_steps;
    }

    if (cfg.mode == SimMode::RecedingHorizon) {
      DataTriple t;
      t.x = x;
      t.u = d.u;
      t.x_next = x_next;
      t.tag = DataTag::Execution;
      ctx.cs = ctx.cs.updated(t);
    }
    x = x_next;

    if (uub_countdown >= 0 && uub_countdown-- == 0) break;
  }

  // Terminal state check so the last transition is covered too.
  if (gauge(carrier, x) > 1.0 + 1e-6) {
    log.safety_ok = false;
    log.violation_steps.push_back(static_cast<int>(log.steps.size()));
  }
  return log;
}

}  // namespace ddrhc
