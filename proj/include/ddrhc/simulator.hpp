#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ddrhc/consistency.hpp"
#include "ddrhc/controller.hpp"
#include "ddrhc/polytope.hpp"
#include "ddrhc/rng.hpp"

namespace ddrhc {

enum class NoiseMode { UniformIID, ConstantVector, CustomSequence };

/// The hidden system the controller is evaluated against.
struct TruePlant {
  Eigen::MatrixXd A;
  Eigen::MatrixXd B;
  double eps = 0.0;               // infinity-norm noise bound
  NoiseMode mode = NoiseMode::UniformIID;
  Eigen::VectorXd constant_noise; // ConstantVector mode
  std::vector<Eigen::VectorXd> custom_noise;  // CustomSequence mode
  std::uint64_t seed = 0;

  int state_dim() const { return static_cast<int>(A.rows()); }
  int input_dim() const { return static_cast<int>(B.cols()); }
  void validate() const;
};

enum class SimMode { RecedingHorizon, Static };

struct SimConfig {
  Eigen::VectorXd x0;
  int steps = 50;
  SimMode mode = SimMode::RecedingHorizon;
  /// When true, the run ends grace_steps after the first step whose optimal
  /// contraction reaches 1 (the terminal region).
  bool stop_on_uub = false;
  int grace_steps = 0;
  std::uint64_t seed = 0;
};

struct StepRecord {
  int k = 0;
  Eigen::VectorXd x;
  Eigen::VectorXd u;
  Eigen::VectorXd v;    // realized noise applied at this step
  double lambda = 0.0;  // +inf sentinel near the origin
  double psi = 0.0;
  int cs_rows = 0;      // halfspace rows of the consistency set when solving
  double solve_ms = 0.0;
};

struct TrajectoryLog {
  std::vector<StepRecord> steps;
  std::string mode;  // "rh" or "static"
  std::uint64_t seed = 0;
  std::uint64_t config_hash = 0;
  bool safety_ok = true;
  std::vector<int> violation_steps;
  int first_uub_step = -1;  // first k with lambda >= 1, -1 if none
};

/// Draws N training triples (states uniform in X, inputs uniform in U,
/// fresh noise within the plant bound) and retries with derived sub-seeds
/// until the data matrix has full column rank. Throws InfeasibleError when
/// the retry cap is exhausted.
DataDictionary gen_training_data(const TruePlant& plant, int N,
                                 const HPolytope& X, const HPolytope& U,
                                 std::uint64_t seed,
                                 const Eigen::MatrixXd& noise_shape,
                                 int max_retries = 25);

/// Closed-loop execution: solve the one-step synthesis at each state, apply
/// the input to the hidden plant, log, and (in receding-horizon mode) append
/// the observed triple to the consistency set. The invariant set is fixed
/// for the whole run.
TrajectoryLog run(const SimConfig& cfg, const TruePlant& plant,
                  const HPolytope& X_I, const HPolytope& U,
                  const Eigen::MatrixXd& noise_shape,
                  const DataDictionary& training);

/// Uniform sample of the polytope via its bounding box (rejection).
Eigen::VectorXd sample_polytope(const HPolytope& P, Rng& rng,
                                int max_attempts = 1000000);

}  // namespace ddrhc
