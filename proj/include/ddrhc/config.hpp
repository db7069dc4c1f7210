#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ddrhc/polytope.hpp"
#include "ddrhc/simulator.hpp"

namespace ddrhc {

/// Everything one experiment needs: plant, constraint sets, training size,
/// invariant-set iteration cap and simulation settings. Parses losslessly
/// from/to the versioned JSON schema (schema: 1).
struct ExperimentConfig {
  TruePlant plant;
  HPolytope state_set;
  HPolytope input_set;
  int training_count = 10;
  std::uint64_t training_seed = 0;
  int invariant_max_iter = 20;
  Eigen::VectorXd x0;
  int sim_steps = 50;
  std::vector<SimMode> sim_modes;
  bool stop_on_uub = false;
  int grace_steps = 0;
  std::uint64_t sim_seed = 0;
  std::string output_dir = ".";

  int state_dim() const { return plant.state_dim(); }
  int input_dim() const { return plant.input_dim(); }
  /// Noise shape (1/eps) I, with a tiny floor so eps == 0 stays well posed.
  Eigen::MatrixXd noise_shape() const;
  void validate() const;
};

ExperimentConfig read_config(const std::string& path);
void write_config(const std::string& path, const ExperimentConfig& cfg);

}  // namespace ddrhc
