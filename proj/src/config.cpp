#include "ddrhc/config.hpp"

#include <cmath>
#include <fstream>

#include <json.hpp>

#include "ddrhc/errors.hpp"

namespace ddrhc {

namespace {

using nlohmann::json;

Eigen::VectorXd vec_of(const json& j, const std::string& what) {
  if (!j.is_array()) throw ConfigError(what + ": expected an array");
  Eigen::VectorXd v(j.size());
  for (size_t i = 0; i < j.size(); ++i) {
    v[i] = j[i].get<double>();
    if (!std::isfinite(v[i])) throw ConfigError(what + ": non-finite value");
  }
  return v;
}

Eigen::MatrixXd mat_of(const json& j, const std::string& what) {
  if (!j.is_array() || j.empty()) throw ConfigError(what + ": expected rows");
  Eigen::MatrixXd M(j.size(), vec_of(j[0], what).size());
  for (size_t i = 0; i < j.size(); ++i) {
    const Eigen::VectorXd r = vec_of(j[i], what);
    if (r.size() != M.cols()) throw ConfigError(what + ": ragged rows");
    M.row(i) = r;
  }
  return M;
}

json mat_json(const Eigen::MatrixXd& M) {
  json j = json::array();
  for (int i = 0; i < M.rows(); ++i) {
    json r = json::array();
    for (int c = 0; c < M.cols(); ++c) r.push_back(M(i, c));
    j.push_back(std::move(r));
  }
  return j;
}

json vec_json(const Eigen::VectorXd& v) {
  json j = json::array();
  for (int i = 0; i < v.size(); ++i) j.push_back(v[i]);
  return j;
}

/// Either { "box_radius": r } or a general { "F": ..., "g": ... } H-rep.
HPolytope set_of(const json& j, int dim, const std::string& what) {
  if (j.contains("box_radius")) {
    const double r = j["box_radius"].get<double>();
    if (!(r > 0.0)) throw ConfigError(what + ": box_radius must be positive");
    return make_box(dim, r);
  }
  if (j.contains("F") && j.contains("g")) {
    HPolytope P;
    P.F = mat_of(j["F"], what + ".F");
    P.g = vec_of(j["g"], what + ".g");
    P.validate();
    if (P.dim() != dim) throw ConfigError(what + ": dimension mismatch");
    return P;
  }
  throw ConfigError(what + ": expected box_radius or an F/g pair");
}

json set_json(const HPolytope& P) {
  json j;
  j["F"] = mat_json(P.F);
  j["g"] = vec_json(P.g);
  return j;
}

NoiseMode noise_mode_of(const std::string& s) {
  if (s == "uniform") return NoiseMode::UniformIID;
  if (s == "constant") return NoiseMode::ConstantVector;
  if (s == "custom") return NoiseMode::CustomSequence;
  throw ConfigError("unknown noise_mode \"" + s + "\"");
}

std::string noise_mode_str(NoiseMode m) {
  switch (m) {
    case NoiseMode::UniformIID: return "uniform";
    case NoiseMode::ConstantVector: return "constant";
    case NoiseMode::CustomSequence: return "custom";
  }
  return "uniform";
}

}  // namespace

Eigen::MatrixXd ExperimentConfig::noise_shape() const {
  const double eps = std::max(plant.eps, 1e-12);
  return Eigen::MatrixXd::Identity(state_dim(), state_dim()) / eps;
}

void ExperimentConfig::validate() const {
  plant.validate();
  state_set.validate();
  input_set.validate();
  if (state_set.dim() != state_dim())
    throw ConfigError("config: state set dimension mismatch");
  if (input_set.dim() != input_dim())
    throw ConfigError("config: input set dimension mismatch");
  if (x0.size() != state_dim())
    throw ConfigError("config: x0 dimension mismatch");
  if (training_count < 1) throw ConfigError("config: training count < 1");
  if (invariant_max_iter < 1) throw ConfigError("config: max_iter < 1");
  if (sim_steps < 1) throw ConfigError("config: steps < 1");
  if (sim_modes.empty()) throw ConfigError("config: no simulation modes");
}

ExperimentConfig read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("invalid JSON in " + path + ": " + e.what());
  }
  if (j.value("schema", 0) != 1)
    throw ConfigError(path + ": unsupported schema (expected 1)");

  ExperimentConfig cfg;
  try {
    const json& p = j.at("plant");
    cfg.plant.A = mat_of(p.at("A"), "plant.A");
    cfg.plant.B = mat_of(p.at("B"), "plant.B");
    cfg.plant.eps = p.at("eps").get<double>();
    cfg.plant.mode = noise_mode_of(p.value("noise_mode", "uniform"));
    if (p.contains("constant_noise"))
      cfg.plant.constant_noise = vec_of(p["constant_noise"], "constant_noise");
    if (p.contains("custom_noise"))
      for (const auto& row : p["custom_noise"])
        cfg.plant.custom_noise.push_back(vec_of(row, "custom_noise"));
    cfg.plant.seed = p.value("seed", 0ULL);

    const int n = cfg.plant.state_dim();
    const int m = cfg.plant.input_dim();
    cfg.state_set = set_of(j.at("state_set"), n, "state_set");
    cfg.input_set = set_of(j.at("input_set"), m, "input_set");

    const json& tr = j.at("training");
    cfg.training_count = tr.at("count").get<int>();
    cfg.training_seed = tr.value("seed", 0ULL);

    cfg.invariant_max_iter = j.at("invariant").value("max_iter", 20);

    const json& s = j.at("simulation");
    cfg.x0 = vec_of(s.at("x0"), "simulation.x0");
    cfg.sim_steps = s.at("steps").get<int>();
    for (const auto& mode : s.value("modes", json::array({"rh", "static"}))) {
      const std::string ms = mode.get<std::string>();
      if (ms == "rh")
        cfg.sim_modes.push_back(SimMode::RecedingHorizon);
      else if (ms == "static")
        cfg.sim_modes.push_back(SimMode::Static);
      else
        throw ConfigError("unknown simulation mode \"" + ms + "\"");
    }
    cfg.stop_on_uub = s.value("stop_on_uub", false);
    cfg.grace_steps = s.value("grace_steps", 0);
    cfg.sim_seed = s.value("seed", 0ULL);

    cfg.output_dir = j.value("output_dir", ".");
  } catch (const json::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
  cfg.validate();
  return cfg;
}

void write_config(const std::string& path, const ExperimentConfig& cfg) {
  cfg.validate();
  json j;
  j["schema"] = 1;
  json p;
  p["A"] = mat_json(cfg.plant.A);
  p["B"] = mat_json(cfg.plant.B);
  p["eps"] = cfg.plant.eps;
  p["noise_mode"] = noise_mode_str(cfg.plant.mode);
  if (cfg.plant.constant_noise.size())
    p["constant_noise"] = vec_json(cfg.plant.constant_noise);
  if (!cfg.plant.custom_noise.empty()) {
    json rows = json::array();
    for (const auto& v : cfg.plant.custom_noise) rows.push_back(vec_json(v));
    p["custom_noise"] = std::move(rows);
  }
  p["seed"] = cfg.plant.seed;
  j["plant"] = std::move(p);
  j["state_set"] = set_json(cfg.state_set);
  j["input_set"] = set_json(cfg.input_set);
  j["training"] = {{"count", cfg.training_count}, {"seed", cfg.training_seed}};
  j["invariant"] = {{"max_iter", cfg.invariant_max_iter}};
  json s;
  s["x0"] = vec_json(cfg.x0);
  s["steps"] = cfg.sim_steps;
  json modes = json::array();
  for (SimMode m : cfg.sim_modes)
    modes.push_back(m == SimMode::RecedingHorizon ? "rh" : "static");
  s["modes"] = std::move(modes);
  s["stop_on_uub"] = cfg.stop_on_uub;
  s["grace_steps"] = cfg.grace_steps;
  s["seed"] = cfg.sim_seed;
  j["simulation"] = std::move(s);
  j["output_dir"] = cfg.output_dir;

  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path);
  out << j.dump(2) << '\n';
}

}  // namespace ddrhc
