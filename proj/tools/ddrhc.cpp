#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "ddrhc/config.hpp"
#include "ddrhc/consistency.hpp"
#include "ddrhc/controller.hpp"
#include "ddrhc/errors.hpp"
#include "ddrhc/invariant.hpp"
#include "ddrhc/io.hpp"
#include "ddrhc/polytope.hpp"
#include "ddrhc/simulator.hpp"

namespace {

namespace fs = std::filesystem;
using namespace ddrhc;

int log_level() {
  const char* env = std::getenv("DDRHC_LOG");
  if (!env) return 0;
  const std::string v(env);
  if (v == "debug") return 2;
  if (v == "info") return 1;
  return 0;
}

void info(const std::string& msg) {
  if (log_level() >= 1) std::cerr << "[ddrhc] " << msg << '\n';
}

Eigen::VectorXd parse_state(const std::string& s) {
  std::vector<double> vals;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      vals.push_back(std::stod(item));
    } catch (...) {
      throw ConfigError("--state: cannot parse \"" + item + "\"");
    }
  }
  if (vals.empty()) throw ConfigError("--state: empty vector");
  Eigen::VectorXd x(vals.size());
  for (size_t i = 0; i < vals.size(); ++i) x[i] = vals[i];
  return x;
}

struct CommonArgs {
  std::string config_path;
  std::string data_path;
  std::string polytope_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  std::string mode = "both";
  std::string state;
};

fs::path ensure_out_dir(const ExperimentConfig& cfg, const CommonArgs& args) {
  fs::path dir = args.out_dir.empty() ? fs::path(cfg.output_dir)
                                      : fs::path(args.out_dir);
  fs::create_directories(dir);
  return dir;
}

int cmd_gen_data(const CommonArgs& args) {
  ExperimentConfig cfg = read_config(args.config_path);
  if (args.seed) cfg.training_seed = *args.seed;
  const fs::path dir = ensure_out_dir(cfg, args);
  const DataDictionary d =
      gen_training_data(cfg.plant, cfg.training_count, cfg.state_set,
                        cfg.input_set, cfg.training_seed, cfg.noise_shape());
  const fs::path out = dir / "data.json";
  write_dictionary(out.string(), d);
  info("wrote " + out.string());
  std::cout << out.string() << '\n';
  return 0;
}

int cmd_invariant(const CommonArgs& args) {
  ExperimentConfig cfg = read_config(args.config_path);
  const fs::path dir = ensure_out_dir(cfg, args);
  const DataDictionary d = read_dictionary(args.data_path);
  const ConsistencySet cs = ConsistencySet::build(d, cfg.noise_shape());
  if (!cs.check_rank())
    std::cerr << "warning: data matrix is rank deficient; the consistency "
                 "set may be unbounded\n";
  info("enumerating consistency-set vertices");
  const std::vector<SystemVertex> systems = cs.system_vertices();
  info("vertex systems: " + std::to_string(systems.size()));
  const VPolytope noise = norm_ball_vertices(cfg.noise_shape());
  const InvariantResult res =
      compute_invariant(cfg.state_set, cfg.input_set, noise, systems,
                        cfg.invariant_max_iter);
  const fs::path poly = dir / "invariant.json";
  const fs::path diag = dir / "invariant_diag.json";
  write_polytope(poly.string(), res.X_I);
  write_invariant_diagnostics(diag.string(), res);
  info("iterations: " + std::to_string(res.iterations_run) +
       (res.converged ? " (converged)" : " (cap reached)"));
  std::cout << poly.string() << '\n';
  return 0;
}

int cmd_simulate(const CommonArgs& args) {
  ExperimentConfig cfg = read_config(args.config_path);
  if (args.seed) cfg.sim_seed = *args.seed;
  std::vector<SimMode> modes;
  if (args.mode == "rh")
    modes = {SimMode::RecedingHorizon};
  else if (args.mode == "static")
    modes = {SimMode::Static};
  else if (args.mode == "both")
    modes = cfg.sim_modes;
  else
    throw ConfigError("--mode must be rh, static or both");

  const fs::path dir = ensure_out_dir(cfg, args);
  const DataDictionary d = read_dictionary(args.data_path);
  const HPolytope X_I = read_polytope(args.polytope_path);

  for (SimMode m : modes) {
    SimConfig sc;
    sc.x0 = cfg.x0;
    sc.steps = cfg.sim_steps;
    sc.mode = m;
    sc.stop_on_uub = cfg.stop_on_uub;
    sc.grace_steps = cfg.grace_steps;
    sc.seed = cfg.sim_seed;
    const TrajectoryLog log =
        run(sc, cfg.plant, X_I, cfg.input_set, cfg.noise_shape(), d);
    const std::string stem =
        (m == SimMode::RecedingHorizon) ? "traj_rh" : "traj_static";
    write_trajectory_csv((dir / (stem + ".csv")).string(), log);
    write_trajectory_meta((dir / (stem + ".meta.json")).string(), log);
    info(stem + ": " + std::to_string(log.steps.size()) + " steps, safety " +
         (log.safety_ok ? "ok" : "VIOLATED"));
    std::cout << (dir / (stem + ".csv")).string() << '\n';
    if (!log.safety_ok) return 3;
  }
  return 0;
}

int cmd_check(const CommonArgs& args) {
  ExperimentConfig cfg = read_config(args.config_path);
  const Eigen::VectorXd x = parse_state(args.state);
  if (x.size() != cfg.state_dim())
    throw ConfigError("--state dimension does not match the plant");
  const DataDictionary d = read_dictionary(args.data_path);
  const ConsistencySet cs = ConsistencySet::build(d, cfg.noise_shape());

  HPolytope carrier;
  if (!args.polytope_path.empty()) {
    carrier = read_polytope(args.polytope_path);
  } else {
    info("no --polytope given; computing the invariant set first");
    const VPolytope noise = norm_ball_vertices(cfg.noise_shape());
    carrier = compute_invariant(cfg.state_set, cfg.input_set, noise,
                                cs.system_vertices(), cfg.invariant_max_iter)
                  .X_I;
  }

  ControllerContext ctx = make_context(carrier, cfg.input_set, cs);
  const ControlDecision dual = solve_dual(ctx, x);
  const std::vector<SystemVertex> vertices = cs.system_vertices();
  const ControlDecision primal = solve_primal_vertex(ctx, x, vertices);
  const bool cert = verify_certificate(dual, ctx, x);

  std::cout << "state: " << x.transpose() << '\n';
  std::cout << "gauge: " << dual.psi << '\n';
  std::cout << "lambda_dual: " << dual.lambda << '\n';
  std::cout << "lambda_primal: " << primal.lambda << '\n';
  std::cout << "gap: " << std::abs(dual.lambda - primal.lambda) << '\n';
  std::cout << "u_dual: " << dual.u.transpose() << '\n';
  std::cout << "certificate_ok: " << (cert ? "yes" : "no") << '\n';
  std::cout << "vertex_systems: " << vertices.size() << '\n';
  return cert ? 0 : 4;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"data-driven receding-horizon control toolkit"};
  app.require_subcommand(1);

  CommonArgs args;
  auto add_common = [&](CLI::App* sub, bool data, bool poly, bool state) {
    sub->add_option("--config", args.config_path, "experiment config JSON")
        ->required();
    if (data)
      sub->add_option("--data", args.data_path, "data dictionary JSON")
          ->required();
    if (poly)
      sub->add_option("--polytope", args.polytope_path,
                      "invariant set polytope JSON");
    sub->add_option("--out", args.out_dir, "output directory");
    sub->add_option("--seed", args.seed, "seed override");
    sub->add_option("--mode", args.mode, "rh | static | both");
    if (state)
      sub->add_option("--state", args.state, "comma-separated state vector")
          ->required();
  };

  CLI::App* gen = app.add_subcommand("gen-data", "draw training data");
  add_common(gen, false, false, false);
  CLI::App* inv =
      app.add_subcommand("invariant", "compute the controlled invariant set");
  add_common(inv, true, false, false);
  CLI::App* sim = app.add_subcommand("simulate", "closed-loop runs");
  add_common(sim, true, true, false);
  sim->get_option("--polytope")->required();
  CLI::App* chk =
      app.add_subcommand("check", "dual-vs-vertex synthesis cross check");
  add_common(chk, true, true, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) ? 2 : 0;
  }

  try {
    if (gen->parsed()) return cmd_gen_data(args);
    if (inv->parsed()) return cmd_invariant(args);
    if (sim->parsed()) return cmd_simulate(args);
    if (chk->parsed()) return cmd_check(args);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const InfeasibleError& e) {
    std::cerr << "infeasible: " << e.what() << '\n';
    return 3;
  } catch (const GeometryError& e) {
    std::cerr << "geometry error: " << e.what() << '\n';
    return 3;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 4;
  }
  return 2;
}
