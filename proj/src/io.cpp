#include "ddrhc/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "ddrhc/errors.hpp"

namespace ddrhc {

namespace {

using nlohmann::json;

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("invalid JSON in " + path + ": " + e.what());
  }
  return j;
}

void save_json(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path);
  out << j.dump(2) << '\n';
}

Eigen::VectorXd to_vector(const json& j, const std::string& what) {
  if (!j.is_array()) throw ConfigError(what + ": expected an array");
  Eigen::VectorXd v(j.size());
  for (size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw ConfigError(what + ": expected numbers");
    v[i] = j[i].get<double>();
    if (!std::isfinite(v[i])) throw ConfigError(what + ": non-finite value");
  }
  return v;
}

Eigen::MatrixXd to_matrix(const json& j, const std::string& what) {
  if (!j.is_array() || j.empty())
    throw ConfigError(what + ": expected a non-empty array of rows");
  const Eigen::VectorXd first = to_vector(j[0], what);
  Eigen::MatrixXd M(j.size(), first.size());
  M.row(0) = first;
  for (size_t i = 1; i < j.size(); ++i) {
    const Eigen::VectorXd r = to_vector(j[i], what);
    if (r.size() != M.cols()) throw ConfigError(what + ": ragged rows");
    M.row(i) = r;
  }
  return M;
}

json from_vector(const Eigen::VectorXd& v, const std::string& what) {
  if (!v.allFinite()) throw ConfigError(what + ": refusing to write non-finite values");
  json j = json::array();
  for (int i = 0; i < v.size(); ++i) j.push_back(v[i]);
  return j;
}

json from_matrix(const Eigen::MatrixXd& M, const std::string& what) {
  json j = json::array();
  for (int i = 0; i < M.rows(); ++i)
    j.push_back(from_vector(M.row(i).transpose(), what));
  return j;
}

void append_double(std::string& out, double v) {
  char buf[64];
  if (std::isinf(v)) {
    out += v > 0 ? "inf" : "-inf";
    return;
  }
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  out.append(buf, res.ptr);
}

}  // namespace

HPolytope read_polytope(const std::string& path) {
  const json j = load_json(path);
  if (!j.contains("F") || !j.contains("g"))
    throw ConfigError(path + ": polytope file needs \"F\" and \"g\"");
  HPolytope P;
  P.F = to_matrix(j["F"], path + ":F");
  P.g = to_vector(j["g"], path + ":g");
  P.validate();
  return P;
}

void write_polytope(const std::string& path, const HPolytope& P) {
  P.validate();
  json j;
  j["F"] = from_matrix(P.F, "F");
  j["g"] = from_vector(P.g, "g");
  save_json(path, j);
}

DataDictionary read_dictionary(const std::string& path) {
  const json j = load_json(path);
  if (!j.is_array()) throw ConfigError(path + ": expected a JSON list");
  DataDictionary d;
  for (const auto& e : j) {
    DataTriple t;
    t.x = to_vector(e.at("x"), path + ":x");
    t.u = to_vector(e.at("u"), path + ":u");
    t.x_next = to_vector(e.at("x_next"), path + ":x_next");
    const std::string tag = e.value("tag", "training");
    if (tag == "training")
      t.tag = DataTag::Training;
    else if (tag == "execution")
      t.tag = DataTag::Execution;
    else
      throw ConfigError(path + ": unknown tag \"" + tag + "\"");
    d.triples.push_back(std::move(t));
  }
  d.validate();
  return d;
}

void write_dictionary(const std::string& path, const DataDictionary& d) {
  d.validate();
  json j = json::array();
  for (const auto& t : d.triples) {
    json e;
    e["x"] = from_vector(t.x, "x");
    e["u"] = from_vector(t.u, "u");
    e["x_next"] = from_vector(t.x_next, "x_next");
    e["tag"] = (t.tag == DataTag::Training) ? "training" : "execution";
    j.push_back(std::move(e));
  }
  save_json(path, j);
}

std::string trajectory_csv_string(const TrajectoryLog& log) {
  std::string out;
  const int n = log.steps.empty() ? 0 : static_cast<int>(log.steps[0].x.size());
  const int m = log.steps.empty() ? 0 : static_cast<int>(log.steps[0].u.size());
  out += "k";
  for (int i = 1; i <= n; ++i) out += ",x_" + std::to_string(i);
  for (int i = 1; i <= m; ++i) out += ",u_" + std::to_string(i);
  for (int i = 1; i <= n; ++i) out += ",v_" + std::to_string(i);
  out += ",lambda,psi,cs_rows,solve_ms\n";
  for (const auto& s : log.steps) {
    out += std::to_string(s.k);
    for (int i = 0; i < n; ++i) {
      out += ',';
      append_double(out, s.x[i]);
    }
    for (int i = 0; i < m; ++i) {
      out += ',';
      append_double(out, s.u[i]);
    }
    for (int i = 0; i < n; ++i) {
      out += ',';
      append_double(out, s.v[i]);
    }
    out += ',';
    append_double(out, s.lambda);
    out += ',';
    append_double(out, s.psi);
    out += ',' + std::to_string(s.cs_rows);
    out += ',';
    append_double(out, s.solve_ms);
    out += '\n';
  }
  return out;
}

void write_trajectory_csv(const std::string& path, const TrajectoryLog& log) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path);
  out << trajectory_csv_string(log);
}

void write_trajectory_meta(const std::string& path, const TrajectoryLog& log) {
  json j;
  j["schema"] = 1;
  j["mode"] = log.mode;
  j["seed"] = log.seed;
  j["config_hash"] = log.config_hash;
  j["steps_executed"] = log.steps.size();
  j["safety_ok"] = log.safety_ok;
  j["violation_steps"] = log.violation_steps;
  j["first_uub_step"] = log.first_uub_step;
  save_json(path, j);
}

void write_invariant_diagnostics(const std::string& path,
                                 const InvariantResult& res) {
  json j;
  j["schema"] = 1;
  j["iterations_run"] = res.iterations_run;
  j["converged"] = res.converged;
  j["row_counts"] = res.row_counts;
  save_json(path, j);
}

}  // namespace ddrhc
