#pragma once

#include <string>

#include "ddrhc/consistency.hpp"
#include "ddrhc/invariant.hpp"
#include "ddrhc/polytope.hpp"
#include "ddrhc/simulator.hpp"

namespace ddrhc {

/// Polytope file: JSON object { "F": [[row], ...], "g": [...] }.
/// Readers accept and writers emit finite doubles only.
HPolytope read_polytope(const std::string& path);
void write_polytope(const std::string& path, const HPolytope& P);

/// Data dictionary file: JSON list of
///   { "x": [...], "u": [...], "x_next": [...], "tag": "training"|"execution" }.
DataDictionary read_dictionary(const std::string& path);
void write_dictionary(const std::string& path, const DataDictionary& d);

/// Trajectory CSV with the fixed header
///   k,x_1..x_n,u_1..u_m,v_1..v_n,lambda,psi,cs_rows,solve_ms
/// Doubles are shortest-round-trip formatted. Every field except solve_ms is
/// reproducible bit-for-bit under a fixed seed.
void write_trajectory_csv(const std::string& path, const TrajectoryLog& log);
std::string trajectory_csv_string(const TrajectoryLog& log);

/// Run metadata sidecar (mode, seed, config hash, safety outcome, ...).
void write_trajectory_meta(const std::string& path, const TrajectoryLog& log);

/// Invariant-set construction diagnostics.
void write_invariant_diagnostics(const std::string& path,
                                 const InvariantResult& res);

}  // namespace ddrhc
