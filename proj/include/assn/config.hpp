#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "assn/benchmarks.hpp"

namespace assn {

enum class ProblemKind { kLinesource, kLattice };

// Resolved run configuration. Unset keys fall back to the headline defaults
// of the selected problem/solver combination:
//   linesource explicit: cfl 0.95, order 4, 200x200, t_end 1, sigma_as 5, beta 4.5
//   linesource implicit: cfl 2,    order 4, 200x200, t_end 1, sigma_as 7, beta 4
//   lattice:             280x280, t_end 3.2, same cfl/sigma_as/beta per solver
struct SolverConfig {
  ProblemKind problem = ProblemKind::kLinesource;
  SolverKind solver = SolverKind::kExplicit;
  int quad_order = 4;
  int nx = 200, ny = 200;
  double cfl = 0.95;
  double t_end = 1.0;
  double sigma_as = 5.0;
  double beta = 4.5;
  double eps_tol = 1e-4;
  double gmres_tol = 1.5e-8;
  std::uint64_t seed = 42;
  std::string out = "run";
  std::string reference;  // optional reference CSV for error metrics
  bool single_inner_iteration = false;

  std::string canonical_string() const;
  std::uint64_t hash() const;              // FNV-1a of canonical_string()
  std::string hash_comment_line() const;   // "# config_hash=..."
  BenchmarkConfig benchmark_config() const;
};

// FNV-1a of an arbitrary canonical string; every output CSV carries a
// "# config_hash=..." comment derived from its run configuration.
std::uint64_t fnv1a_hash(const std::string& s);
std::string hash_comment_for(const std::string& canonical);

// Key-value pairs in file order ("key = value" lines, '#' comments).
using ConfigMap = std::map<std::string, std::string>;

ConfigMap read_config_file(const std::string& path);

// Builds a validated SolverConfig. `overrides` (from command-line flags) take
// precedence over file values; unknown keys are rejected by name.
SolverConfig parse_config(const ConfigMap& file_values, const ConfigMap& overrides);

}  // namespace assn
