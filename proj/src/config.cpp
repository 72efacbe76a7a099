#include "assn/config.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace assn {

namespace {

std::string trim(const std::string& s) {
  const size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      "problem", "solver",    "quad_order", "nx",   "ny",  "cfl",
      "t_end",   "sigma_as",  "beta",       "eps_tol", "gmres_tol",
      "seed",    "out",       "reference",  "single_inner_iteration"};
  return keys;
}

double parse_double(const std::string& key, const std::string& v) {
  size_t pos = 0;
  double d;
  try {
    d = std::stod(v, &pos);
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "': cannot parse '" + v + "' as a number");
  }
  if (pos != v.size())
    throw ConfigError("config key '" + key + "': trailing content in '" + v + "'");
  return d;
}

int parse_int(const std::string& key, const std::string& v) {
  const double d = parse_double(key, v);
  const int i = static_cast<int>(d);
  if (static_cast<double>(i) != d)
    throw ConfigError("config key '" + key + "': expected an integer, got '" + v + "'");
  return i;
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "on") return true;
  if (v == "false" || v == "0" || v == "off") return false;
  throw ConfigError("config key '" + key + "': expected a boolean, got '" + v + "'");
}

}  // namespace

ConfigMap read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  ConfigMap out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(path + ":" + std::to_string(lineno) + ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw ConfigError(path + ":" + std::to_string(lineno) + ": empty key or value");
    out[key] = value;
  }
  return out;
}

SolverConfig parse_config(const ConfigMap& file_values, const ConfigMap& overrides) {
  ConfigMap merged = file_values;
  for (const auto& [k, v] : overrides) merged[k] = v;

  for (const auto& [k, v] : merged)
    if (!known_keys().count(k)) throw ConfigError("unknown config key '" + k + "'");

  auto get = [&](const char* key) -> const std::string* {
    auto it = merged.find(key);
    return it == merged.end() ? nullptr : &it->second;
  };

  SolverConfig cfg;

  const std::string* problem = get("problem");
  if (!problem) throw ConfigError("missing required config key 'problem'");
  if (*problem == "linesource")
    cfg.problem = ProblemKind::kLinesource;
  else if (*problem == "lattice")
    cfg.problem = ProblemKind::kLattice;
  else
    throw ConfigError("config key 'problem': expected linesource or lattice, got '" + *problem +
                      "'");

  const std::string* solver = get("solver");
  if (!solver) throw ConfigError("missing required config key 'solver'");
  if (*solver == "explicit")
    cfg.solver = SolverKind::kExplicit;
  else if (*solver == "implicit")
    cfg.solver = SolverKind::kImplicit;
  else
    throw ConfigError("config key 'solver': expected explicit or implicit, got '" + *solver +
                      "'");

  // headline defaults per problem/solver combination
  const bool implicit = cfg.solver == SolverKind::kImplicit;
  cfg.cfl = implicit ? 2.0 : 0.95;
  cfg.sigma_as = implicit ? 7.0 : 5.0;
  cfg.beta = implicit ? 4.0 : 4.5;
  cfg.quad_order = 4;
  if (cfg.problem == ProblemKind::kLattice) {
    cfg.nx = cfg.ny = 280;
    cfg.t_end = 3.2;
  } else {
    cfg.nx = cfg.ny = 200;
    cfg.t_end = 1.0;
  }

  if (const std::string* v = get("quad_order")) cfg.quad_order = parse_int("quad_order", *v);
  if (const std::string* v = get("nx")) cfg.nx = parse_int("nx", *v);
  if (const std::string* v = get("ny")) cfg.ny = parse_int("ny", *v);
  if (const std::string* v = get("cfl")) cfg.cfl = parse_double("cfl", *v);
  if (const std::string* v = get("t_end")) cfg.t_end = parse_double("t_end", *v);
  if (const std::string* v = get("sigma_as")) cfg.sigma_as = parse_double("sigma_as", *v);
  if (const std::string* v = get("beta")) cfg.beta = parse_double("beta", *v);
  if (const std::string* v = get("eps_tol")) cfg.eps_tol = parse_double("eps_tol", *v);
  if (const std::string* v = get("gmres_tol")) cfg.gmres_tol = parse_double("gmres_tol", *v);
  if (const std::string* v = get("seed")) {
    const double d = parse_double("seed", *v);
    if (d < 0) throw ConfigError("config key 'seed': must be nonnegative");
    cfg.seed = static_cast<std::uint64_t>(d);
  }
  if (const std::string* v = get("out")) cfg.out = *v;
  if (const std::string* v = get("reference")) cfg.reference = *v;
  if (const std::string* v = get("single_inner_iteration"))
    cfg.single_inner_iteration = parse_bool("single_inner_iteration", *v);

  if (cfg.quad_order < 2) throw ConfigError("quad_order must be >= 2");
  if (cfg.nx < 1 || cfg.ny < 1) throw ConfigError("grid sizes must be positive");
  if (cfg.cfl <= 0.0) throw ConfigError("cfl must be positive");
  if (cfg.t_end <= 0.0) throw ConfigError("t_end must be positive");
  if (cfg.sigma_as < 0.0) throw ConfigError("sigma_as must be nonnegative");
  if (cfg.beta <= 0.0) throw ConfigError("beta must be positive");
  if (cfg.eps_tol <= 0.0) throw ConfigError("eps_tol must be positive");
  if (cfg.gmres_tol <= 0.0) throw ConfigError("gmres_tol must be positive");
  return cfg;
}

std::string SolverConfig::canonical_string() const {
  char buf[512];
  std::snprintf(buf, sizeof(buf),
                "beta=%.17g\ncfl=%.17g\neps_tol=%.17g\ngmres_tol=%.17g\nnx=%d\nny=%d\n"
                "problem=%s\nquad_order=%d\nreference=%s\nseed=%llu\n"
                "sigma_as=%.17g\nsingle_inner_iteration=%d\nsolver=%s\nt_end=%.17g\n",
                beta, cfl, eps_tol, gmres_tol, nx, ny,
                problem == ProblemKind::kLinesource ? "linesource" : "lattice", quad_order,
                reference.c_str(), static_cast<unsigned long long>(seed), sigma_as,
                single_inner_iteration ? 1 : 0,
                solver == SolverKind::kExplicit ? "explicit" : "implicit", t_end);
  return buf;
}

std::uint64_t fnv1a_hash(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string hash_comment_for(const std::string& canonical) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "# config_hash=%016llx",
                static_cast<unsigned long long>(fnv1a_hash(canonical)));
  return buf;
}

std::uint64_t SolverConfig::hash() const { return fnv1a_hash(canonical_string()); }

std::string SolverConfig::hash_comment_line() const {
  return hash_comment_for(canonical_string());
}

BenchmarkConfig SolverConfig::benchmark_config() const {
  BenchmarkConfig b;
  b.solver = solver;
  b.quad_order = quad_order;
  b.nx = nx;
  b.ny = ny;
  b.cfl = cfl;
  b.t_end = t_end;
  b.sigma_as = sigma_as;
  b.beta = beta;
  b.implicit_opts.si.eps_tol = eps_tol;
  b.implicit_opts.gmres_tol = gmres_tol;
  b.single_inner_iteration = single_inner_iteration;
  return b;
}

}  // namespace assn
