// Command-line front end: run benchmarks, parameter sweeps, quadrature export,
// the stability check and Monte-Carlo reference generation.

#include <CLI11.hpp>
#include <cstdio>

#include "assn/config.hpp"
#include "assn/runner.hpp"
#include "assn/stability.hpp"

namespace {

// Collects flag values as config-map overrides so precedence is uniform:
// defaults < config file < flags.
struct RunFlags {
  std::string config_path;
  assn::ConfigMap overrides;
};

void add_override_option(CLI::App* cmd, RunFlags& flags, const std::string& flag,
                         const std::string& key, const std::string& desc) {
  cmd->add_option_function<std::string>(
      flag, [&flags, key](const std::string& v) { flags.overrides[key] = v; }, desc);
}

int do_run(const RunFlags& flags) {
  assn::ConfigMap file_values;
  if (!flags.config_path.empty()) file_values = assn::read_config_file(flags.config_path);
  const assn::SolverConfig cfg = assn::parse_config(file_values, flags.overrides);
  const assn::RunOutputs out = assn::run(cfg);
  std::printf("run complete: steps=%d min_phi=%.6g max_phi=%.6g\n", out.steps, out.min_phi,
              out.max_phi);
  if (out.metrics)
    std::printf("delta1=%.8g delta2=%.8g\n", out.metrics->delta1, out.metrics->delta2);
  std::printf("summary: %s\n", out.summary_path.c_str());
  return 0;
}

std::vector<double> default_sigma_as_values() {
  std::vector<double> v;
  for (int s = 0; s <= 10; ++s) v.push_back(s);
  return v;
}

std::vector<double> default_beta_values() {
  std::vector<double> v;
  for (int b = 1; b <= 16; ++b) v.push_back(0.5 * b);
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"artificial-scattering discrete-ordinates transport solver"};
  app.require_subcommand(1);

  // ---- run ----
  RunFlags run_flags;
  CLI::App* run_cmd = app.add_subcommand("run", "run a configured line-source or lattice case");
  run_cmd->add_option("--config", run_flags.config_path, "key = value config file");
  add_override_option(run_cmd, run_flags, "--problem", "problem", "linesource | lattice");
  add_override_option(run_cmd, run_flags, "--solver", "solver", "explicit | implicit");
  add_override_option(run_cmd, run_flags, "--quad-order", "quad_order", "icosahedral order");
  add_override_option(run_cmd, run_flags, "--nx", "nx", "cells in x");
  add_override_option(run_cmd, run_flags, "--ny", "ny", "cells in y");
  add_override_option(run_cmd, run_flags, "--cfl", "cfl", "CFL number");
  add_override_option(run_cmd, run_flags, "--t-end", "t_end", "final time (s)");
  add_override_option(run_cmd, run_flags, "--sigma-as", "sigma_as",
                      "artificial scattering strength (1/cm)");
  add_override_option(run_cmd, run_flags, "--beta", "beta", "kernel width parameter");
  add_override_option(run_cmd, run_flags, "--eps-tol", "eps_tol", "source-iteration tolerance");
  add_override_option(run_cmd, run_flags, "--gmres-tol", "gmres_tol", "GMRES tolerance");
  add_override_option(run_cmd, run_flags, "--seed", "seed", "RNG seed");
  add_override_option(run_cmd, run_flags, "--out", "out", "output file prefix");
  add_override_option(run_cmd, run_flags, "--reference", "reference",
                      "reference CSV for error metrics");
  run_cmd->add_flag_callback(
      "--single-inner-iteration",
      [&run_flags] { run_flags.overrides["single_inner_iteration"] = "true"; },
      "one source-iteration application per inverse (experimental)");

  // ---- sweep ----
  std::string sweep_solver = "explicit";
  std::string sweep_out = "sweep.csv";
  std::string sweep_reference;
  std::vector<double> sweep_sigmas, sweep_betas;
  long long sweep_particles = 4000000;
  unsigned long long sweep_seed = 42;
  CLI::App* sweep_cmd =
      app.add_subcommand("sweep", "(sigma_as, beta) line-source parameter study");
  sweep_cmd->add_option("--solver", sweep_solver, "explicit | implicit");
  sweep_cmd->add_option("--out", sweep_out, "heatmap CSV path");
  sweep_cmd->add_option("--reference", sweep_reference,
                        "reference CSV (generated by Monte Carlo when omitted)");
  sweep_cmd->add_option("--sigma-as-values", sweep_sigmas, "sigma_as grid");
  sweep_cmd->add_option("--beta-values", sweep_betas, "beta grid");
  sweep_cmd->add_option("--mc-particles", sweep_particles, "particles for a generated reference");
  sweep_cmd->add_option("--seed", sweep_seed, "seed for a generated reference");

  // ---- quadrature ----
  int quad_order = 4;
  std::string quad_out = "quadrature.txt";
  CLI::App* quad_cmd = app.add_subcommand("quadrature", "export an icosahedral quadrature set");
  quad_cmd->add_option("--order", quad_order, "order (>= 2)")->required();
  quad_cmd->add_option("--out", quad_out, "output text file");

  // ---- stability-check ----
  int stab_n = 200;
  std::string stab_out = "spectrum.csv";
  CLI::App* stab_cmd =
      app.add_subcommand("stability-check", "entropy-matrix spectrum of the implicit stencil");
  stab_cmd->add_option("--n", stab_n, "matrix dimension");
  stab_cmd->add_option("--out", stab_out, "spectrum CSV path");

  // ---- mc-reference ----
  int mc_nx = 50, mc_ny = 50;
  double mc_t_end = 1.0;
  long long mc_particles = 4000000;
  unsigned long long mc_seed = 42;
  double mc_window = 0.02;
  std::string mc_out = "reference.csv";
  CLI::App* mc_cmd =
      app.add_subcommand("mc-reference", "Monte-Carlo line-source reference solution");
  mc_cmd->add_option("--nx", mc_nx, "cells in x");
  mc_cmd->add_option("--ny", mc_ny, "cells in y");
  mc_cmd->add_option("--t-end", mc_t_end, "census time (s)");
  mc_cmd->add_option("--particles", mc_particles, "particle histories");
  mc_cmd->add_option("--seed", mc_seed, "RNG seed");
  mc_cmd->add_option("--census-window", mc_window, "track-length census window (s)");
  mc_cmd->add_option("--out", mc_out, "reference CSV path");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) return do_run(run_flags);

    if (sweep_cmd->parsed()) {
      assn::SolverKind kind;
      if (sweep_solver == "explicit")
        kind = assn::SolverKind::kExplicit;
      else if (sweep_solver == "implicit")
        kind = assn::SolverKind::kImplicit;
      else
        throw assn::ConfigError("sweep solver must be explicit or implicit");

      assn::BenchmarkConfig base;
      base.quad_order = 2;  // N_q = 12 coarse study
      base.nx = base.ny = 50;
      base.cfl = kind == assn::SolverKind::kExplicit ? 0.95 : 2.0;
      base.t_end = 1.0;

      assn::ReferenceSolution ref;
      if (!sweep_reference.empty()) {
        ref = assn::load_reference(sweep_reference);
      } else {
        std::printf("generating Monte-Carlo reference (%lld particles)...\n", sweep_particles);
        ref = assn::mc_reference(sweep_particles,
                                 assn::Grid2D::make(base.nx, base.ny, -1.5, 1.5, -1.5, 1.5),
                                 base.t_end, sweep_seed);
      }
      if (sweep_sigmas.empty()) sweep_sigmas = default_sigma_as_values();
      if (sweep_betas.empty()) sweep_betas = default_beta_values();

      const assn::SweepResult sweep =
          assn::parameter_sweep(kind, sweep_sigmas, sweep_betas, base, ref);
      char canonical[160];
      std::snprintf(canonical, sizeof(canonical),
                    "sweep solver=%s nq=12 nx=50 ny=50 seed=%llu particles=%lld",
                    sweep_solver.c_str(), sweep_seed, sweep_particles);
      assn::write_sweep_csv(sweep, sweep_out, assn::hash_comment_for(canonical));
      double best = 1e300;
      double best_sigma = 0, best_beta = 0;
      for (const auto& p : sweep.points)
        if (!p.failed && p.ratio < best) {
          best = p.ratio;
          best_sigma = p.sigma_as;
          best_beta = p.beta;
        }
      std::printf("sweep complete: baseline delta1=%.8g, best ratio %.4f at sigma_as=%g beta=%g\n",
                  sweep.baseline_delta1, best, best_sigma, best_beta);
      std::printf("heatmap: %s\n", sweep_out.c_str());
      return 0;
    }

    if (quad_cmd->parsed()) {
      const assn::QuadratureSet q = assn::build_icosahedron_quadrature(quad_order);
      assn::export_quadrature(q, quad_out);
      std::printf("wrote %d ordinates to %s\n", q.size(), quad_out.c_str());
      return 0;
    }

    if (stab_cmd->parsed()) {
      const assn::EntropyMatrix s = assn::build_entropy_matrix(stab_n);
      const assn::SpectrumReport report = assn::verify_positive_definite(s);
      assn::write_spectrum_csv(report, stab_out,
                               assn::hash_comment_for("stability-check n=" +
                                                      std::to_string(stab_n)));
      std::printf("n=%d positive_definite=%s smallest=%.6g largest=%.6g\n", stab_n,
                  report.positive_definite ? "yes" : "no", report.smallest, report.largest);
      std::printf("spectrum: %s\n", stab_out.c_str());
      return report.positive_definite ? 0 : 3;
    }

    if (mc_cmd->parsed()) {
      const assn::Grid2D grid = assn::Grid2D::make(mc_nx, mc_ny, -1.5, 1.5, -1.5, 1.5);
      const assn::ReferenceSolution ref =
          assn::mc_reference(mc_particles, grid, mc_t_end, mc_seed, mc_window);
      assn::save_reference(ref, mc_out);
      std::printf("wrote reference (%dx%d, t_end=%g) to %s\n", mc_nx, mc_ny, mc_t_end,
                  mc_out.c_str());
      return 0;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 1;
}
