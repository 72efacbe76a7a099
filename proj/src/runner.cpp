#include "assn/runner.hpp"

#include <cstdio>
#include <fstream>

namespace assn {

void write_scalar_flux_csv(const Grid2D& grid, const Field2D& phi, const std::string& path,
                           const std::string& header_comment) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  if (!header_comment.empty()) out << header_comment << "\n";
  out << "x,y,phi\n";
  char buf[160];
  for (int i = 0; i < grid.nx; ++i)
    for (int j = 0; j < grid.ny; ++j) {
      std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g\n", grid.x_center(i), grid.y_center(j),
                    phi.at(i, j));
      out << buf;
    }
  if (!out) throw std::runtime_error("write failed: " + path);
}

RunOutputs run(const SolverConfig& config) {
  const BenchmarkConfig bench = config.benchmark_config();
  const bool linesource = config.problem == ProblemKind::kLinesource;
  const Grid2D grid = linesource ? Grid2D::make(config.nx, config.ny, -1.5, 1.5, -1.5, 1.5)
                                 : Grid2D::make(config.nx, config.ny, 0.0, 7.0, 0.0, 7.0);

  const BenchmarkRun result = linesource ? run_linesource(bench) : run_lattice(bench);
  const std::string hash_line = config.hash_comment_line();

  write_scalar_flux_csv(grid, result.phi, config.out + "_phi.csv", hash_line);
  write_cuts_csv(grid, result.phi, config.out + "_cuts.csv", hash_line);
  const std::vector<double> radii =
      linesource ? std::vector<double>{0.2, 0.6, 0.9} : std::vector<double>{1.0, 2.0, 3.0};
  write_rings_csv(grid, result.phi, radii, config.out + "_rings.csv",
                  config.out + "_ring_stats.csv", hash_line);

  RunOutputs out;
  out.steps = result.steps;
  out.min_phi = result.min_phi;
  out.max_phi = result.max_phi;
  out.si_iterations = result.si_iterations;
  out.gmres_iterations = result.gmres_iterations;

  if (!config.reference.empty()) {
    ReferenceSolution ref = load_reference(config.reference);
    if (linesource) ref = mass_matched(std::move(ref), linesource_initial_mass(grid));
    out.metrics = error_metrics(result.phi, grid, ref);
  }

  out.summary_path = config.out + "_summary.txt";
  std::ofstream summary(out.summary_path);
  if (!summary) throw std::runtime_error("cannot open for writing: " + out.summary_path);
  summary << hash_line << "\n";
  summary << config.canonical_string();
  char buf[256];
  std::snprintf(buf, sizeof(buf), "steps=%d\nmin_phi=%.17g\nmax_phi=%.17g\n", out.steps,
                out.min_phi, out.max_phi);
  summary << buf;
  if (config.solver == SolverKind::kImplicit) {
    std::snprintf(buf, sizeof(buf), "source_iterations=%ld\ngmres_iterations=%ld\n",
                  out.si_iterations, out.gmres_iterations);
    summary << buf;
  }
  if (out.metrics) {
    std::snprintf(buf, sizeof(buf), "delta1=%.17g\ndelta2=%.17g\n", out.metrics->delta1,
                  out.metrics->delta2);
    summary << buf;
  }
  return out;
}

}  // namespace assn
