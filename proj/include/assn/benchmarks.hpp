#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "assn/kernels.hpp"
#include "assn/mesh.hpp"
#include "assn/solver_implicit.hpp"

namespace assn {

enum class SolverKind { kExplicit, kImplicit };

// Scalar-flux reference on a solver grid (no interpolation on comparison).
struct ReferenceSolution {
  Grid2D grid;
  Field2D phi;
  double t_end = 0.0;
  std::string provenance;
  std::uint64_t seed = 0;
};

// Analog Monte Carlo oracle for the line-source problem (sigma_s = sigma_t = 1,
// isotropic point birth at the origin at t = 0, exponential free flights,
// isotropic scattering, no absorption). The scalar flux at t_end is estimated
// by a track-length tally over the census window [t_end - census_window, t_end]
// normalized by window length and cell area. Particle histories use
// counter-based per-particle RNG streams derived from the seed and batches are
// merged in batch order, so the result depends only on the seed.
ReferenceSolution mc_reference(std::int64_t n_particles, const Grid2D& grid, double t_end,
                               std::uint64_t seed, double census_window = 0.02);

void save_reference(const ReferenceSolution& ref, const std::string& path);
ReferenceSolution load_reference(const std::string& path);

// delta1 = cell-area-weighted L2 norm of phi - ref.phi;
// delta2 = same norm of the central-difference gradient mismatch
// (one-sided at boundaries). Grids must match exactly.
struct ErrorMetrics {
  double delta1 = 0.0;
  double delta2 = 0.0;
};
ErrorMetrics error_metrics(const Field2D& phi, const Grid2D& grid, const ReferenceSolution& ref);

// Rescales the reference so its total mass (sum phi * dA) equals target_mass.
// The line-source medium is purely scattering and nothing escapes the domain
// by t_end, so matching total masses aligns the reference with the discrete
// initial mass the deterministic solvers actually transport.
ReferenceSolution mass_matched(ReferenceSolution ref, double target_mass);

// Bilinear interpolation on cell-center values (clamped at the domain edge).
double sample_bilinear(const Grid2D& grid, const Field2D& phi, double x, double y);

// Ring samples around the domain center.
std::vector<double> ring_samples(const Grid2D& grid, const Field2D& phi, double radius,
                                 int n_samples = 360);

struct RingStats {
  double radius = 0.0;
  double mean = 0.0;
  double stddev = 0.0;
};
RingStats ring_stats(const Grid2D& grid, const Field2D& phi, double radius, int n_samples = 360);

// Cuts (horizontal / vertical / diagonal cell-center lines) and rings with
// per-ring mean and standard deviation (the ray-effect amplitude measure).
void write_cuts_csv(const Grid2D& grid, const Field2D& phi, const std::string& path,
                    const std::string& header_comment = std::string());
void write_rings_csv(const Grid2D& grid, const Field2D& phi, const std::vector<double>& radii,
                     const std::string& path, const std::string& stats_path,
                     const std::string& header_comment = std::string());

// One line-source or lattice run at the given settings; used by the sweep,
// the acceptance suite and the CLI.
struct BenchmarkConfig {
  SolverKind solver = SolverKind::kExplicit;
  int quad_order = 4;
  int nx = 50, ny = 50;
  double cfl = 0.95;
  double t_end = 1.0;
  double sigma_as = 0.0;
  double beta = 1.0;
  ImplicitOptions implicit_opts;
  bool single_inner_iteration = false;
};

struct BenchmarkRun {
  Field2D phi;
  int steps = 0;
  double min_phi = 0.0, max_phi = 0.0;
  long si_iterations = 0;
  long gmres_iterations = 0;
};

BenchmarkRun run_linesource(const BenchmarkConfig& cfg);
BenchmarkRun run_lattice(const BenchmarkConfig& cfg);

// (sigma_as, beta) parameter study on the coarse line-source configuration.
// Each pair records delta1 against the reference and the ratio to the
// sigma_as = 0 baseline; failed runs are recorded as NaN and the sweep
// continues.
struct SweepPoint {
  double sigma_as = 0.0;
  double beta = 0.0;
  double delta1 = 0.0;
  double ratio = 0.0;
  bool failed = false;
};

struct SweepResult {
  std::vector<SweepPoint> points;
  double baseline_delta1 = 0.0;
};

SweepResult parameter_sweep(SolverKind solver, const std::vector<double>& sigma_as_values,
                            const std::vector<double>& beta_values, const BenchmarkConfig& base,
                            const ReferenceSolution& ref);

void write_sweep_csv(const SweepResult& sweep, const std::string& path,
                     const std::string& header_comment = std::string());

}  // namespace assn
