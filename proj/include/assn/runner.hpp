#pragma once

#include <optional>
#include <string>

#include "assn/config.hpp"

namespace assn {

struct RunOutputs {
  int steps = 0;
  double min_phi = 0.0, max_phi = 0.0;
  long si_iterations = 0;
  long gmres_iterations = 0;
  std::optional<ErrorMetrics> metrics;  // set when a reference was supplied
  std::string summary_path;
};

// Executes the configured run and writes <out>_phi.csv, <out>_cuts.csv,
// <out>_rings.csv, <out>_ring_stats.csv and <out>_summary.txt. Every CSV
// starts with the config-hash comment line.
RunOutputs run(const SolverConfig& config);

void write_scalar_flux_csv(const Grid2D& grid, const Field2D& phi, const std::string& path,
                           const std::string& header_comment);

}  // namespace assn
