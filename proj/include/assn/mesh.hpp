#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "assn/quadrature.hpp"

namespace assn {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Regular 2-D grid with two ghost layers (second-order upwind stencil reach).
struct Grid2D {
  int nx = 0, ny = 0;
  double xmin = 0.0, xmax = 0.0, ymin = 0.0, ymax = 0.0;
  double dx = 0.0, dy = 0.0;
  static constexpr int n_ghost = 2;

  static Grid2D make(int nx, int ny, double xmin, double xmax, double ymin, double ymax) {
    if (nx <= 0 || ny <= 0) throw std::invalid_argument("grid dimensions must be positive");
    if (!(xmax > xmin) || !(ymax > ymin))
      throw std::invalid_argument("grid bounds must be increasing");
    Grid2D g;
    g.nx = nx;
    g.ny = ny;
    g.xmin = xmin;
    g.xmax = xmax;
    g.ymin = ymin;
    g.ymax = ymax;
    g.dx = (xmax - xmin) / nx;
    g.dy = (ymax - ymin) / ny;
    return g;
  }

  double x_center(int i) const { return xmin + (i + 0.5) * dx; }
  double y_center(int j) const { return ymin + (j + 0.5) * dy; }
  double cell_area() const { return dx * dy; }
  std::int64_t n_cells() const { return static_cast<std::int64_t>(nx) * ny; }
};

// Plain cell-indexed field without ghosts (scalar flux, moments, materials).
struct Field2D {
  int nx = 0, ny = 0;
  std::vector<double> data;

  Field2D() = default;
  Field2D(int nx_, int ny_, double fill = 0.0)
      : nx(nx_), ny(ny_), data(static_cast<size_t>(nx_) * ny_, fill) {}

  double& at(int i, int j) { return data[static_cast<size_t>(i) * ny + j]; }
  double at(int i, int j) const { return data[static_cast<size_t>(i) * ny + j]; }
  std::int64_t size() const { return static_cast<std::int64_t>(nx) * ny; }
};

// Per-cell cross sections (1/cm) and isotropic source (1/(cm^2 s)).
struct MaterialField {
  Field2D sigma_a, sigma_s, sigma_as, source_q;

  static MaterialField uniform(const Grid2D& g, double sa, double ss, double sas, double q);
  double sigma_t(int i, int j) const { return sigma_a.at(i, j) + sigma_s.at(i, j); }
};

// Angular flux psi(q, i, j) with two ghost layers per spatial dimension.
// Ghost cells hold the vacuum inflow value (zero) and are never written by
// the solvers.
struct AngularFlux {
  int nq = 0, nx = 0, ny = 0;
  static constexpr int ng = Grid2D::n_ghost;
  std::vector<double> data;

  AngularFlux() = default;
  AngularFlux(int nq_, int nx_, int ny_)
      : nq(nq_),
        nx(nx_),
        ny(ny_),
        data(static_cast<size_t>(nq_) * (nx_ + 2 * ng) * (ny_ + 2 * ng), 0.0) {}

  std::int64_t slab_size() const {
    return static_cast<std::int64_t>(nx + 2 * ng) * (ny + 2 * ng);
  }
  double* slab(int q) { return data.data() + static_cast<size_t>(q) * slab_size(); }
  const double* slab(int q) const { return data.data() + static_cast<size_t>(q) * slab_size(); }

  // i in [-ng, nx+ng), j in [-ng, ny+ng)
  std::int64_t idx(int i, int j) const {
    return static_cast<std::int64_t>(i + ng) * (ny + 2 * ng) + (j + ng);
  }
  double& at(int q, int i, int j) { return slab(q)[idx(i, j)]; }
  double at(int q, int i, int j) const { return slab(q)[idx(i, j)]; }

  bool all_finite() const;
};

// Isotropic narrow-Gaussian pulse floored at 1e-4, evaluated at cell centers.
// The grid must cover [-1.5, 1.5]^2.
AngularFlux linesource_initial(const Grid2D& grid, const QuadratureSet& quad);

// Discrete mass sum(Phi_0 * dA) of the pulse above. Cell-center sampling of
// the under-resolved Gaussian inflates the mass well above the continuum
// value of ~1 on coarse grids; comparisons against a unit-mass reference
// scale the reference by this factor (transport is linear).
double linesource_initial_mass(const Grid2D& grid);

// Homogeneous line-source medium: sigma_s = sigma_t = 1, no absorption or
// source; sigma_as is the (spatially constant) artificial scattering strength.
MaterialField linesource_materials(const Grid2D& grid, double sigma_as);

// 7x7 lattice of unit squares on [0,7]^2: scattering background, eleven
// absorber squares in a checkerboard over the inner 5x5 block (the cell two
// above the center stays background), and a source square in the center.
// nx and ny must be divisible by 7. sigma_as is constant across materials.
MaterialField lattice_layout(const Grid2D& grid, double sigma_as = 0.0);

// Phi_ij = sum_q w_q psi_(q,ij)
Field2D scalar_flux(const AngularFlux& psi, const QuadratureSet& quad);

}  // namespace assn
