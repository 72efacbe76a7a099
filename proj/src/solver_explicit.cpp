#include "assn/solver_explicit.hpp"

#include <cmath>
#include <numbers>

#include "assn/parallel.hpp"

namespace assn {

namespace {

inline double minmod(double a, double b) {
  if (a * b <= 0.0) return 0.0;
  return std::abs(a) < std::abs(b) ? a : b;
}

bool field_all_zero(const Field2D& f) {
  for (double v : f.data)
    if (v != 0.0) return false;
  return true;
}

// Advection increment for one ordinate slab: -(F_{i+1/2}-F_{i-1/2})/dx - ... ,
// MUSCL reconstruction with minmod slopes, upwind face values.
void advect_ordinate(const AngularFlux& psi, int q, double ox, double oy, const Grid2D& g,
                     AngularFlux& out) {
  const double* in = psi.slab(q);
  double* dst = out.slab(q);
  const int ny_tot = g.ny + 2 * AngularFlux::ng;
  auto id = [&](int i, int j) {
    return static_cast<std::int64_t>(i + AngularFlux::ng) * ny_tot + (j + AngularFlux::ng);
  };

  // x-direction: for each row j, face fluxes F_{i-1/2} for i in [0, nx]
  std::vector<double> face(static_cast<size_t>(std::max(g.nx, g.ny)) + 1);
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i <= g.nx; ++i) {
      double f;
      if (ox >= 0.0) {
        const double u = in[id(i - 1, j)];
        const double sl = minmod(u - in[id(i - 2, j)], in[id(i, j)] - u);
        f = ox * (u + 0.5 * sl);
      } else {
        const double u = in[id(i, j)];
        const double sl = minmod(u - in[id(i - 1, j)], in[id(i + 1, j)] - u);
        f = ox * (u - 0.5 * sl);
      }
      face[static_cast<size_t>(i)] = f;
    }
    for (int i = 0; i < g.nx; ++i)
      dst[id(i, j)] =
          -(face[static_cast<size_t>(i) + 1] - face[static_cast<size_t>(i)]) / g.dx;
  }

  // y-direction, accumulated
  for (int i = 0; i < g.nx; ++i) {
    for (int j = 0; j <= g.ny; ++j) {
      double f;
      if (oy >= 0.0) {
        const double u = in[id(i, j - 1)];
        const double sl = minmod(u - in[id(i, j - 2)], in[id(i, j)] - u);
        f = oy * (u + 0.5 * sl);
      } else {
        const double u = in[id(i, j)];
        const double sl = minmod(u - in[id(i, j - 1)], in[id(i, j + 1)] - u);
        f = oy * (u - 0.5 * sl);
      }
      face[static_cast<size_t>(j)] = f;
    }
    for (int j = 0; j < g.ny; ++j)
      dst[id(i, j)] -=
          (face[static_cast<size_t>(j) + 1] - face[static_cast<size_t>(j)]) / g.dy;
  }
}

}  // namespace

double explicit_time_step(const Grid2D& grid, const QuadratureSet& quad, double cfl) {
  if (cfl <= 0.0) throw std::invalid_argument("cfl must be positive");
  double worst = 0.0;
  for (const Vec3& o : quad.points)
    worst = std::max(worst, std::abs(o.x) / grid.dx + std::abs(o.y) / grid.dy);
  if (worst == 0.0) throw std::invalid_argument("quadrature has no transport component");
  return cfl / worst;
}

void explicit_rhs(const AngularFlux& psi, const Grid2D& grid, const MaterialField& mats,
                  const QuadratureSet& quad, const ScatteringMatrix& s_as,
                  const ScatteringMatrix& s_phys, AngularFlux& out) {
  const int nq = psi.nq;
  const bool with_as = !field_all_zero(mats.sigma_as);

  // Streaming term, parallel over ordinates.
  parallel_for(0, nq, [&](std::int64_t qb, std::int64_t qe) {
    for (int q = static_cast<int>(qb); q < qe; ++q)
      advect_ordinate(psi, q, quad.points[static_cast<size_t>(q)].x,
                      quad.points[static_cast<size_t>(q)].y, grid, out);
  });

  // Collision, physical in-scattering and source. The isotropic product is
  // the scalar flux scaled per row; accumulate it cell-wise in q order.
  parallel_for(0, grid.nx, [&](std::int64_t ib, std::int64_t ie) {
    std::vector<double> psi_cell(static_cast<size_t>(nq));
    std::vector<double> scat(static_cast<size_t>(nq));
    for (int i = static_cast<int>(ib); i < ie; ++i) {
      for (int j = 0; j < grid.ny; ++j) {
        const double st = mats.sigma_t(i, j);
        const double ss = mats.sigma_s.at(i, j);
        const double sas = mats.sigma_as.at(i, j);
        const double qsrc = mats.source_q.at(i, j);
        for (int q = 0; q < nq; ++q) psi_cell[static_cast<size_t>(q)] = psi.at(q, i, j);

        if (ss != 0.0) {
          double phi = 0.0;
          for (int q = 0; q < nq; ++q)
            phi += quad.weights[static_cast<size_t>(q)] * psi_cell[static_cast<size_t>(q)];
          const double f = ss * phi / (4.0 * std::numbers::pi);
          for (int q = 0; q < nq; ++q)
            scat[static_cast<size_t>(q)] = f * s_phys.row_norms[static_cast<size_t>(q)];
        } else {
          std::fill(scat.begin(), scat.end(), 0.0);
        }

        if (with_as && sas != 0.0) {
          for (int q = 0; q < nq; ++q) {
            double acc = 0.0;
            for (int k = s_as.row_ptr[static_cast<size_t>(q)];
                 k < s_as.row_ptr[static_cast<size_t>(q) + 1]; ++k)
              acc += s_as.val[static_cast<size_t>(k)] *
                     psi_cell[static_cast<size_t>(s_as.col[static_cast<size_t>(k)])];
            scat[static_cast<size_t>(q)] += sas * acc;
          }
        }

        for (int q = 0; q < nq; ++q)
          out.at(q, i, j) += -(st + sas) * psi_cell[static_cast<size_t>(q)] +
                             scat[static_cast<size_t>(q)] + qsrc;
      }
    }
  });
}

void step_heun(ExplicitState& state, const Grid2D& grid, const MaterialField& mats,
               const QuadratureSet& quad, const ScatteringMatrix& s_as,
               const ScatteringMatrix& s_phys, AngularFlux& star, AngularFlux& rhs,
               int step_index) {
  const double dt = state.dt;
  explicit_rhs(state.psi, grid, mats, quad, s_as, s_phys, rhs);

  // psi_star = psi + dt * rhs (interior only; ghosts stay at the vacuum value)
  parallel_for(0, state.psi.nq, [&](std::int64_t qb, std::int64_t qe) {
    for (int q = static_cast<int>(qb); q < qe; ++q)
      for (int i = 0; i < grid.nx; ++i)
        for (int j = 0; j < grid.ny; ++j)
          star.at(q, i, j) = state.psi.at(q, i, j) + dt * rhs.at(q, i, j);
  });

  explicit_rhs(star, grid, mats, quad, s_as, s_phys, rhs);
  parallel_for(0, state.psi.nq, [&](std::int64_t qb, std::int64_t qe) {
    for (int q = static_cast<int>(qb); q < qe; ++q)
      for (int i = 0; i < grid.nx; ++i)
        for (int j = 0; j < grid.ny; ++j)
          state.psi.at(q, i, j) =
              0.5 * state.psi.at(q, i, j) + 0.5 * (star.at(q, i, j) + dt * rhs.at(q, i, j));
  });

  state.time += dt;
  if (!state.psi.all_finite())
    throw SolverAbort("explicit solver produced non-finite values at step " +
                      std::to_string(step_index));
}

ExplicitRunResult explicit_time_loop(AngularFlux psi0, const Grid2D& grid,
                                     const MaterialField& mats, const QuadratureSet& quad,
                                     const ScatteringMatrix& s_as,
                                     const ScatteringMatrix& s_phys, double cfl, double t_end,
                                     const std::function<void(int, double)>& on_step) {
  ExplicitState state{std::move(psi0), 0.0, 0.0, cfl};
  const double dt_nominal = explicit_time_step(grid, quad, cfl);
  AngularFlux star(state.psi.nq, grid.nx, grid.ny);
  AngularFlux rhs(state.psi.nq, grid.nx, grid.ny);
  int step = 0;
  while (state.time < t_end - 1e-14 * std::max(1.0, t_end)) {
    state.dt = std::min(dt_nominal, t_end - state.time);  // land exactly on t_end
    step_heun(state, grid, mats, quad, s_as, s_phys, star, rhs, step);
    ++step;
    if (on_step) on_step(step, state.time);
  }
  return {std::move(state.psi), step};
}

}  // namespace assn
