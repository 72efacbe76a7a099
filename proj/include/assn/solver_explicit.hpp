#pragma once

#include <functional>

#include "assn/kernels.hpp"
#include "assn/mesh.hpp"

namespace assn {

struct SolverAbort : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Explicit state: Heun time stepping over the finite-volume semi-discretization.
struct ExplicitState {
  AngularFlux psi;
  double time = 0.0;
  double dt = 0.0;
  double cfl = 0.0;
};

// Stable time step for the unsplit Heun + minmod update: the per-ordinate
// x/y Courant numbers must sum to at most cfl, so
//   dt = cfl / max_q (|Omega_qx|/dx + |Omega_qy|/dy).
double explicit_time_step(const Grid2D& grid, const QuadratureSet& quad, double cfl);

// Semi-discrete right-hand side
//   -Omega_q . grad psi_q  (minmod-limited second-order upwind, per dimension)
//   - (sigma_t + sigma_as) psi_q + sigma_s (S_phys psi)_q
//   + sigma_as (S_as psi)_q + Q.
// The artificial term is skipped entirely wherever sigma_as is all zero, so a
// zero-sigma_as run reproduces the plain discrete-ordinates path bit for bit.
void explicit_rhs(const AngularFlux& psi, const Grid2D& grid, const MaterialField& mats,
                  const QuadratureSet& quad, const ScatteringMatrix& s_as,
                  const ScatteringMatrix& s_phys, AngularFlux& out);

// One Heun step: psi_star = psi + dt * rhs(psi);
// psi^{n+1} = psi/2 + (psi_star + dt * rhs(psi_star))/2. Aborts on NaN.
void step_heun(ExplicitState& state, const Grid2D& grid, const MaterialField& mats,
               const QuadratureSet& quad, const ScatteringMatrix& s_as,
               const ScatteringMatrix& s_phys, AngularFlux& scratch_star,
               AngularFlux& scratch_rhs, int step_index);

struct ExplicitRunResult {
  AngularFlux psi;
  int steps = 0;
};

// Integrates to t_end, truncating the final step to land exactly on t_end.
// The optional callback fires after every step.
ExplicitRunResult explicit_time_loop(
    AngularFlux psi0, const Grid2D& grid, const MaterialField& mats, const QuadratureSet& quad,
    const ScatteringMatrix& s_as, const ScatteringMatrix& s_phys, double cfl, double t_end,
    const std::function<void(int, double)>& on_step = {});

}  // namespace assn
