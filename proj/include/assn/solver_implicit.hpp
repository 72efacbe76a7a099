#pragma once

#include <functional>

#include "assn/gmres.hpp"
#include "assn/kernels.hpp"
#include "assn/mesh.hpp"

namespace assn {

// Implicit-Euler streaming operator, discretized with the second-order upwind
// stencil without a limiter and scaled by dt:
//   L_D psi = lambda_x (g_{i+1/2} - g_{i-1/2}) + lambda_y (...) + dt sigma psi
// with lambda = Omega dt / dx and sigma = sigma_a + sigma_s + sigma_as + 1/dt.
// Face fluxes use the two upstream cells (coefficients 3/2 and -1/2).
struct StreamingOperator {
  const Grid2D* grid = nullptr;
  const QuadratureSet* quad = nullptr;
  Field2D sigma_impl;  // sigma_a + sigma_s + sigma_as + 1/dt, positive everywhere
  double dt = 0.0;

  static StreamingOperator make(const Grid2D& grid, const QuadratureSet& quad,
                                const MaterialField& mats, double dt);

  // out = L_D psi (forward application; oracle for the sweep)
  void apply(const AngularFlux& psi, AngularFlux& out) const;

  // Solves L_D psi = rhs by per-ordinate forward substitution in upwind
  // order (four traversal orders, one per sign quadrant of (Omega_x, Omega_y)).
  void sweep(const AngularFlux& rhs, AngularFlux& psi) const;
};

struct SourceIterationConfig {
  double eps_tol = 1e-4;       // user parameter epsilon
  int max_iters = 1000;
  double lipschitz_lo = 0.01;  // clamp bounds for the estimated contraction T
  double lipschitz_hi = 0.99;
  bool single_iteration = false;  // one inner application, no convergence loop
};

struct SourceIterationResult {
  AngularFlux psi;
  int iterations = 0;
  double last_update_norm = 0.0;
  double t_estimate = 0.5;  // final Lipschitz-constant estimate
};

// Solves (L - sigma_as S_as^+) psi = R by iterating
//   L psi^(l+1) = sigma_as S_as^+ psi^(l) + R
// (R unscaled; the dt scaling of L_D is handled internally). Stops when
// ||psi^(l+1) - psi^(l)||_2 < eps_tol * (1-T)/T with T the ratio of successive
// update norms (0.5 before two iterations, clamped to the configured bounds).
// With sigma_as identically zero the result is a single sweep of R.
SourceIterationResult source_iteration(const StreamingOperator& op,
                                       const ScatteringMatrix& s_as, const Field2D& sigma_as,
                                       const AngularFlux& psi0, const AngularFlux& R,
                                       const SourceIterationConfig& cfg);

// Moment-space left-hand side: phi - M * SourceIteration(psi0, sigma_s O Sigma phi).
// phi and out are packed moment fields of size n_moments * nx * ny.
void implicit_lhs_apply(const StreamingOperator& op, const ScatteringMatrix& s_as,
                        const MaterialField& mats, const MomentMaps& maps,
                        const AngularFlux& psi0, const SourceIterationConfig& cfg,
                        const std::vector<double>& phi, std::vector<double>& out);

// Packed moments of an angular flux: out[k*ncells + c] = sum_q M[k][q] psi(q,c).
std::vector<double> moments_of(const MomentMaps& maps, const AngularFlux& psi);

struct ImplicitOptions {
  SourceIterationConfig si;
  double gmres_tol = 1.5e-8;
  int max_krylov = 200;
  int n_moments = 1;
};

// dt = cfl * min(dx, dy) / max_q max(|Omega_qx|, |Omega_qy|)
double implicit_time_step(const Grid2D& grid, const QuadratureSet& quad, double cfl);

struct ImplicitRunResult {
  AngularFlux psi;
  int steps = 0;
  long total_si_iterations = 0;
  long total_gmres_iterations = 0;
};

// Sweeping-Krylov time loop: per implicit Euler step,
//   b = M * SourceIteration(psi_old, q + psi_old/dt)
//   phi_new = GMRES(lhs, b)  (initial guess: previous moments)
//   psi_new = SourceIteration(psi_old, sigma_s O Sigma phi_new + psi_old/dt + q).
ImplicitRunResult implicit_time_loop(
    AngularFlux psi0, const Grid2D& grid, const MaterialField& mats, const QuadratureSet& quad,
    const ScatteringMatrix& s_as, const MomentMaps& maps, const ImplicitOptions& opts,
    double cfl, double t_end, const std::function<void(int, double)>& on_step = {});

}  // namespace assn
