#include "assn/solver_implicit.hpp"

#include <cmath>

#include "assn/parallel.hpp"
#include "assn/solver_explicit.hpp"  // SolverAbort

namespace assn {

namespace {

double diff_norm2(const AngularFlux& a, const AngularFlux& b) {
  double s = 0.0;
  for (size_t i = 0; i < a.data.size(); ++i) {
    const double d = a.data[i] - b.data[i];
    s += d * d;
  }
  return std::sqrt(s);
}

bool field_all_zero(const Field2D& f) {
  for (double v : f.data)
    if (v != 0.0) return false;
  return true;
}

}  // namespace

StreamingOperator StreamingOperator::make(const Grid2D& grid, const QuadratureSet& quad,
                                          const MaterialField& mats, double dt) {
  if (dt <= 0.0) throw std::invalid_argument("dt must be positive");
  StreamingOperator op;
  op.grid = &grid;
  op.quad = &quad;
  op.dt = dt;
  op.sigma_impl = Field2D(grid.nx, grid.ny);
  for (int i = 0; i < grid.nx; ++i)
    for (int j = 0; j < grid.ny; ++j)
      op.sigma_impl.at(i, j) =
          mats.sigma_a.at(i, j) + mats.sigma_s.at(i, j) + mats.sigma_as.at(i, j) + 1.0 / dt;
  return op;
}

void StreamingOperator::apply(const AngularFlux& psi, AngularFlux& out) const {
  const Grid2D& g = *grid;
  parallel_for(0, psi.nq, [&](std::int64_t qb, std::int64_t qe) {
    for (int q = static_cast<int>(qb); q < qe; ++q) {
      const Vec3& o = quad->points[static_cast<size_t>(q)];
      const double ax = std::abs(o.x) * dt / g.dx;
      const double ay = std::abs(o.y) * dt / g.dy;
      const int dx_up = o.x >= 0.0 ? 1 : -1;
      const int dy_up = o.y >= 0.0 ? 1 : -1;
      for (int i = 0; i < g.nx; ++i) {
        for (int j = 0; j < g.ny; ++j) {
          double v = dt * sigma_impl.at(i, j) * psi.at(q, i, j);
          v += ax * (1.5 * psi.at(q, i, j) - 2.0 * psi.at(q, i - dx_up, j) +
                     0.5 * psi.at(q, i - 2 * dx_up, j));
          v += ay * (1.5 * psi.at(q, i, j) - 2.0 * psi.at(q, i, j - dy_up) +
                     0.5 * psi.at(q, i, j - 2 * dy_up));
          out.at(q, i, j) = v;
        }
      }
    }
  });
}

void StreamingOperator::sweep(const AngularFlux& rhs, AngularFlux& psi) const {
  const Grid2D& g = *grid;
  parallel_for(0, rhs.nq, [&](std::int64_t qb, std::int64_t qe) {
    for (int q = static_cast<int>(qb); q < qe; ++q) {
      const Vec3& o = quad->points[static_cast<size_t>(q)];
      const double ax = std::abs(o.x) * dt / g.dx;
      const double ay = std::abs(o.y) * dt / g.dy;
      const int dx_up = o.x >= 0.0 ? 1 : -1;
      const int dy_up = o.y >= 0.0 ? 1 : -1;
      const int i0 = dx_up > 0 ? 0 : g.nx - 1;
      const int j0 = dy_up > 0 ? 0 : g.ny - 1;
      for (int si = 0; si < g.nx; ++si) {
        const int i = i0 + dx_up * si;
        for (int sj = 0; sj < g.ny; ++sj) {
          const int j = j0 + dy_up * sj;
          double num = rhs.at(q, i, j);
          num += ax * (2.0 * psi.at(q, i - dx_up, j) - 0.5 * psi.at(q, i - 2 * dx_up, j));
          num += ay * (2.0 * psi.at(q, i, j - dy_up) - 0.5 * psi.at(q, i, j - 2 * dy_up));
          psi.at(q, i, j) = num / (1.5 * (ax + ay) + dt * sigma_impl.at(i, j));
        }
      }
    }
  });
}

SourceIterationResult source_iteration(const StreamingOperator& op,
                                       const ScatteringMatrix& s_as, const Field2D& sigma_as,
                                       const AngularFlux& psi0, const AngularFlux& R,
                                       const SourceIterationConfig& cfg) {
  const Grid2D& g = *op.grid;
  const double dt = op.dt;
  const int nq = psi0.nq;
  const bool no_as = field_all_zero(sigma_as);

  AngularFlux rhs(nq, g.nx, g.ny);
  auto build_rhs = [&](const AngularFlux& cur, AngularFlux& dst) {
    if (no_as) {
      parallel_for(0, nq, [&](std::int64_t qb, std::int64_t qe) {
        for (int q = static_cast<int>(qb); q < qe; ++q)
          for (int i = 0; i < g.nx; ++i)
            for (int j = 0; j < g.ny; ++j) dst.at(q, i, j) = dt * R.at(q, i, j);
      });
      return;
    }
    s_as.apply(cur, dst);  // dst = S_as^+ psi
    parallel_for(0, nq, [&](std::int64_t qb, std::int64_t qe) {
      for (int q = static_cast<int>(qb); q < qe; ++q)
        for (int i = 0; i < g.nx; ++i)
          for (int j = 0; j < g.ny; ++j)
            dst.at(q, i, j) = dt * (sigma_as.at(i, j) * dst.at(q, i, j) + R.at(q, i, j));
    });
  };

  SourceIterationResult out;
  out.psi = AngularFlux(nq, g.nx, g.ny);
  AngularFlux prev = psi0;

  build_rhs(prev, rhs);
  op.sweep(rhs, out.psi);
  out.iterations = 1;
  if (no_as || cfg.single_iteration) return out;

  double prev_update = -1.0;
  double t_estimate = 0.5;
  while (true) {
    const double update = diff_norm2(out.psi, prev);
    if (prev_update > 0.0)
      t_estimate = std::clamp(update / prev_update, cfg.lipschitz_lo, cfg.lipschitz_hi);
    const double c_tilde = (1.0 - t_estimate) / t_estimate;
    out.last_update_norm = update;
    out.t_estimate = t_estimate;
    if (update < cfg.eps_tol * c_tilde) return out;
    if (out.iterations >= cfg.max_iters)
      throw ConvergenceError("source iteration exceeded " + std::to_string(cfg.max_iters) +
                                 " iterations (last update " + std::to_string(update) + ")",
                             update);
    prev_update = update;
    std::swap(prev, out.psi);
    build_rhs(prev, rhs);
    op.sweep(rhs, out.psi);
    ++out.iterations;
  }
}

std::vector<double> moments_of(const MomentMaps& maps, const AngularFlux& psi) {
  const std::int64_t ncells = static_cast<std::int64_t>(psi.nx) * psi.ny;
  std::vector<double> phi(static_cast<size_t>(maps.n_moments) * ncells, 0.0);
  parallel_for(0, psi.nx, [&](std::int64_t ib, std::int64_t ie) {
    for (int i = static_cast<int>(ib); i < ie; ++i)
      for (int j = 0; j < psi.ny; ++j) {
        const std::int64_t c = static_cast<std::int64_t>(i) * psi.ny + j;
        for (int k = 0; k < maps.n_moments; ++k) {
          const double* row = maps.M.data() + static_cast<size_t>(k) * maps.n_q;
          double s = 0.0;
          for (int q = 0; q < psi.nq; ++q) s += row[q] * psi.at(q, i, j);
          phi[static_cast<size_t>(k) * ncells + c] = s;
        }
      }
  });
  return phi;
}

namespace {

// R(q,c) = sigma_s(c) * sum_k O[q][k] Sigma[k] phi[k][c]
void scattering_source_from_moments(const MomentMaps& maps, const Field2D& sigma_s,
                                    const std::vector<double>& phi, AngularFlux& out) {
  const int nx = sigma_s.nx, ny = sigma_s.ny;
  const std::int64_t ncells = static_cast<std::int64_t>(nx) * ny;
  parallel_for(0, nx, [&](std::int64_t ib, std::int64_t ie) {
    std::vector<double> sig_phi(static_cast<size_t>(maps.n_moments));
    for (int i = static_cast<int>(ib); i < ie; ++i)
      for (int j = 0; j < ny; ++j) {
        const std::int64_t c = static_cast<std::int64_t>(i) * ny + j;
        const double ss = sigma_s.at(i, j);
        for (int k = 0; k < maps.n_moments; ++k)
          sig_phi[static_cast<size_t>(k)] =
              maps.Sigma[static_cast<size_t>(k)] * phi[static_cast<size_t>(k) * ncells + c];
        for (int q = 0; q < out.nq; ++q) {
          const double* row = maps.O.data() + static_cast<size_t>(q) * maps.n_moments;
          double s = 0.0;
          for (int k = 0; k < maps.n_moments; ++k) s += row[k] * sig_phi[static_cast<size_t>(k)];
          out.at(q, i, j) = ss * s;
        }
      }
  });
}

}  // namespace

void implicit_lhs_apply(const StreamingOperator& op, const ScatteringMatrix& s_as,
                        const MaterialField& mats, const MomentMaps& maps,
                        const AngularFlux& psi0, const SourceIterationConfig& cfg,
                        const std::vector<double>& phi, std::vector<double>& out) {
  AngularFlux R(psi0.nq, op.grid->nx, op.grid->ny);
  scattering_source_from_moments(maps, mats.sigma_s, phi, R);
  SourceIterationResult si = source_iteration(op, s_as, mats.sigma_as, psi0, R, cfg);
  const std::vector<double> m_psi = moments_of(maps, si.psi);
  out.resize(phi.size());
  for (size_t i = 0; i < phi.size(); ++i) out[i] = phi[i] - m_psi[i];
}

double implicit_time_step(const Grid2D& grid, const QuadratureSet& quad, double cfl) {
  if (cfl <= 0.0) throw std::invalid_argument("cfl must be positive");
  double m = 0.0;
  for (const Vec3& o : quad.points) m = std::max({m, std::abs(o.x), std::abs(o.y)});
  return cfl * std::min(grid.dx, grid.dy) / m;
}

ImplicitRunResult implicit_time_loop(AngularFlux psi0, const Grid2D& grid,
                                     const MaterialField& mats, const QuadratureSet& quad,
                                     const ScatteringMatrix& s_as, const MomentMaps& maps,
                                     const ImplicitOptions& opts, double cfl, double t_end,
                                     const std::function<void(int, double)>& on_step) {
  const double dt_nominal = implicit_time_step(grid, quad, cfl);
  const int nq = psi0.nq;

  ImplicitRunResult out;
  out.psi = std::move(psi0);
  std::vector<double> phi_old = moments_of(maps, out.psi);

  double time = 0.0;
  double dt_current = -1.0;
  StreamingOperator op;
  AngularFlux q_tilde(nq, grid.nx, grid.ny);
  int step = 0;
  while (time < t_end - 1e-14 * std::max(1.0, t_end)) {
    const double dt = std::min(dt_nominal, t_end - time);
    if (dt != dt_current) {
      op = StreamingOperator::make(grid, quad, mats, dt);
      dt_current = dt;
    }

    // q_tilde = q + psi_old / dt
    parallel_for(0, nq, [&](std::int64_t qb, std::int64_t qe) {
      for (int q = static_cast<int>(qb); q < qe; ++q)
        for (int i = 0; i < grid.nx; ++i)
          for (int j = 0; j < grid.ny; ++j)
            q_tilde.at(q, i, j) = mats.source_q.at(i, j) + out.psi.at(q, i, j) / dt;
    });

    SourceIterationResult b_si =
        source_iteration(op, s_as, mats.sigma_as, out.psi, q_tilde, opts.si);
    out.total_si_iterations += b_si.iterations;
    const std::vector<double> b = moments_of(maps, b_si.psi);

    const AngularFlux& psi_guess = out.psi;
    auto lhs = [&](const std::vector<double>& x, std::vector<double>& y) {
      implicit_lhs_apply(op, s_as, mats, maps, psi_guess, opts.si, x, y);
    };
    GmresResult sol = gmres_solve(lhs, b, phi_old, opts.gmres_tol, opts.max_krylov);
    out.total_gmres_iterations += sol.iterations;

    // psi_new = SourceIteration(psi_old, sigma_s O Sigma phi_new + q_tilde)
    AngularFlux R(nq, grid.nx, grid.ny);
    scattering_source_from_moments(maps, mats.sigma_s, sol.x, R);
    for (size_t i = 0; i < R.data.size(); ++i) R.data[i] += q_tilde.data[i];
    SourceIterationResult psi_si = source_iteration(op, s_as, mats.sigma_as, out.psi, R, opts.si);
    out.total_si_iterations += psi_si.iterations;

    out.psi = std::move(psi_si.psi);
    phi_old = std::move(sol.x);
    time += dt;
    ++step;
    if (!out.psi.all_finite())
      throw SolverAbort("implicit solver produced non-finite values at step " +
                        std::to_string(step));
    if (on_step) on_step(step, time);
  }
  out.steps = step;
  return out;
}

}  // namespace assn
