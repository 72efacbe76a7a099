#include <doctest.h>

#include <cmath>
#include <numbers>

#include "assn/benchmarks.hpp"
#include "assn/gmres.hpp"
#include "assn/solver_explicit.hpp"
#include "assn/solver_implicit.hpp"

using namespace assn;

namespace {

ScatteringMatrix empty_matrix(int n) {
  ScatteringMatrix m;
  m.n = n;
  m.row_ptr.assign(static_cast<size_t>(n) + 1, 0);
  return m;
}

double diff_norm(const AngularFlux& a, const AngularFlux& b) {
  double s = 0.0;
  for (size_t i = 0; i < a.data.size(); ++i) {
    const double d = a.data[i] - b.data[i];
    s += d * d;
  }
  return std::sqrt(s);
}

// smooth test field over the interior
void fill_smooth(AngularFlux& psi, const Grid2D& g) {
  for (int q = 0; q < psi.nq; ++q)
    for (int i = 0; i < g.nx; ++i)
      for (int j = 0; j < g.ny; ++j)
        psi.at(q, i, j) =
            1.0 + std::sin(0.9 * g.x_center(i) + 0.2 * q) * std::cos(1.3 * g.y_center(j));
}

int pole_ordinate(const QuadratureSet& quad) {
  for (int q = 0; q < quad.size(); ++q)
    if (std::abs(quad.points[q].x) < 1e-13 && std::abs(quad.points[q].y) < 1e-13 &&
        quad.points[q].z > 0.0)
      return q;
  return -1;
}

}  // namespace

TEST_SUITE("solver_implicit") {

TEST_CASE("sweep inverts the streaming operator in all four quadrants") {
  const Grid2D g = Grid2D::make(16, 16, -1.5, 1.5, -1.5, 1.5);
  const QuadratureSet quad = build_icosahedron_quadrature(2);
  const MaterialField mats = MaterialField::uniform(g, 0.3, 0.7, 0.5, 0.0);
  const StreamingOperator op = StreamingOperator::make(g, quad, mats, 0.2);

  AngularFlux psi(quad.size(), g.nx, g.ny);
  fill_smooth(psi, g);
  AngularFlux lpsi(quad.size(), g.nx, g.ny), back(quad.size(), g.nx, g.ny);
  op.apply(psi, lpsi);
  op.sweep(lpsi, back);

  // every sign quadrant of (Omega_x, Omega_y) occurs in the order-2 set
  int quadrants[2][2] = {{0, 0}, {0, 0}};
  for (const Vec3& o : quad.points)
    if (std::abs(o.x) > 1e-13 && std::abs(o.y) > 1e-13)
      quadrants[o.x > 0 ? 1 : 0][o.y > 0 ? 1 : 0]++;
  CHECK(quadrants[0][0] > 0);
  CHECK(quadrants[0][1] > 0);
  CHECK(quadrants[1][0] > 0);
  CHECK(quadrants[1][1] > 0);

  for (int q = 0; q < psi.nq; ++q)
    for (int i = 0; i < g.nx; ++i)
      for (int j = 0; j < g.ny; ++j)
        CHECK(back.at(q, i, j) == doctest::Approx(psi.at(q, i, j)).epsilon(1e-12));
}

TEST_CASE("sweep of zero is zero") {
  const Grid2D g = Grid2D::make(8, 8, -1.5, 1.5, -1.5, 1.5);
  const QuadratureSet quad = build_icosahedron_quadrature(2);
  const MaterialField mats = MaterialField::uniform(g, 0.0, 0.0, 0.0, 0.0);
  const StreamingOperator op = StreamingOperator::make(g, quad, mats, 0.5);
  AngularFlux rhs(quad.size(), g.nx, g.ny), psi(quad.size(), g.nx, g.ny);
  op.sweep(rhs, psi);
  for (double v : psi.data) CHECK(v == 0.0);
}

TEST_CASE("1-D reduction reaches the collision-balance fixed point") {
  const Grid2D g = Grid2D::make(24, 1, -1.5, 1.5, 0.0, 3.0);
  const QuadratureSet quad = build_icosahedron_quadrature(2);
  const MaterialField mats = MaterialField::uniform(g, 10.0, 0.0, 0.0, 0.0);
  const double dt = 0.4;
  const StreamingOperator op = StreamingOperator::make(g, quad, mats, dt);

  int qsel = -1;  // ordinate with Omega_y = 0 and Omega_x > 0
  for (int q = 0; q < quad.size(); ++q)
    if (std::abs(quad.points[q].y) < 1e-13 && quad.points[q].x > 0.5) qsel = q;
  REQUIRE(qsel >= 0);

  const double r = 0.7;
  AngularFlux rhs(quad.size(), g.nx, g.ny), psi(quad.size(), g.nx, g.ny);
  for (int i = 0; i < g.nx; ++i) rhs.at(qsel, i, 0) = r;
  op.sweep(rhs, psi);
  // inflow transient decays geometrically toward R / (dt * sigma_impl)
  const double expected = r / (dt * op.sigma_impl.at(22, 0));
  CHECK(psi.at(qsel, 22, 0) == doctest::Approx(expected).epsilon(1e-6));
}

TEST_CASE("source iteration with zero sigma_as is a single sweep") {
  const Grid2D g = Grid2D::make(10, 10, -1.5, 1.5, -1.5, 1.5);
  const QuadratureSet quad = build_icosahedron_quadrature(2);
  const MaterialField mats = MaterialField::uniform(g, 1.0, 0.5, 0.0, 0.0);
  const StreamingOperator op = StreamingOperator::make(g, quad, mats, 0.3);
  const ScatteringMatrix s_as = empty_matrix(quad.size());

  AngularFlux R(quad.size(), g.nx, g.ny);
  fill_smooth(R, g);
  AngularFlux psi0(quad.size(), g.nx, g.ny);

  const SourceIterationResult si =
      source_iteration(op, s_as, mats.sigma_as, psi0, R, SourceIterationConfig{});
  CHECK(si.iterations == 1);

  AngularFlux scaled(quad.size(), g.nx, g.ny), direct(quad.size(), g.nx, g.ny);
  for (size_t k = 0; k < R.data.size(); ++k) scaled.data[k] = op.dt * R.data[k];
  op.sweep(scaled, direct);
  for (size_t k = 0; k < direct.data.size(); ++k) CHECK(si.psi.data[k] == direct.data[k]);
}

TEST_CASE("source iteration converges and satisfies the operator identity") {
  const Grid2D g = Grid2D::make(16, 16, -1.5, 1.5, -1.5, 1.5);
  const QuadratureSet quad = build_icosahedron_quadrature(2);
  const MaterialField mats = MaterialField::uniform(g, 1.0, 0.0, 2.0, 0.0);
  const double dt = 0.4;
  const StreamingOperator op = StreamingOperator::make(g, quad, mats, dt);
  const ScatteringMatrix s_as = build_as_matrix(quad, 4.5 / quad.size());

  AngularFlux R(quad.size(), g.nx, g.ny);
  fill_smooth(R, g);
  AngularFlux psi0(quad.size(), g.nx, g.ny);

  SourceIterationConfig cfg;
  cfg.eps_tol = 1e-6;
  const SourceIterationResult si = source_iteration(op, s_as, mats.sigma_as, psi0, R, cfg);
  CHECK(si.iterations > 1);
  CHECK(si.iterations < 200);

  // residual of (L_D - dt sigma_as S_as^+) psi = dt R
  AngularFlux lpsi(quad.size(), g.nx, g.ny), spsi(quad.size(), g.nx, g.ny);
  op.apply(si.psi, lpsi);
  s_as.apply(si.psi, spsi);
  double res = 0.0;
  for (int q = 0; q < lpsi.nq; ++q)
    for (int i = 0; i < g.nx; ++i)
      for (int j = 0; j < g.ny; ++j) {
        const double d = lpsi.at(q, i, j) - dt * mats.sigma_as.at(i, j) * spsi.at(q, i, j) -
                         dt * R.at(q, i, j);
        res += d * d;
      }
  const double c_tilde = (1.0 - si.t_estimate) / si.t_estimate;
  CHECK(std::sqrt(res) < 10.0 * cfg.eps_tol * c_tilde);
}

TEST_CASE("contraction estimate tracks sigma_as over sigma_total") {
  const Grid2D g = Grid2D::make(16, 16, -1.5, 1.5, -1.5, 1.5);
  const QuadratureSet quad = build_icosahedron_quadrature(2);
  const MaterialField mats = MaterialField::uniform(g, 20.0, 0.0, 8.0, 0.0);
  const double dt = 0.25;  // sigma_impl = 20 + 8 + 4 = 32
  const StreamingOperator op = StreamingOperator::make(g, quad, mats, dt);
  const ScatteringMatrix s_as = build_as_matrix(quad, 4.5 / quad.size());

  AngularFlux R(quad.size(), g.nx, g.ny);
  fill_smooth(R, g);
  AngularFlux psi0(quad.size(), g.nx, g.ny);
  SourceIterationConfig cfg;
  cfg.eps_tol = 1e-10;
  const SourceIterationResult si = source_iteration(op, s_as, mats.sigma_as, psi0, R, cfg);
  const double predicted = 8.0 / 32.0;
  CHECK(si.t_estimate > predicted / 2.0);
  CHECK(si.t_estimate < predicted * 2.0);
}

TEST_CASE("source iteration reports non-convergence") {
  const Grid2D g = Grid2D::make(8, 8, -1.5, 1.5, -1.5, 1.5);
  const QuadratureSet quad = build_icosahedron_quadrature(2);
  const MaterialField mats = MaterialField::uniform(g, 0.0, 0.0, 5.0, 0.0);
  const StreamingOperator op = StreamingOperator::make(g, quad, mats, 1.0);
  const ScatteringMatrix s_as = build_as_matrix(quad, 4.5 / quad.size());
  AngularFlux R(quad.size(), g.nx, g.ny);
  fill_smooth(R, g);
  AngularFlux psi0(quad.size(), g.nx, g.ny);
  SourceIterationConfig cfg;
  cfg.eps_tol = 1e-13;
  cfg.max_iters = 2;
  CHECK_THROWS_AS(source_iteration(op, s_as, mats.sigma_as, psi0, R, cfg), ConvergenceError);
}

TEST_CASE("lhs_apply is linear") {
  const Grid2D g = Grid2D::make(8, 8, -1.5, 1.5, -1.5, 1.5);
  const QuadratureSet quad = build_icosahedron_quadrature(2);
  const MaterialField mats = MaterialField::uniform(g, 0.0, 1.0, 1.5, 0.0);
  const StreamingOperator op = StreamingOperator::make(g, quad, mats, 0.3);
  const ScatteringMatrix s_as = build_as_matrix(quad, 4.5 / quad.size());
  const MomentMaps maps = build_moment_maps(quad, 1);
  const AngularFlux psi0(quad.size(), g.nx, g.ny);

  std::vector<double> phi(static_cast<size_t>(g.nx) * g.ny);
  for (size_t k = 0; k < phi.size(); ++k) phi[k] = std::sin(0.1 * k) + 1.2;
  std::vector<double> phi2(phi.size());
  for (size_t k = 0; k < phi.size(); ++k) phi2[k] = 2.0 * phi[k];

  SUBCASE("exactly with a single inner iteration") {
    SourceIterationConfig cfg;
    cfg.single_iteration = true;
    std::vector<double> out1, out2;
    implicit_lhs_apply(op, s_as, mats, maps, psi0, cfg, phi, out1);
    implicit_lhs_apply(op, s_as, mats, maps, psi0, cfg, phi2, out2);
    for (size_t k = 0; k < out1.size(); ++k)
      CHECK(out2[k] == doctest::Approx(2.0 * out1[k]).epsilon(1e-14));
  }

  SUBCASE("to solver tolerance with converged inner iterations") {
    SourceIterationConfig cfg;
    cfg.eps_tol = 1e-12;
    std::vector<double> out1, out2;
    implicit_lhs_apply(op, s_as, mats, maps, psi0, cfg, phi, out1);
    implicit_lhs_apply(op, s_as, mats, maps, psi0, cfg, phi2, out2);
    for (size_t k = 0; k < out1.size(); ++k)
      CHECK(out2[k] == doctest::Approx(2.0 * out1[k]).epsilon(1e-9));
  }
}

TEST_CASE("lhs_apply with zero sigma_s is the identity") {
  const Grid2D g = Grid2D::make(8, 8, -1.5, 1.5, -1.5, 1.5);
  const QuadratureSet quad = build_icosahedron_quadrature(2);
  const MaterialField mats = MaterialField::uniform(g, 1.0, 0.0, 0.0, 0.0);
  const StreamingOperator op = StreamingOperator::make(g, quad, mats, 0.3);
  const ScatteringMatrix s_as = empty_matrix(quad.size());
  const MomentMaps maps = build_moment_maps(quad, 1);
  const AngularFlux psi0(quad.size(), g.nx, g.ny);

  std::vector<double> phi(static_cast<size_t>(g.nx) * g.ny, 0.0), out;
  for (size_t k = 0; k < phi.size(); ++k) phi[k] = 0.4 * k;
  implicit_lhs_apply(op, s_as, mats, maps, psi0, SourceIterationConfig{}, phi, out);
  for (size_t k = 0; k < phi.size(); ++k) CHECK(out[k] == doctest::Approx(phi[k]).epsilon(1e-14));
}

TEST_CASE("eq-19 fixed point satisfies lhs = b") {
  const Grid2D g = Grid2D::make(16, 16, -1.5, 1.5, -1.5, 1.5);
  const QuadratureSet quad = build_icosahedron_quadrature(2);
  const MaterialField mats = MaterialField::uniform(g, 0.0, 1.0, 1.0, 0.1);
  const double dt = 0.3;
  const StreamingOperator op = StreamingOperator::make(g, quad, mats, dt);
  const ScatteringMatrix s_as = build_as_matrix(quad, 4.5 / quad.size());
  const MomentMaps maps = build_moment_maps(quad, 1);

  AngularFlux psi_old(quad.size(), g.nx, g.ny);
  fill_smooth(psi_old, g);
  AngularFlux q_tilde(quad.size(), g.nx, g.ny);
  for (int q = 0; q < q_tilde.nq; ++q)
    for (int i = 0; i < g.nx; ++i)
      for (int j = 0; j < g.ny; ++j)
        q_tilde.at(q, i, j) = mats.source_q.at(i, j) + psi_old.at(q, i, j) / dt;

  SourceIterationConfig cfg;
  cfg.eps_tol = 1e-12;
  const std::vector<double> b =
      moments_of(maps, source_iteration(op, s_as, mats.sigma_as, psi_old, q_tilde, cfg).psi);

  // solve the moment fixed point by long Richardson iteration
  std::vector<double> phi(b);
  AngularFlux R(quad.size(), g.nx, g.ny);
  for (int it = 0; it < 80; ++it) {
    for (int i = 0; i < g.nx; ++i)
      for (int j = 0; j < g.ny; ++j)
        for (int q = 0; q < R.nq; ++q)
          R.at(q, i, j) = mats.sigma_s.at(i, j) *
                          phi[static_cast<size_t>(i) * g.ny + j] / (4.0 * std::numbers::pi);
    const std::vector<double> m =
        moments_of(maps, source_iteration(op, s_as, mats.sigma_as, psi_old, R, cfg).psi);
    for (size_t k = 0; k < phi.size(); ++k) phi[k] = m[k] + b[k];
  }

  std::vector<double> lhs_phi;
  implicit_lhs_apply(op, s_as, mats, maps, psi_old, cfg, phi, lhs_phi);
  double res = 0.0, bn = 0.0;
  for (size_t k = 0; k < b.size(); ++k) {
    res += (lhs_phi[k] - b[k]) * (lhs_phi[k] - b[k]);
    bn += b[k] * b[k];
  }
  CHECK(std::sqrt(res) <= 1.5e-8 * std::sqrt(bn));
}

TEST_CASE("gmres basics") {
  SUBCASE("identity converges immediately") {
    std::vector<double> b{1.0, -2.0, 3.0};
    const GmresResult r = gmres_solve([](const std::vector<double>& x,
                                         std::vector<double>& y) { y = x; },
                                      b, std::vector<double>(3, 0.0), 1e-12);
    CHECK(r.iterations <= 1);
    for (int i = 0; i < 3; ++i) CHECK(r.x[i] == doctest::Approx(b[i]).epsilon(1e-12));
  }

  SUBCASE("matches a direct dense solve") {
    const int n = 5;
    const double a[5][5] = {{4.1, 0.3, -0.2, 0.5, 0.1},
                            {0.3, 3.7, 0.4, -0.1, 0.2},
                            {-0.2, 0.4, 5.2, 0.3, -0.4},
                            {0.5, -0.1, 0.3, 4.4, 0.2},
                            {0.1, 0.2, -0.4, 0.2, 3.9}};
    std::vector<double> b{1.0, 2.0, -1.0, 0.5, 3.0};

    // Gaussian elimination oracle with partial pivoting
    double m[5][6];
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) m[i][j] = a[i][j];
      m[i][n] = b[i];
    }
    for (int c = 0; c < n; ++c) {
      int piv = c;
      for (int r2 = c + 1; r2 < n; ++r2)
        if (std::abs(m[r2][c]) > std::abs(m[piv][c])) piv = r2;
      for (int j = 0; j <= n; ++j) std::swap(m[c][j], m[piv][j]);
      for (int r2 = c + 1; r2 < n; ++r2) {
        const double f = m[r2][c] / m[c][c];
        for (int j = c; j <= n; ++j) m[r2][j] -= f * m[c][j];
      }
    }
    std::vector<double> oracle(n);
    for (int i = n - 1; i >= 0; --i) {
      double s = m[i][n];
      for (int j = i + 1; j < n; ++j) s -= m[i][j] * oracle[j];
      oracle[i] = s / m[i][i];
    }

    const GmresResult r = gmres_solve(
        [&](const std::vector<double>& x, std::vector<double>& y) {
          y.assign(n, 0.0);
          for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) y[i] += a[i][j] * x[j];
        },
        b, std::vector<double>(n, 0.0), 1e-13);
    for (int i = 0; i < n; ++i) CHECK(r.x[i] == doctest::Approx(oracle[i]).epsilon(1e-10));
  }

  SUBCASE("reports non-convergence") {
    // 2x2 system but Krylov dimension capped at 1
    CHECK_THROWS_AS(gmres_solve(
                        [](const std::vector<double>& x, std::vector<double>& y) {
                          y = {x[0] + 2.0 * x[1], 3.0 * x[0] + x[1]};
                        },
                        std::vector<double>{1.0, 1.0}, std::vector<double>(2, 0.0), 1e-14, 1),
                    ConvergenceError);
  }
}

TEST_CASE("implicit Euler decay on the polar ordinate") {
  const Grid2D g = Grid2D::make(8, 8, -1.5, 1.5, -1.5, 1.5);
  const QuadratureSet quad = build_icosahedron_quadrature(2);
  const double sigma_a = 2.0;
  const MaterialField mats = MaterialField::uniform(g, sigma_a, 0.0, 0.0, 0.0);
  const ScatteringMatrix s_as = empty_matrix(quad.size());
  const MomentMaps maps = build_moment_maps(quad, 1);
  const int qp = pole_ordinate(quad);
  REQUIRE(qp >= 0);

  AngularFlux psi0(quad.size(), g.nx, g.ny);
  for (int i = 0; i < g.nx; ++i)
    for (int j = 0; j < g.ny; ++j) psi0.at(qp, i, j) = 1.0;

  const double dt = implicit_time_step(g, quad, 2.0);
  const int n_steps = 3;
  const ImplicitRunResult res = implicit_time_loop(psi0, g, mats, quad, s_as, maps,
                                                   ImplicitOptions{}, 2.0, n_steps * dt);
  CHECK(res.steps == n_steps);
  const double factor = std::pow(1.0 + sigma_a * dt, -n_steps);
  for (int i = 0; i < g.nx; ++i)
    for (int j = 0; j < g.ny; ++j)
      CHECK(res.psi.at(qp, i, j) == doctest::Approx(factor).epsilon(1e-12));
}

TEST_CASE("no coupling means at most one Krylov iteration per step") {
  const Grid2D g = Grid2D::make(10, 10, -1.5, 1.5, -1.5, 1.5);
  const QuadratureSet quad = build_icosahedron_quadrature(2);
  const MaterialField mats = MaterialField::uniform(g, 0.5, 0.0, 0.0, 0.0);
  const ScatteringMatrix s_as = empty_matrix(quad.size());
  const MomentMaps maps = build_moment_maps(quad, 1);

  AngularFlux psi0(quad.size(), g.nx, g.ny);
  fill_smooth(psi0, g);
  const double dt = implicit_time_step(g, quad, 2.0);
  const ImplicitRunResult res =
      implicit_time_loop(psi0, g, mats, quad, s_as, maps, ImplicitOptions{}, 2.0, 4 * dt);
  CHECK(res.total_gmres_iterations <= res.steps);
}

TEST_CASE("1-D advection is L2-stable at large CFL") {
  const Grid2D g = Grid2D::make(64, 1, -1.5, 1.5, 0.0, 3.0);
  const QuadratureSet quad = build_icosahedron_quadrature(2);
  const MaterialField mats = MaterialField::uniform(g, 0.0, 0.0, 0.0, 0.0);

  int qsel = -1;
  for (int q = 0; q < quad.size(); ++q)
    if (std::abs(quad.points[q].y) < 1e-13 && quad.points[q].x > 0.5) qsel = q;
  REQUIRE(qsel >= 0);
  const double ox = quad.points[qsel].x;

  for (double cfl : {1.0, 2.0, 10.0}) {
    const double dt = cfl * g.dx / ox;  // lambda_x = cfl for the tested ordinate
    const StreamingOperator op = StreamingOperator::make(g, quad, mats, dt);
    AngularFlux psi(quad.size(), g.nx, 1), rhs(quad.size(), g.nx, 1),
        next(quad.size(), g.nx, 1);
    for (int i = 0; i < g.nx; ++i)
      psi.at(qsel, i, 0) = std::exp(-18.0 * g.x_center(i) * g.x_center(i));

    auto slab_norm = [&](const AngularFlux& f) {
      double s = 0.0;
      for (int i = 0; i < g.nx; ++i) s += f.at(qsel, i, 0) * f.at(qsel, i, 0);
      return std::sqrt(s);
    };

    double prev = slab_norm(psi);
    for (int step = 0; step < 30; ++step) {
      for (int i = 0; i < g.nx; ++i) rhs.at(qsel, i, 0) = psi.at(qsel, i, 0);
      op.sweep(rhs, next);
      std::swap(psi.data, next.data);
      const double cur = slab_norm(psi);
      CHECK(cur <= prev * (1.0 + 1e-13));
      prev = cur;
    }
  }
}

TEST_CASE("implicit time discretization is first order in dt") {
  BenchmarkConfig base;
  base.solver = SolverKind::kImplicit;
  base.quad_order = 2;
  base.nx = base.ny = 20;
  base.sigma_as = 0.0;
  base.implicit_opts.si.eps_tol = 1e-10;
  base.implicit_opts.gmres_tol = 1e-12;

  // t_end is an exact multiple of every tested dt, so no step is truncated
  {
    const Grid2D g = Grid2D::make(20, 20, -1.5, 1.5, -1.5, 1.5);
    const QuadratureSet quad = build_icosahedron_quadrature(2);
    base.t_end = 3.0 * implicit_time_step(g, quad, 1.6);
  }

  auto phi_at_cfl = [&](double cfl) {
    BenchmarkConfig cfg = base;
    cfg.cfl = cfl;
    return run_linesource(cfg).phi;
  };
  const Field2D coarse = phi_at_cfl(1.6);
  const Field2D mid = phi_at_cfl(0.8);
  const Field2D fine = phi_at_cfl(0.4);

  auto l2diff = [](const Field2D& a, const Field2D& b) {
    double s = 0.0;
    for (std::int64_t k = 0; k < a.size(); ++k) {
      const double d = a.data[static_cast<size_t>(k)] - b.data[static_cast<size_t>(k)];
      s += d * d;
    }
    return std::sqrt(s);
  };
  const double d1 = l2diff(coarse, mid);
  const double d2 = l2diff(mid, fine);
  CHECK(d1 / d2 > 1.4);  // first-order reduction under dt halving
  CHECK(d1 / d2 < 2.9);

  SUBCASE("agrees with the explicit solver to leading order") {
    BenchmarkConfig ex = base;
    ex.solver = SolverKind::kExplicit;
    ex.cfl = 0.4;
    const Field2D phi_ex = run_linesource(ex).phi;
    double norm = 0.0;
    for (double v : phi_ex.data) norm += v * v;
    CHECK(l2diff(fine, phi_ex) <= 0.2 * std::sqrt(norm));
  }
}

TEST_CASE("single-inner-iteration flag is honored") {
  const Grid2D g = Grid2D::make(8, 8, -1.5, 1.5, -1.5, 1.5);
  const QuadratureSet quad = build_icosahedron_quadrature(2);
  const MaterialField mats = MaterialField::uniform(g, 0.5, 0.5, 1.0, 0.0);
  const StreamingOperator op = StreamingOperator::make(g, quad, mats, 0.3);
  const ScatteringMatrix s_as = build_as_matrix(quad, 4.5 / quad.size());
  AngularFlux R(quad.size(), g.nx, g.ny);
  fill_smooth(R, g);
  AngularFlux psi0(quad.size(), g.nx, g.ny);
  SourceIterationConfig cfg;
  cfg.single_iteration = true;
  const SourceIterationResult si = source_iteration(op, s_as, mats.sigma_as, psi0, R, cfg);
  CHECK(si.iterations == 1);
}

}  // TEST_SUITE
