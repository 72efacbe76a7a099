#include "assn/benchmarks.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <condition_variable>
#include <cstdio>
#include <fstream>
#include <limits>
#include <mutex>
#include <numbers>
#include <sstream>
#include <thread>

#include "assn/parallel.hpp"
#include "assn/solver_explicit.hpp"

namespace assn {

namespace {

// splitmix64 / xoshiro256++: per-particle streams seeded from
// (master seed, particle index) so histories are independent of the thread
// schedule.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

struct Xoshiro256 {
  std::uint64_t s[4];

  Xoshiro256(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t sm = seed ^ (0x9e3779b97f4a7c15ull * (stream + 1));
    for (auto& w : s) w = splitmix64(sm);
  }

  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

  std::uint64_t next() {
    const std::uint64_t result = rotl(s[0] + s[3], 23) + s[0];
    const std::uint64_t t = s[1] << 17;
    s[2] ^= s[0];
    s[3] ^= s[1];
    s[1] ^= s[2];
    s[0] ^= s[3];
    s[2] ^= t;
    s[3] = rotl(s[3], 45);
    return result;
  }

  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
};

struct TrackTally {
  const Grid2D* grid;
  std::vector<double>* cells;  // nx*ny time deposits

  void deposit(double px, double py, double vx, double vy, double duration) const {
    const Grid2D& g = *grid;
    int ix = static_cast<int>(std::floor((px - g.xmin) / g.dx));
    int iy = static_cast<int>(std::floor((py - g.ymin) / g.dy));
    double remaining = duration;
    // Time-parameterized traversal; the deposit is time-in-cell, which equals
    // the 3-D track length at unit speed.
    int guard = 0;
    const int guard_max = 4 * (g.nx + g.ny) + 16;
    while (remaining > 0.0 && ++guard < guard_max) {
      double tx = std::numeric_limits<double>::infinity();
      double ty = std::numeric_limits<double>::infinity();
      if (vx > 0.0)
        tx = (g.xmin + (ix + 1) * g.dx - px) / vx;
      else if (vx < 0.0)
        tx = (g.xmin + ix * g.dx - px) / vx;
      if (vy > 0.0)
        ty = (g.ymin + (iy + 1) * g.dy - py) / vy;
      else if (vy < 0.0)
        ty = (g.ymin + iy * g.dy - py) / vy;
      double step = std::min({tx, ty, remaining});
      step = std::max(step, 0.0);
      if (ix >= 0 && ix < g.nx && iy >= 0 && iy < g.ny)
        (*cells)[static_cast<size_t>(ix) * g.ny + iy] += step;
      px += vx * step;
      py += vy * step;
      remaining -= step;
      if (remaining <= 0.0) break;
      if (tx <= ty)
        ix += vx > 0.0 ? 1 : -1;
      else
        iy += vy > 0.0 ? 1 : -1;
    }
  }
};

void simulate_particle(std::uint64_t seed, std::int64_t index, double t_end, double window,
                       const TrackTally& tally) {
  Xoshiro256 rng(seed, static_cast<std::uint64_t>(index));
  double px = 0.0, py = 0.0;
  double t = 0.0;
  const double sigma_t = 1.0;
  const double census_start = t_end - window;

  // isotropic direction on the unit sphere
  auto sample_direction = [&](double& vx, double& vy) {
    const double z = 2.0 * rng.uniform() - 1.0;
    const double phi = 2.0 * std::numbers::pi * rng.uniform();
    const double st = std::sqrt(std::max(0.0, 1.0 - z * z));
    vx = st * std::cos(phi);
    vy = st * std::sin(phi);
  };

  double vx, vy;
  sample_direction(vx, vy);
  while (t < t_end) {
    const double flight = -std::log(1.0 - rng.uniform()) / sigma_t;
    const double step = std::min(flight, t_end - t);
    const double seg_begin = std::max(t, census_start);
    const double seg_end = t + step;
    if (seg_end > seg_begin) {
      const double lead = seg_begin - t;
      tally.deposit(px + vx * lead, py + vy * lead, vx, vy, seg_end - seg_begin);
    }
    px += vx * step;
    py += vy * step;
    t += step;
    if (flight >= t_end - (t - step)) break;  // census reached
    sample_direction(vx, vy);                 // pure scattering, no absorption
  }
}

}  // namespace

ReferenceSolution mc_reference(std::int64_t n_particles, const Grid2D& grid, double t_end,
                               std::uint64_t seed, double census_window) {
  if (n_particles < 1) throw std::invalid_argument("need at least one particle");
  if (census_window <= 0.0 || census_window > t_end)
    throw std::invalid_argument("census window must lie in (0, t_end]");

  const std::int64_t batch_size = 8192;
  const std::int64_t n_batches = (n_particles + batch_size - 1) / batch_size;

  std::vector<double> global(static_cast<size_t>(grid.nx) * grid.ny, 0.0);
  std::atomic<std::int64_t> next_batch{0};
  std::int64_t merge_cursor = 0;
  std::mutex merge_mtx;
  std::condition_variable merge_cv;

  auto worker = [&]() {
    std::vector<double> local(global.size());
    TrackTally tally{&grid, &local};
    while (true) {
      const std::int64_t b = next_batch.fetch_add(1);
      if (b >= n_batches) break;
      std::fill(local.begin(), local.end(), 0.0);
      const std::int64_t lo = b * batch_size;
      const std::int64_t hi = std::min(n_particles, lo + batch_size);
      for (std::int64_t p = lo; p < hi; ++p)
        simulate_particle(seed, p, t_end, census_window, tally);
      // merge strictly in batch order: the sum per cell is independent of the
      // thread count and schedule
      std::unique_lock<std::mutex> lock(merge_mtx);
      merge_cv.wait(lock, [&] { return merge_cursor == b; });
      for (size_t c = 0; c < global.size(); ++c) global[c] += local[c];
      ++merge_cursor;
      merge_cv.notify_all();
    }
  };

  const int nthreads = std::min<std::int64_t>(thread_count(), n_batches);
  std::vector<std::thread> threads;
  for (int t = 1; t < nthreads; ++t) threads.emplace_back(worker);
  worker();
  for (auto& t : threads) t.join();

  ReferenceSolution ref;
  ref.grid = grid;
  ref.t_end = t_end;
  ref.seed = seed;
  ref.provenance = "monte-carlo";
  ref.phi = Field2D(grid.nx, grid.ny);
  const double norm = 1.0 / (static_cast<double>(n_particles) * census_window * grid.cell_area());
  for (int i = 0; i < grid.nx; ++i)
    for (int j = 0; j < grid.ny; ++j)
      ref.phi.at(i, j) = global[static_cast<size_t>(i) * grid.ny + j] * norm;
  return ref;
}

void save_reference(const ReferenceSolution& ref, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "# assn-reference nx=%d ny=%d xmin=%.17g xmax=%.17g ymin=%.17g ymax=%.17g "
                "t_end=%.17g provenance=%s seed=%llu\n",
                ref.grid.nx, ref.grid.ny, ref.grid.xmin, ref.grid.xmax, ref.grid.ymin,
                ref.grid.ymax, ref.t_end, ref.provenance.c_str(),
                static_cast<unsigned long long>(ref.seed));
  out << buf << "x,y,phi\n";
  for (int i = 0; i < ref.grid.nx; ++i)
    for (int j = 0; j < ref.grid.ny; ++j) {
      std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g\n", ref.grid.x_center(i),
                    ref.grid.y_center(j), ref.phi.at(i, j));
      out << buf;
    }
  if (!out) throw std::runtime_error("write failed: " + path);
}

ReferenceSolution load_reference(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open reference file: " + path);
  std::string line;
  if (!std::getline(in, line) || line.rfind("# assn-reference", 0) != 0)
    throw std::runtime_error(path + ": missing reference metadata line");

  int nx = 0, ny = 0;
  double xmin = 0, xmax = 0, ymin = 0, ymax = 0, t_end = 0;
  char prov[64] = {0};
  unsigned long long seed = 0;
  const int got = std::sscanf(line.c_str(),
                              "# assn-reference nx=%d ny=%d xmin=%lg xmax=%lg ymin=%lg ymax=%lg "
                              "t_end=%lg provenance=%63s seed=%llu",
                              &nx, &ny, &xmin, &xmax, &ymin, &ymax, &t_end, prov, &seed);
  if (got != 9) throw std::runtime_error(path + ": malformed reference metadata line");

  ReferenceSolution ref;
  ref.grid = Grid2D::make(nx, ny, xmin, xmax, ymin, ymax);
  ref.t_end = t_end;
  ref.provenance = prov;
  ref.seed = seed;
  ref.phi = Field2D(nx, ny);

  if (!std::getline(in, line) || line != "x,y,phi")
    throw std::runtime_error(path + ": missing x,y,phi header");
  std::int64_t count = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    double x, y, v;
    if (std::sscanf(line.c_str(), "%lg,%lg,%lg", &x, &y, &v) != 3)
      throw std::runtime_error(path + ": malformed data row");
    const std::int64_t i = count / ny, j = count % ny;
    if (i >= nx) throw std::runtime_error(path + ": too many data rows");
    if (v < 0.0) throw std::runtime_error(path + ": negative flux value");
    ref.phi.at(static_cast<int>(i), static_cast<int>(j)) = v;
    ++count;
  }
  if (count != static_cast<std::int64_t>(nx) * ny)
    throw std::runtime_error(path + ": row count does not match grid");
  return ref;
}

ErrorMetrics error_metrics(const Field2D& phi, const Grid2D& grid, const ReferenceSolution& ref) {
  const double tol = 1e-12;
  if (grid.nx != ref.grid.nx || grid.ny != ref.grid.ny ||
      std::abs(grid.xmin - ref.grid.xmin) > tol || std::abs(grid.xmax - ref.grid.xmax) > tol ||
      std::abs(grid.ymin - ref.grid.ymin) > tol || std::abs(grid.ymax - ref.grid.ymax) > tol)
    throw std::invalid_argument("reference grid does not match the solution grid");

  const double da = grid.cell_area();
  double acc1 = 0.0;
  for (std::int64_t c = 0; c < phi.size(); ++c) {
    const double d = phi.data[static_cast<size_t>(c)] - ref.phi.data[static_cast<size_t>(c)];
    acc1 += d * d;
  }

  auto grad = [&](const Field2D& f, int i, int j, double& gx, double& gy) {
    if (i == 0)
      gx = (f.at(1, j) - f.at(0, j)) / grid.dx;
    else if (i == grid.nx - 1)
      gx = (f.at(i, j) - f.at(i - 1, j)) / grid.dx;
    else
      gx = (f.at(i + 1, j) - f.at(i - 1, j)) / (2.0 * grid.dx);
    if (j == 0)
      gy = (f.at(i, 1) - f.at(i, 0)) / grid.dy;
    else if (j == grid.ny - 1)
      gy = (f.at(i, j) - f.at(i, j - 1)) / grid.dy;
    else
      gy = (f.at(i, j + 1) - f.at(i, j - 1)) / (2.0 * grid.dy);
  };

  double acc2 = 0.0;
  for (int i = 0; i < grid.nx; ++i)
    for (int j = 0; j < grid.ny; ++j) {
      double gx, gy, rx, ry;
      grad(phi, i, j, gx, gy);
      grad(ref.phi, i, j, rx, ry);
      acc2 += (gx - rx) * (gx - rx) + (gy - ry) * (gy - ry);
    }
  return {std::sqrt(acc1 * da), std::sqrt(acc2 * da)};
}

ReferenceSolution mass_matched(ReferenceSolution ref, double target_mass) {
  double mass = 0.0;
  for (double v : ref.phi.data) mass += v;
  mass *= ref.grid.cell_area();
  if (mass <= 0.0) throw std::invalid_argument("reference carries no mass");
  const double scale = target_mass / mass;
  for (double& v : ref.phi.data) v *= scale;
  return ref;
}

double sample_bilinear(const Grid2D& grid, const Field2D& phi, double x, double y) {
  double u = (x - grid.xmin) / grid.dx - 0.5;
  double v = (y - grid.ymin) / grid.dy - 0.5;
  u = std::clamp(u, 0.0, static_cast<double>(grid.nx - 1));
  v = std::clamp(v, 0.0, static_cast<double>(grid.ny - 1));
  const int i0 = std::min(grid.nx - 2, static_cast<int>(u));
  const int j0 = std::min(grid.ny - 2, static_cast<int>(v));
  const double fu = u - i0, fv = v - j0;
  return (1 - fu) * (1 - fv) * phi.at(i0, j0) + fu * (1 - fv) * phi.at(i0 + 1, j0) +
         (1 - fu) * fv * phi.at(i0, j0 + 1) + fu * fv * phi.at(i0 + 1, j0 + 1);
}

std::vector<double> ring_samples(const Grid2D& grid, const Field2D& phi, double radius,
                                 int n_samples) {
  const double cx = 0.5 * (grid.xmin + grid.xmax);
  const double cy = 0.5 * (grid.ymin + grid.ymax);
  std::vector<double> out(static_cast<size_t>(n_samples));
  for (int k = 0; k < n_samples; ++k) {
    const double a = 2.0 * std::numbers::pi * k / n_samples;
    out[static_cast<size_t>(k)] =
        sample_bilinear(grid, phi, cx + radius * std::cos(a), cy + radius * std::sin(a));
  }
  return out;
}

RingStats ring_stats(const Grid2D& grid, const Field2D& phi, double radius, int n_samples) {
  const std::vector<double> s = ring_samples(grid, phi, radius, n_samples);
  double mean = 0.0;
  for (double v : s) mean += v;
  mean /= s.size();
  double var = 0.0;
  for (double v : s) var += (v - mean) * (v - mean);
  var /= s.size();
  return {radius, mean, std::sqrt(var)};
}

void write_cuts_csv(const Grid2D& grid, const Field2D& phi, const std::string& path,
                    const std::string& header_comment) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  if (!header_comment.empty()) out << header_comment << "\n";
  out << "cut,x,y,phi\n";
  char buf[160];
  const int jmid = grid.ny / 2;
  for (int i = 0; i < grid.nx; ++i) {
    std::snprintf(buf, sizeof(buf), "horizontal,%.17g,%.17g,%.17g\n", grid.x_center(i),
                  grid.y_center(jmid), phi.at(i, jmid));
    out << buf;
  }
  const int imid = grid.nx / 2;
  for (int j = 0; j < grid.ny; ++j) {
    std::snprintf(buf, sizeof(buf), "vertical,%.17g,%.17g,%.17g\n", grid.x_center(imid),
                  grid.y_center(j), phi.at(imid, j));
    out << buf;
  }
  for (int i = 0; i < std::min(grid.nx, grid.ny); ++i) {
    std::snprintf(buf, sizeof(buf), "diagonal,%.17g,%.17g,%.17g\n", grid.x_center(i),
                  grid.y_center(i), phi.at(i, i));
    out << buf;
  }
}

void write_rings_csv(const Grid2D& grid, const Field2D& phi, const std::vector<double>& radii,
                     const std::string& path, const std::string& stats_path,
                     const std::string& header_comment) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  std::ofstream stats(stats_path);
  if (!stats) throw std::runtime_error("cannot open for writing: " + stats_path);
  if (!header_comment.empty()) {
    out << header_comment << "\n";
    stats << header_comment << "\n";
  }
  out << "radius,angle_deg,phi\n";
  stats << "radius,mean,stddev\n";
  char buf[160];
  for (double r : radii) {
    const std::vector<double> s = ring_samples(grid, phi, r);
    for (size_t k = 0; k < s.size(); ++k) {
      std::snprintf(buf, sizeof(buf), "%.17g,%zu,%.17g\n", r, k, s[k]);
      out << buf;
    }
    const RingStats rs = ring_stats(grid, phi, r);
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g\n", rs.radius, rs.mean, rs.stddev);
    stats << buf;
  }
}

namespace {

BenchmarkRun run_problem(const BenchmarkConfig& cfg, const Grid2D& grid,
                         const MaterialField& mats, AngularFlux psi0,
                         const QuadratureSet& quad) {
  ScatteringMatrix s_as;
  if (cfg.sigma_as > 0.0) {
    const ArtificialKernelParams params =
        ArtificialKernelParams::make(cfg.beta, cfg.sigma_as, quad);
    s_as = build_as_matrix(quad, params.epsilon);
  } else {
    s_as.n = quad.size();
    s_as.row_ptr.assign(static_cast<size_t>(quad.size()) + 1, 0);
  }

  BenchmarkRun run;
  if (cfg.solver == SolverKind::kExplicit) {
    const ScatteringMatrix s_phys = build_isotropic_matrix(quad);
    ExplicitRunResult res = explicit_time_loop(std::move(psi0), grid, mats, quad, s_as, s_phys,
                                               cfg.cfl, cfg.t_end);
    run.steps = res.steps;
    run.phi = scalar_flux(res.psi, quad);
  } else {
    ImplicitOptions opts = cfg.implicit_opts;
    opts.si.single_iteration = cfg.single_inner_iteration;
    const MomentMaps maps = build_moment_maps(quad, opts.n_moments);
    ImplicitRunResult res = implicit_time_loop(std::move(psi0), grid, mats, quad, s_as, maps,
                                               opts, cfg.cfl, cfg.t_end);
    run.steps = res.steps;
    run.si_iterations = res.total_si_iterations;
    run.gmres_iterations = res.total_gmres_iterations;
    run.phi = scalar_flux(res.psi, quad);
  }
  run.min_phi = *std::min_element(run.phi.data.begin(), run.phi.data.end());
  run.max_phi = *std::max_element(run.phi.data.begin(), run.phi.data.end());
  return run;
}

}  // namespace

BenchmarkRun run_linesource(const BenchmarkConfig& cfg) {
  const Grid2D grid = Grid2D::make(cfg.nx, cfg.ny, -1.5, 1.5, -1.5, 1.5);
  const QuadratureSet quad = build_icosahedron_quadrature(cfg.quad_order);
  const MaterialField mats = linesource_materials(grid, cfg.sigma_as);
  return run_problem(cfg, grid, mats, linesource_initial(grid, quad), quad);
}

BenchmarkRun run_lattice(const BenchmarkConfig& cfg) {
  const Grid2D grid = Grid2D::make(cfg.nx, cfg.ny, 0.0, 7.0, 0.0, 7.0);
  const QuadratureSet quad = build_icosahedron_quadrature(cfg.quad_order);
  const MaterialField mats = lattice_layout(grid, cfg.sigma_as);
  return run_problem(cfg, grid, mats, AngularFlux(quad.size(), grid.nx, grid.ny), quad);
}

SweepResult parameter_sweep(SolverKind solver, const std::vector<double>& sigma_as_values,
                            const std::vector<double>& beta_values, const BenchmarkConfig& base,
                            const ReferenceSolution& raw_ref) {
  const Grid2D grid = Grid2D::make(base.nx, base.ny, -1.5, 1.5, -1.5, 1.5);
  const ReferenceSolution ref = mass_matched(raw_ref, linesource_initial_mass(grid));

  BenchmarkConfig baseline_cfg = base;
  baseline_cfg.solver = solver;
  baseline_cfg.sigma_as = 0.0;
  const BenchmarkRun baseline = run_linesource(baseline_cfg);
  const double baseline_delta1 = error_metrics(baseline.phi, grid, ref).delta1;

  SweepResult sweep;
  sweep.baseline_delta1 = baseline_delta1;
  sweep.points.resize(sigma_as_values.size() * beta_values.size());

  const std::int64_t n_pairs = static_cast<std::int64_t>(sweep.points.size());
  parallel_for(0, n_pairs, [&](std::int64_t lo, std::int64_t hi) {
    for (std::int64_t idx = lo; idx < hi; ++idx) {
      const double sas = sigma_as_values[static_cast<size_t>(idx) / beta_values.size()];
      const double beta = beta_values[static_cast<size_t>(idx) % beta_values.size()];
      SweepPoint& pt = sweep.points[static_cast<size_t>(idx)];
      pt.sigma_as = sas;
      pt.beta = beta;
      if (sas == 0.0) {
        // the baseline run is the sigma_as = 0 solution for every beta
        pt.delta1 = baseline_delta1;
        pt.ratio = 1.0;
        continue;
      }
      try {
        BenchmarkConfig cfg = base;
        cfg.solver = solver;
        cfg.sigma_as = sas;
        cfg.beta = beta;
        const BenchmarkRun run = run_linesource(cfg);
        pt.delta1 = error_metrics(run.phi, grid, ref).delta1;
        pt.ratio = pt.delta1 / baseline_delta1;
      } catch (const std::exception&) {
        pt.failed = true;
        pt.delta1 = std::numeric_limits<double>::quiet_NaN();
        pt.ratio = std::numeric_limits<double>::quiet_NaN();
      }
    }
  });
  return sweep;
}

void write_sweep_csv(const SweepResult& sweep, const std::string& path,
                     const std::string& header_comment) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  if (!header_comment.empty()) out << header_comment << "\n";
  out << "sigma_as,beta,delta1,ratio\n";
  char buf[160];
  for (const SweepPoint& p : sweep.points) {
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g\n", p.sigma_as, p.beta, p.delta1,
                  p.ratio);
    out << buf;
  }
}

}  // namespace assn
