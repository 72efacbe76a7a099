#include "assn/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>

#include "assn/gauss_legendre.hpp"
#include "assn/spherical_harmonics.hpp"

namespace assn {

namespace {
constexpr double kFourPi = 4.0 * std::numbers::pi;
constexpr double kSqrtPi = 1.7724538509055160273;
}  // namespace

double s_eps(double mu, double epsilon) {
  if (epsilon <= 0.0) throw std::invalid_argument("epsilon must be positive");
  const double norm = 2.0 / (kSqrtPi * epsilon * std::erf(2.0 / epsilon));
  const double d = (1.0 - mu) / epsilon;
  return norm * std::exp(-d * d);
}

double upper_incomplete_gamma_half(int twice_s, double x) {
  if (twice_s < 1) throw std::invalid_argument("s must be a positive multiple of 1/2");
  if (x < 0.0) throw std::invalid_argument("x must be nonnegative");
  // Upward recurrence Gamma(s+1,x) = s*Gamma(s,x) + x^s exp(-x); all terms
  // positive, so no cancellation.
  double s, g;
  if (twice_s % 2 == 1) {
    s = 0.5;
    g = kSqrtPi * std::erfc(std::sqrt(x));
  } else {
    s = 1.0;
    g = std::exp(-x);
  }
  while (2.0 * s + 0.5 < twice_s) {
    g = s * g + std::pow(x, s) * std::exp(-x);
    s += 1.0;
  }
  return g;
}

double transport_coefficient(int i, double epsilon) {
  if (i < 0) throw std::invalid_argument("moment index must be nonnegative");
  if (epsilon <= 0.0) throw std::invalid_argument("epsilon must be positive");
  if (i == 0) return 1.0;
  const double x = 4.0 / (epsilon * epsilon);
  const double s = 0.5 * (1.0 + i);
  const double complete = std::tgamma(s);
  const double upper = upper_incomplete_gamma_half(1 + i, x);
  return std::pow(epsilon, i) / (kSqrtPi * std::erf(2.0 / epsilon)) * (complete - upper);
}

double legendre_moment(int n, double epsilon) {
  if (n < 0) throw std::invalid_argument("moment index must be nonnegative");
  if (epsilon <= 0.0) throw std::invalid_argument("epsilon must be positive");
  // Node count grows with both the polynomial degree and the kernel
  // sharpness; near mu = 1 the Gauss-Legendre nodes cluster like 1/nodes^2,
  // so ~10/eps nodes resolve a width-eps peak.
  int nodes = std::max({200, 10 * n, static_cast<int>(std::ceil(10.0 / epsilon))});
  nodes = std::min(nodes, 40000);
  return 2.0 * std::numbers::pi *
         gl_integrate([&](double mu) { return s_eps(mu, epsilon) * legendre_p(n, mu); }, -1.0,
                      1.0, nodes);
}

void ScatteringMatrix::apply(const AngularFlux& psi, AngularFlux& out) const {
  const std::int64_t slab = psi.slab_size();
  if (isotropic_rank_one) {
    // out_q = c_q/(4*pi) * Phi with Phi accumulated slab-wise in q order
    std::vector<double> phi(static_cast<size_t>(slab), 0.0);
    for (int p = 0; p < n; ++p) {
      const double w = weights[static_cast<size_t>(p)];
      const double* src = psi.slab(p);
      for (std::int64_t c = 0; c < slab; ++c) phi[static_cast<size_t>(c)] += w * src[c];
    }
    for (int q = 0; q < n; ++q) {
      const double f = row_norms[static_cast<size_t>(q)] / kFourPi;
      double* dst = out.slab(q);
      for (std::int64_t c = 0; c < slab; ++c) dst[c] = f * phi[static_cast<size_t>(c)];
    }
    return;
  }
  for (int q = 0; q < n; ++q) {
    double* dst = out.slab(q);
    std::fill(dst, dst + slab, 0.0);
    for (int k = row_ptr[static_cast<size_t>(q)]; k < row_ptr[static_cast<size_t>(q) + 1]; ++k) {
      const double v = val[static_cast<size_t>(k)];
      const double* src = psi.slab(col[static_cast<size_t>(k)]);
      for (std::int64_t c = 0; c < slab; ++c) dst[c] += v * src[c];
    }
  }
}

double ScatteringMatrix::entry(int q, int p) const {
  for (int k = row_ptr[static_cast<size_t>(q)]; k < row_ptr[static_cast<size_t>(q) + 1]; ++k)
    if (col[static_cast<size_t>(k)] == p) return val[static_cast<size_t>(k)];
  return 0.0;
}

void ScatteringMatrix::export_csv(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << "row,col,value\n";
  char buf[80];
  for (int q = 0; q < n; ++q)
    for (int k = row_ptr[static_cast<size_t>(q)]; k < row_ptr[static_cast<size_t>(q) + 1]; ++k) {
      std::snprintf(buf, sizeof(buf), "%d,%d,%.17g\n", q, col[static_cast<size_t>(k)],
                    val[static_cast<size_t>(k)]);
      out << buf;
    }
}

ScatteringMatrix build_as_matrix(const QuadratureSet& quad, double epsilon) {
  const int n = quad.size();
  const double peak = s_eps(1.0, epsilon);
  const double drop = 1e-12 * peak;

  ScatteringMatrix m;
  m.n = n;
  m.row_ptr.assign(static_cast<size_t>(n) + 1, 0);
  m.row_norms.resize(static_cast<size_t>(n));
  for (int q = 0; q < n; ++q) {
    const Vec3& oq = quad.points[static_cast<size_t>(q)];
    const int row_begin = static_cast<int>(m.col.size());
    double denom = 0.0;
    for (int p = 0; p < n; ++p) {
      const double mu = std::clamp(dot(oq, quad.points[static_cast<size_t>(p)]), -1.0, 1.0);
      const double s = s_eps(mu, epsilon);
      if (s < drop) continue;  // dropped before the normalization is finalized
      const double wks = quad.weights[static_cast<size_t>(p)] * s;
      denom += wks;
      m.col.push_back(p);
      m.val.push_back(wks);
    }
    const double cq = 1.0 / denom;
    m.row_norms[static_cast<size_t>(q)] = cq;
    for (size_t k = static_cast<size_t>(row_begin); k < m.val.size(); ++k) m.val[k] *= cq;
    m.row_ptr[static_cast<size_t>(q) + 1] = static_cast<int>(m.col.size());
  }
  return m;
}

ScatteringMatrix build_isotropic_matrix(const QuadratureSet& quad) {
  const int n = quad.size();
  ScatteringMatrix m;
  m.n = n;
  m.isotropic_rank_one = true;
  m.weights = quad.weights;
  m.row_ptr.assign(static_cast<size_t>(n) + 1, 0);
  m.row_norms.resize(static_cast<size_t>(n));
  double wsum = 0.0;
  for (double w : quad.weights) wsum += w;
  const double cq = kFourPi / wsum;  // 1 for a 4*pi-normalized set
  for (int q = 0; q < n; ++q) {
    m.row_norms[static_cast<size_t>(q)] = cq;
    for (int p = 0; p < n; ++p) {
      m.col.push_back(p);
      m.val.push_back(quad.weights[static_cast<size_t>(p)] * cq / kFourPi);
    }
    m.row_ptr[static_cast<size_t>(q) + 1] = static_cast<int>(m.col.size());
  }
  return m;
}

void MomentMaps::apply_M(const double* psi, double* phi) const {
  for (int k = 0; k < n_moments; ++k) {
    const double* row = M.data() + static_cast<size_t>(k) * n_q;
    double s = 0.0;
    for (int q = 0; q < n_q; ++q) s += row[q] * psi[q];
    phi[k] = s;
  }
}

void MomentMaps::apply_O(const double* phi, double* psi) const {
  for (int q = 0; q < n_q; ++q) {
    const double* row = O.data() + static_cast<size_t>(q) * n_moments;
    double s = 0.0;
    for (int k = 0; k < n_moments; ++k) s += row[k] * phi[k];
    psi[q] = s;
  }
}

MomentMaps build_moment_maps(const QuadratureSet& quad, int n_moments, double epsilon) {
  if (n_moments < 1) throw std::invalid_argument("n_moments must be >= 1");
  const int n_q = quad.size();
  if (n_moments > n_q)
    std::fprintf(stderr,
                 "warning: %d moments exceed what %d ordinates can resolve; "
                 "discrete orthogonality will degrade\n",
                 n_moments, n_q);

  MomentMaps maps;
  maps.n_moments = n_moments;
  maps.n_q = n_q;
  maps.M.resize(static_cast<size_t>(n_moments) * n_q);
  maps.O.resize(static_cast<size_t>(n_q) * n_moments);
  maps.Sigma.assign(static_cast<size_t>(n_moments), 0.0);
  maps.Sigma_as.assign(static_cast<size_t>(n_moments), 0.0);

  std::vector<double> gk(static_cast<size_t>(n_moments), 0.0);  // discrete norms
  std::vector<std::vector<double>> rk(static_cast<size_t>(n_q));
  for (int q = 0; q < n_q; ++q) {
    rk[static_cast<size_t>(q)] = real_spherical_harmonics(n_moments, quad.points[static_cast<size_t>(q)]);
    for (int k = 0; k < n_moments; ++k)
      gk[static_cast<size_t>(k)] += quad.weights[static_cast<size_t>(q)] *
                                    rk[static_cast<size_t>(q)][static_cast<size_t>(k)] *
                                    rk[static_cast<size_t>(q)][static_cast<size_t>(k)];
  }
  for (int k = 0; k < n_moments; ++k) {
    for (int q = 0; q < n_q; ++q) {
      const double r = rk[static_cast<size_t>(q)][static_cast<size_t>(k)];
      maps.M[static_cast<size_t>(k) * n_q + q] = quad.weights[static_cast<size_t>(q)] * r;
      maps.O[static_cast<size_t>(q) * n_moments + k] = r / gk[static_cast<size_t>(k)];
    }
  }

  maps.Sigma[0] = 1.0;  // isotropic physical kernel: zeroth moment only
  if (epsilon > 0.0) {
    for (int k = 0; k < n_moments; ++k)
      maps.Sigma_as[static_cast<size_t>(k)] =
          legendre_moment(sh_degree(k), epsilon) / (2.0 * std::numbers::pi);
  }
  return maps;
}

}  // namespace assn
