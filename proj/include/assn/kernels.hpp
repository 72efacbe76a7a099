#pragma once

#include <string>
#include <vector>

#include "assn/mesh.hpp"
#include "assn/quadrature.hpp"

namespace assn {

// Parameters of the artificial forward-peaked kernel. The kernel variance is
// epsilon = beta / N_q so the added angular diffusion vanishes as the number
// of ordinates grows.
struct ArtificialKernelParams {
  double beta = 0.0;
  double sigma_as = 0.0;
  double epsilon = 0.0;

  static ArtificialKernelParams make(double beta, double sigma_as, const QuadratureSet& quad) {
    if (beta <= 0.0) throw std::invalid_argument("beta must be positive");
    if (sigma_as < 0.0) throw std::invalid_argument("sigma_as must be nonnegative");
    return {beta, sigma_as, beta / quad.size()};
  }
};

// Forward-peaked Gaussian kernel
//   s_eps(mu) = 2 / (sqrt(pi) * eps * Erf(2/eps)) * exp(-(1-mu)^2 / eps^2),
// normalized so its integral over mu in [-1,1] is exactly 1.
double s_eps(double mu, double epsilon);

// Transport coefficients p_{eps,i} = int_{-1}^{1} (1-mu)^i s_eps(mu) dmu via
// the closed form with the gamma and upper incomplete gamma functions;
// p_{eps,0} = 1 exactly and p_{eps,i} = O(eps^i).
double transport_coefficient(int i, double epsilon);

// Legendre moments k_{eps,n} = 2*pi * int s_eps(mu) P_n(mu) dmu by
// Gauss-Legendre quadrature with at least max(200, 10n) nodes (more when the
// kernel width requires it).
double legendre_moment(int n, double epsilon);

// Upper incomplete gamma Gamma(s, x) for s a positive multiple of 1/2
// (recurrence from Gamma(1/2,x) = sqrt(pi)*erfc(sqrt(x)) and Gamma(1,x) = exp(-x)).
double upper_incomplete_gamma_half(int twice_s, double x);

// Row-normalized discrete in-scattering operator, CSR storage:
//   entry(q,p) = w_p * c_q * s(Omega_q . Omega_p),  sum_p entry(q,p) = 1.
struct ScatteringMatrix {
  int n = 0;
  std::vector<int> row_ptr;  // size n+1
  std::vector<int> col;
  std::vector<double> val;
  std::vector<double> row_norms;  // the c_q (or c_q^(eps)) factors

  // Isotropic physical scattering is rank one; the factored apply
  // out_q = c_q/(4*pi) * sum_p w_p psi_p avoids the dense product.
  bool isotropic_rank_one = false;
  std::vector<double> weights;  // quadrature weights snapshot for the fast path

  // out(q,.) = sum_p entry(q,p) psi(p,.), slab-wise over an AngularFlux.
  void apply(const AngularFlux& psi, AngularFlux& out) const;

  // Dense entry for tests/diagnostics (zero where dropped).
  double entry(int q, int p) const;

  void export_csv(const std::string& path) const;
};

// Artificial in-scattering matrix for the given kernel width. Kernel values
// below 1e-12 * s_eps(1) are dropped before the row normalization c_q^(eps)
// is computed, so retained rows still sum to 1 exactly.
ScatteringMatrix build_as_matrix(const QuadratureSet& quad, double epsilon);

// Physical isotropic in-scattering s = 1/(4*pi) with the same row
// normalization convention.
ScatteringMatrix build_isotropic_matrix(const QuadratureSet& quad);

// Maps between ordinate space (dim N_q) and moment space (dim n_moments).
// Moments are coefficients against real spherical harmonics scaled so the
// zeroth moment is the scalar flux: (M psi)_0 = sum_q w_q psi_q.
//   M[k][q] = w_q R_k(Omega_q)
//   O[q][k] = R_k(Omega_q) / g_k,  g_k = sum_q w_q R_k(Omega_q)^2
// so O*M is the projection onto the discrete harmonic subspace and M*O is the
// identity on moment space (up to quadrature orthogonality error).
// Sigma carries the kernel eigenvalues of physical isotropic scattering
// (1, 0, ..., 0); Sigma_as carries k_{eps,l} / (2*pi) when epsilon > 0.
struct MomentMaps {
  int n_moments = 0;
  int n_q = 0;
  std::vector<double> M;      // n_moments x n_q, row-major
  std::vector<double> O;      // n_q x n_moments, row-major
  std::vector<double> Sigma;
  std::vector<double> Sigma_as;

  // phi_k = sum_q M[k][q] psi_q for one cell's ordinate vector
  void apply_M(const double* psi, double* phi) const;
  void apply_O(const double* phi, double* psi) const;
};

MomentMaps build_moment_maps(const QuadratureSet& quad, int n_moments, double epsilon = 0.0);

}  // namespace assn
