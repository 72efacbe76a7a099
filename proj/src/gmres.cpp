#include "assn/gmres.hpp"

#include <cmath>

namespace assn {

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double nrm2(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

}  // namespace

GmresResult gmres_solve(
    const std::function<void(const std::vector<double>&, std::vector<double>&)>& apply,
    const std::vector<double>& b, const std::vector<double>& x0, double tol, int max_dim) {
  if (tol <= 0.0) throw std::invalid_argument("gmres tolerance must be positive");
  const size_t n = b.size();
  const double bnorm = nrm2(b);
  if (bnorm == 0.0) return {std::vector<double>(n, 0.0), 0, 0.0};

  // r0 = b - A x0
  std::vector<double> r(n), ax(n);
  apply(x0, ax);
  for (size_t i = 0; i < n; ++i) r[i] = b[i] - ax[i];
  double beta = nrm2(r);
  if (beta <= tol * bnorm) return {x0, 0, beta / bnorm};

  std::vector<std::vector<double>> basis;
  basis.reserve(static_cast<size_t>(max_dim) + 1);
  {
    std::vector<double> v0(n);
    for (size_t i = 0; i < n; ++i) v0[i] = r[i] / beta;
    basis.push_back(std::move(v0));
  }

  // Hessenberg stored column-wise; Givens rotations keep the least-squares
  // residual available at every iteration.
  std::vector<std::vector<double>> hcol;
  std::vector<double> cs, sn;
  std::vector<double> g(1, beta);

  double rel = beta / bnorm;
  int k = 0;
  std::vector<double> w(n);
  for (; k < max_dim; ++k) {
    apply(basis[static_cast<size_t>(k)], w);
    std::vector<double> h(static_cast<size_t>(k) + 2, 0.0);
    for (int j = 0; j <= k; ++j) {
      const double hij = dot(basis[static_cast<size_t>(j)], w);
      h[static_cast<size_t>(j)] = hij;
      const std::vector<double>& vj = basis[static_cast<size_t>(j)];
      for (size_t i = 0; i < n; ++i) w[i] -= hij * vj[i];
    }
    const double hlast = nrm2(w);
    h[static_cast<size_t>(k) + 1] = hlast;

    // apply previous rotations
    for (int j = 0; j < k; ++j) {
      const double t = cs[static_cast<size_t>(j)] * h[static_cast<size_t>(j)] +
                       sn[static_cast<size_t>(j)] * h[static_cast<size_t>(j) + 1];
      h[static_cast<size_t>(j) + 1] = -sn[static_cast<size_t>(j)] * h[static_cast<size_t>(j)] +
                                      cs[static_cast<size_t>(j)] * h[static_cast<size_t>(j) + 1];
      h[static_cast<size_t>(j)] = t;
    }
    const double denom = std::hypot(h[static_cast<size_t>(k)], hlast);
    const double c = denom == 0.0 ? 1.0 : h[static_cast<size_t>(k)] / denom;
    const double s = denom == 0.0 ? 0.0 : hlast / denom;
    cs.push_back(c);
    sn.push_back(s);
    h[static_cast<size_t>(k)] = c * h[static_cast<size_t>(k)] + s * hlast;
    h[static_cast<size_t>(k) + 1] = 0.0;
    g.push_back(-s * g[static_cast<size_t>(k)]);
    g[static_cast<size_t>(k)] *= c;
    hcol.push_back(std::move(h));

    rel = std::abs(g[static_cast<size_t>(k) + 1]) / bnorm;
    const bool converged = rel <= tol;
    const bool breakdown = hlast <= 1e-14 * bnorm;
    if (converged || breakdown) {
      ++k;
      break;
    }
    std::vector<double> v(n);
    for (size_t i = 0; i < n; ++i) v[i] = w[i] / hlast;
    basis.push_back(std::move(v));
  }

  // back substitution for y, then x = x0 + V y
  std::vector<double> y(static_cast<size_t>(k), 0.0);
  for (int i = k - 1; i >= 0; --i) {
    double s = g[static_cast<size_t>(i)];
    for (int j = i + 1; j < k; ++j)
      s -= hcol[static_cast<size_t>(j)][static_cast<size_t>(i)] * y[static_cast<size_t>(j)];
    y[static_cast<size_t>(i)] = s / hcol[static_cast<size_t>(i)][static_cast<size_t>(i)];
  }
  GmresResult out{x0, k, rel};
  for (int j = 0; j < k; ++j) {
    const std::vector<double>& vj = basis[static_cast<size_t>(j)];
    for (size_t i = 0; i < n; ++i) out.x[i] += y[static_cast<size_t>(j)] * vj[i];
  }
  if (rel > tol)
    throw ConvergenceError("GMRES did not converge within " + std::to_string(max_dim) +
                               " iterations (relative residual " + std::to_string(rel) + ")",
                           rel);
  return out;
}

}  // namespace assn
