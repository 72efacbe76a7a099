#pragma once

#include <functional>
#include <stdexcept>
#include <vector>

namespace assn {

struct ConvergenceError : std::runtime_error {
  double residual = 0.0;
  ConvergenceError(const std::string& what, double res)
      : std::runtime_error(what), residual(res) {}
};

struct GmresResult {
  std::vector<double> x;
  int iterations = 0;
  double relative_residual = 0.0;
};

// Full (non-restarted) matrix-free GMRES with modified Gram-Schmidt.
// Solves A x = b for a linear operator `apply`, starting from x0, until
// ||b - A x|| <= tol * ||b||. Throws ConvergenceError when the Krylov space
// reaches max_dim without meeting the tolerance.
GmresResult gmres_solve(const std::function<void(const std::vector<double>&, std::vector<double>&)>& apply,
                        const std::vector<double>& b, const std::vector<double>& x0, double tol,
                        int max_dim = 200);

}  // namespace assn
