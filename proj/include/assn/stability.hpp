#pragma once

#include <string>
#include <vector>

namespace assn {

// Symmetrized stencil-accumulation matrix S = (B + B^T)/2 of the second-order
// implicit upwind flux: diagonal 3/2, first off-diagonals -1, second
// off-diagonals 1/4. Positive definiteness of S gives the L2 entropy
// dissipation of the scheme.
struct EntropyMatrix {
  int n = 0;
  // bands[0] = diagonal (n), bands[1] = first off-diagonal (n-1),
  // bands[2] = second off-diagonal (n-2)
  std::vector<double> diag, off1, off2;

  double entry(int i, int j) const;
  std::vector<double> dense() const;  // row-major n x n
};

EntropyMatrix build_entropy_matrix(int n);

struct SpectrumReport {
  bool positive_definite = false;     // Cholesky succeeded
  double smallest = 0.0, largest = 0.0;
  std::vector<double> eigenvalues;    // ascending
};

// Attempts a Cholesky factorization (success iff positive definite) and
// computes the full spectrum by Householder tridiagonalization followed by
// implicit-shift QL.
SpectrumReport verify_positive_definite(const EntropyMatrix& s);

// Eigenvalues of a dense symmetric matrix (row-major), ascending.
std::vector<double> symmetric_eigenvalues(std::vector<double> a, int n);

void write_spectrum_csv(const SpectrumReport& report, const std::string& path,
                        const std::string& header_comment = std::string());

}  // namespace assn
