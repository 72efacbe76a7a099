#include "assn/stability.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace assn {

double EntropyMatrix::entry(int i, int j) const {
  const int d = std::abs(i - j);
  if (d == 0) return diag[static_cast<size_t>(i)];
  if (d == 1) return off1[static_cast<size_t>(std::min(i, j))];
  if (d == 2) return off2[static_cast<size_t>(std::min(i, j))];
  return 0.0;
}

std::vector<double> EntropyMatrix::dense() const {
  std::vector<double> a(static_cast<size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = std::max(0, i - 2); j <= std::min(n - 1, i + 2); ++j)
      a[static_cast<size_t>(i) * n + j] = entry(i, j);
  return a;
}

EntropyMatrix build_entropy_matrix(int n) {
  if (n < 3) throw std::invalid_argument("entropy matrix needs n >= 3");
  // B accumulates g_{j+1/2} - g_{j-1/2} = 3/2 psi_j - 2 psi_{j-1} + 1/2 psi_{j-2}
  // with zero inflow ghosts; S = (B + B^T)/2 truncates the Toeplitz bands at
  // the boundary rows.
  EntropyMatrix s;
  s.n = n;
  s.diag.assign(static_cast<size_t>(n), 1.5);
  s.off1.assign(static_cast<size_t>(n) - 1, -1.0);
  s.off2.assign(static_cast<size_t>(n) - 2, 0.25);
  return s;
}

namespace {

// Householder reduction of a dense symmetric matrix to tridiagonal form
// (diagonal d, subdiagonal e); eigenvectors are not accumulated.
void tridiagonalize(std::vector<double>& a, int n, std::vector<double>& d,
                    std::vector<double>& e) {
  d.assign(static_cast<size_t>(n), 0.0);
  e.assign(static_cast<size_t>(n), 0.0);
  auto at = [&](int i, int j) -> double& { return a[static_cast<size_t>(i) * n + j]; };

  for (int i = n - 1; i >= 1; --i) {
    const int l = i - 1;
    double h = 0.0;
    if (l > 0) {
      double scale = 0.0;
      for (int k = 0; k <= l; ++k) scale += std::abs(at(i, k));
      if (scale == 0.0) {
        e[static_cast<size_t>(i)] = at(i, l);
      } else {
        for (int k = 0; k <= l; ++k) {
          at(i, k) /= scale;
          h += at(i, k) * at(i, k);
        }
        double f = at(i, l);
        double g = f >= 0.0 ? -std::sqrt(h) : std::sqrt(h);
        e[static_cast<size_t>(i)] = scale * g;
        h -= f * g;
        at(i, l) = f - g;
        f = 0.0;
        for (int j = 0; j <= l; ++j) {
          g = 0.0;
          for (int k = 0; k <= j; ++k) g += at(j, k) * at(i, k);
          for (int k = j + 1; k <= l; ++k) g += at(k, j) * at(i, k);
          e[static_cast<size_t>(j)] = g / h;
          f += e[static_cast<size_t>(j)] * at(i, j);
        }
        const double hh = f / (h + h);
        for (int j = 0; j <= l; ++j) {
          f = at(i, j);
          g = e[static_cast<size_t>(j)] - hh * f;
          e[static_cast<size_t>(j)] = g;
          for (int k = 0; k <= j; ++k)
            at(j, k) -= f * e[static_cast<size_t>(k)] + g * at(i, k);
        }
      }
    } else {
      e[static_cast<size_t>(i)] = at(i, l);
    }
    d[static_cast<size_t>(i)] = h;
  }
  for (int i = 0; i < n; ++i) d[static_cast<size_t>(i)] = at(i, i);
}

// Implicit-shift QL on a symmetric tridiagonal matrix; eigenvalues land in d.
void tridiagonal_ql(std::vector<double>& d, std::vector<double>& e, int n) {
  for (int i = 1; i < n; ++i) e[static_cast<size_t>(i - 1)] = e[static_cast<size_t>(i)];
  e[static_cast<size_t>(n) - 1] = 0.0;
  for (int l = 0; l < n; ++l) {
    int iter = 0;
    int m;
    do {
      for (m = l; m < n - 1; ++m) {
        const double dd = std::abs(d[static_cast<size_t>(m)]) +
                          std::abs(d[static_cast<size_t>(m) + 1]);
        if (std::abs(e[static_cast<size_t>(m)]) <= 1e-300 ||
            std::abs(e[static_cast<size_t>(m)]) <= 2.3e-16 * dd)
          break;
      }
      if (m != l) {
        if (++iter == 60) throw std::runtime_error("tridiagonal QL failed to converge");
        double g = (d[static_cast<size_t>(l) + 1] - d[static_cast<size_t>(l)]) /
                   (2.0 * e[static_cast<size_t>(l)]);
        double r = std::hypot(g, 1.0);
        g = d[static_cast<size_t>(m)] - d[static_cast<size_t>(l)] +
            e[static_cast<size_t>(l)] / (g + (g >= 0.0 ? std::abs(r) : -std::abs(r)));
        double s = 1.0, c = 1.0, p = 0.0;
        for (int i = m - 1; i >= l; --i) {
          double f = s * e[static_cast<size_t>(i)];
          const double b = c * e[static_cast<size_t>(i)];
          r = std::hypot(f, g);
          e[static_cast<size_t>(i) + 1] = r;
          if (r == 0.0) {
            d[static_cast<size_t>(i) + 1] -= p;
            e[static_cast<size_t>(m)] = 0.0;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[static_cast<size_t>(i) + 1] - p;
          r = (d[static_cast<size_t>(i)] - g) * s + 2.0 * c * b;
          p = s * r;
          d[static_cast<size_t>(i) + 1] = g + p;
          g = c * r - b;
        }
        if (r == 0.0 && m - 1 >= l) continue;
        d[static_cast<size_t>(l)] -= p;
        e[static_cast<size_t>(l)] = g;
        e[static_cast<size_t>(m)] = 0.0;
      }
    } while (m != l);
  }
}

}  // namespace

std::vector<double> symmetric_eigenvalues(std::vector<double> a, int n) {
  std::vector<double> d, e;
  tridiagonalize(a, n, d, e);
  tridiagonal_ql(d, e, n);
  std::sort(d.begin(), d.end());
  return d;
}

SpectrumReport verify_positive_definite(const EntropyMatrix& s) {
  SpectrumReport report;

  // Banded Cholesky; failure (nonpositive pivot) means not positive definite.
  {
    const int n = s.n;
    std::vector<double> l(static_cast<size_t>(n) * 3, 0.0);  // bands 0..2 below diag
    auto lband = [&](int i, int b) -> double& {
      return l[static_cast<size_t>(i) * 3 + b];
    };
    bool ok = true;
    for (int i = 0; i < n && ok; ++i) {
      for (int b = std::min(i, 2); b >= 0; --b) {
        const int j = i - b;
        double sum = s.entry(i, j);
        for (int k = std::max(0, i - 2); k < j; ++k)
          sum -= lband(i, i - k) * lband(j, j - k);
        if (b == 0) {
          if (sum <= 0.0) {
            ok = false;
            break;
          }
          lband(i, 0) = std::sqrt(sum);
        } else {
          lband(i, b) = sum / lband(j, 0);
        }
      }
    }
    report.positive_definite = ok;
  }

  report.eigenvalues = symmetric_eigenvalues(s.dense(), s.n);
  report.smallest = report.eigenvalues.front();
  report.largest = report.eigenvalues.back();
  return report;
}

void write_spectrum_csv(const SpectrumReport& report, const std::string& path,
                        const std::string& header_comment) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  if (!header_comment.empty()) out << header_comment << "\n";
  out << "index,eigenvalue\n";
  char buf[64];
  for (size_t i = 0; i < report.eigenvalues.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%zu,%.17g\n", i, report.eigenvalues[i]);
    out << buf;
  }
}

}  // namespace assn
