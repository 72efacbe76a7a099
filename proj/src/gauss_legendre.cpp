#include "assn/gauss_legendre.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace assn {

double legendre_p(int n, double x) {
  if (n == 0) return 1.0;
  double pm = 1.0, p = x;
  for (int k = 2; k <= n; ++k) {
    double pn = ((2.0 * k - 1.0) * x * p - (k - 1.0) * pm) / k;
    pm = p;
    p = pn;
  }
  return p;
}

namespace {

GaussLegendreRule compute_rule(int n) {
  GaussLegendreRule rule;
  rule.nodes.resize(static_cast<size_t>(n));
  rule.weights.resize(static_cast<size_t>(n));
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    // Chebyshev-like initial guess for the i-th root of P_n
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double pm = 1.0, p = x;
      for (int k = 2; k <= n; ++k) {
        double pn = ((2.0 * k - 1.0) * x * p - (k - 1.0) * pm) / k;
        pm = p;
        p = pn;
      }
      dp = n * (x * p - pm) / (x * x - 1.0);
      double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[static_cast<size_t>(i)] = -x;
    rule.weights[static_cast<size_t>(i)] = w;
    rule.nodes[static_cast<size_t>(n - 1 - i)] = x;
    rule.weights[static_cast<size_t>(n - 1 - i)] = w;
  }
  return rule;
}

}  // namespace

const GaussLegendreRule& gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("Gauss-Legendre rule needs n >= 1");
  static std::map<int, GaussLegendreRule> cache;
  static std::mutex mtx;
  std::lock_guard<std::mutex> lock(mtx);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, compute_rule(n)).first;
  return it->second;
}

double gl_integrate(const std::function<double(double)>& f, double a, double b, int n) {
  const GaussLegendreRule& rule = gauss_legendre(n);
  const double mid = 0.5 * (a + b), hw = 0.5 * (b - a);
  double s = 0.0;
  for (int i = 0; i < n; ++i)
    s += rule.weights[static_cast<size_t>(i)] * f(mid + hw * rule.nodes[static_cast<size_t>(i)]);
  return s * hw;
}

double gl_integrate_composite(const std::function<double(double)>& f, double a, double b,
                              int panels, int n) {
  double s = 0.0;
  const double h = (b - a) / panels;
  for (int p = 0; p < panels; ++p) s += gl_integrate(f, a + p * h, a + (p + 1) * h, n);
  return s;
}

}  // namespace assn
