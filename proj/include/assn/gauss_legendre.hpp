#pragma once

#include <functional>
#include <vector>

namespace assn {

struct GaussLegendreRule {
  std::vector<double> nodes;    // on (-1, 1)
  std::vector<double> weights;
};

// n-point Gauss-Legendre rule on [-1, 1] (Newton iteration on P_n).
// Rules are cached; repeated requests for the same n are cheap.
const GaussLegendreRule& gauss_legendre(int n);

// Integral of f over [a, b] with the n-point rule.
double gl_integrate(const std::function<double(double)>& f, double a, double b, int n);

// Composite rule: [a, b] split into `panels` equal panels, an n-point rule on
// each; total function evaluations = panels * n.
double gl_integrate_composite(const std::function<double(double)>& f, double a, double b,
                              int panels, int n);

// Legendre polynomial P_n(x) by the three-term recurrence.
double legendre_p(int n, double x);

}  // namespace assn
