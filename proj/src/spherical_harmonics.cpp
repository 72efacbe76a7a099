#include "assn/spherical_harmonics.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace assn {

int sh_degree(int k) {
  int l = static_cast<int>(std::floor(std::sqrt(static_cast<double>(k))));
  while ((l + 1) * (l + 1) <= k) ++l;
  while (l * l > k) --l;
  return l;
}

std::vector<double> real_spherical_harmonics(int n, const Vec3& omega) {
  if (n < 1) throw std::invalid_argument("need at least one harmonic");
  const int lmax = sh_degree(n - 1);
  std::vector<double> out(static_cast<size_t>(n), 0.0);

  const double ct = omega.z;                       // cos(theta)
  const double st = std::hypot(omega.x, omega.y);  // sin(theta)
  const double phi = std::atan2(omega.y, omega.x);

  // Fully normalized associated Legendre values A_lm (Holmes-Featherstone
  // recurrence), A_00 = 1/sqrt(4*pi); real harmonics carry sqrt(2)*cos/sin
  // azimuthal factors. Everything is rescaled by sqrt(4*pi) at the end so the
  // zeroth function is 1.
  const double root4pi = std::sqrt(4.0 * std::numbers::pi);
  auto emit = [&](int l, int m, double a_lm) {
    // a_lm is A_l|m|; writes both +m and -m entries when in range
    if (m == 0) {
      int k = l * (l + 1);
      if (k < n) out[static_cast<size_t>(k)] = root4pi * a_lm;
      return;
    }
    const double c = std::sqrt(2.0) * std::cos(m * phi);
    const double s = std::sqrt(2.0) * std::sin(m * phi);
    int kp = l * (l + 1) + m;
    int km = l * (l + 1) - m;
    if (kp < n) out[static_cast<size_t>(kp)] = root4pi * a_lm * c;
    if (km < n) out[static_cast<size_t>(km)] = root4pi * a_lm * s;
  };

  double a_mm = 1.0 / root4pi;  // A_00
  for (int m = 0; m <= lmax; ++m) {
    if (m > 0) a_mm *= st * std::sqrt((2.0 * m + 1.0) / (2.0 * m));
    emit(m, m, a_mm);
    double a_prev = a_mm;                                     // A_mm
    double a_cur = ct * std::sqrt(2.0 * m + 3.0) * a_mm;      // A_{m+1,m}
    if (m + 1 <= lmax) emit(m + 1, m, a_cur);
    for (int l = m + 2; l <= lmax; ++l) {
      const double a = std::sqrt((2.0 * l - 1.0) * (2.0 * l + 1.0) /
                                 (static_cast<double>(l - m) * (l + m)));
      const double b = std::sqrt((2.0 * l + 1.0) * (l + m - 1.0) * (l - m - 1.0) /
                                 (static_cast<double>(l - m) * (l + m) * (2.0 * l - 3.0)));
      const double a_next = a * ct * a_cur - b * a_prev;
      a_prev = a_cur;
      a_cur = a_next;
      emit(l, m, a_cur);
    }
  }
  return out;
}

double real_spherical_harmonic(int k, const Vec3& omega) {
  return real_spherical_harmonics(k + 1, omega)[static_cast<size_t>(k)];
}

}  // namespace assn
