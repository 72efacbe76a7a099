#pragma once

#include <vector>

#include "assn/geometry.hpp"

namespace assn {

// Real spherical harmonics in the flat index k = l*(l+1) + m, m in [-l, l],
// scaled so that the k = 0 function is identically 1 and
// int_{S^2} R_k^2 dOmega = 4*pi for every k.
// (These are sqrt(4*pi) times the orthonormal real harmonics.)
double real_spherical_harmonic(int k, const Vec3& omega);

// Degree l for flat index k.
int sh_degree(int k);

// Values R_0..R_{n-1} at omega (single evaluation sweep).
std::vector<double> real_spherical_harmonics(int n, const Vec3& omega);

}  // namespace assn
