#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "assn/geometry.hpp"

namespace assn {

struct QuadratureLoadError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Ordinates on the unit sphere with positive weights summing to 4*pi.
// For the geodesic icosahedral family, size() == 10*(order-1)^2 + 2.
struct QuadratureSet {
  int order = 0;
  std::vector<Vec3> points;
  std::vector<double> weights;

  int size() const { return static_cast<int>(points.size()); }
};

// Geodesic quadrature from a subdivided icosahedron. Each face edge is split
// into (order-1) equal segments, the triangulation nodes are projected onto
// the sphere, and each node weight is the spherical area of the cell formed
// by the centroids of its incident triangles (pentagons at the 12 original
// vertices, hexagons elsewhere). Weights are renormalized so their sum is
// exactly 4*pi. The set is oriented with one vertex at (0,0,1) and one edge
// from that vertex in the x-z half-plane with x > 0.
QuadratureSet build_icosahedron_quadrature(int order);

// Reads a whitespace-separated text file with 4 columns per line
// (x, y, z, weight); validates unit norms, weight positivity and the 4*pi
// weight sum, and infers the icosahedral order from the point count.
QuadratureSet load_quadrature(const std::string& path);

// Writes one line per ordinate with 4 full-precision columns; the output
// round-trips through load_quadrature.
void export_quadrature(const QuadratureSet& q, const std::string& path);

}  // namespace assn
