#include "assn/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

namespace assn {

namespace {

constexpr double kFourPi = 4.0 * std::numbers::pi;

// Icosahedron with circumradius 1: poles at z = +-1 and two rings of five
// vertices at z = +-1/sqrt(5). The upper ring starts at azimuth 0 so the
// edge from the north pole to the first ring vertex lies in the x-z
// half-plane with x > 0; the lower ring is offset by 36 degrees.
std::vector<Vec3> icosahedron_vertices() {
  const double h = 1.0 / std::sqrt(5.0);
  const double r = 2.0 / std::sqrt(5.0);
  std::vector<Vec3> v;
  v.push_back({0.0, 0.0, 1.0});
  for (int k = 0; k < 5; ++k) {
    double phi = 2.0 * std::numbers::pi * k / 5.0;
    v.push_back({r * std::cos(phi), r * std::sin(phi), h});
  }
  for (int k = 0; k < 5; ++k) {
    double phi = 2.0 * std::numbers::pi * k / 5.0 + std::numbers::pi / 5.0;
    v.push_back({r * std::cos(phi), r * std::sin(phi), -h});
  }
  v.push_back({0.0, 0.0, -1.0});
  return v;
}

// Faces recovered from edge adjacency (edge length is the minimal pairwise
// distance), sorted for a deterministic face ordering.
std::vector<std::array<int, 3>> icosahedron_faces(const std::vector<Vec3>& v) {
  const int n = static_cast<int>(v.size());
  double min_d = 1e30;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) min_d = std::min(min_d, norm(v[i] - v[j]));
  std::vector<std::vector<char>> adj(n, std::vector<char>(n, 0));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (norm(v[i] - v[j]) < 1.1 * min_d) adj[i][j] = adj[j][i] = 1;
  std::vector<std::array<int, 3>> faces;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      if (!adj[i][j]) continue;
      for (int k = j + 1; k < n; ++k)
        if (adj[i][k] && adj[j][k]) faces.push_back({i, j, k});
    }
  std::sort(faces.begin(), faces.end());
  return faces;
}

struct NodeSet {
  std::vector<Vec3> pts;  // unit vectors

  // Returns the index of a point within tol of p, inserting it if absent.
  // Shared face/edge nodes from adjacent faces differ only by floating-point
  // association, far below tol.
  int find_or_insert(const Vec3& p, double tol) {
    for (int i = static_cast<int>(pts.size()) - 1; i >= 0; --i) {
      if (norm(pts[static_cast<size_t>(i)] - p) < tol) return i;
    }
    pts.push_back(p);
    return static_cast<int>(pts.size()) - 1;
  }
};

// Interior angle of a spherical polygon at vertex b between arcs b->a, b->c.
double spherical_angle(const Vec3& a, const Vec3& b, const Vec3& c) {
  Vec3 ta = normalized(a - b * dot(a, b));
  Vec3 tc = normalized(c - b * dot(c, b));
  return std::atan2(norm(cross(ta, tc)), dot(ta, tc));
}

// Area of a convex spherical polygon via the spherical excess
// (sum of interior angles minus (n-2)*pi).
double spherical_polygon_area(const std::vector<Vec3>& poly) {
  const int m = static_cast<int>(poly.size());
  double angle_sum = 0.0;
  for (int k = 0; k < m; ++k) {
    const Vec3& prev = poly[static_cast<size_t>((k + m - 1) % m)];
    const Vec3& cur = poly[static_cast<size_t>(k)];
    const Vec3& next = poly[static_cast<size_t>((k + 1) % m)];
    angle_sum += spherical_angle(prev, cur, next);
  }
  return angle_sum - (m - 2) * std::numbers::pi;
}

}  // namespace

QuadratureSet build_icosahedron_quadrature(int order) {
  if (order < 2) throw std::invalid_argument("quadrature order must be >= 2");
  const int n_sub = order - 1;  // segments per icosahedron edge
  const double dedup_tol = 1e-9;

  const std::vector<Vec3> verts = icosahedron_vertices();
  const auto faces = icosahedron_faces(verts);

  // Subdivide each face on the barycentric lattice and project radially.
  NodeSet nodes;
  std::vector<std::array<int, 3>> tris;
  for (const auto& f : faces) {
    const Vec3 a = verts[static_cast<size_t>(f[0])];
    const Vec3 b = verts[static_cast<size_t>(f[1])];
    const Vec3 c = verts[static_cast<size_t>(f[2])];
    // lattice(i,j) with i+j <= n_sub
    std::vector<int> id((n_sub + 1) * (n_sub + 1), -1);
    auto lat = [&](int i, int j) -> int& { return id[static_cast<size_t>(i * (n_sub + 1) + j)]; };
    for (int i = 0; i <= n_sub; ++i) {
      for (int j = 0; j <= n_sub - i; ++j) {
        Vec3 p = a * (static_cast<double>(n_sub - i - j) / n_sub) +
                 b * (static_cast<double>(i) / n_sub) + c * (static_cast<double>(j) / n_sub);
        lat(i, j) = nodes.find_or_insert(normalized(p), dedup_tol);
      }
    }
    for (int i = 0; i + 1 <= n_sub; ++i) {
      for (int j = 0; i + j + 1 <= n_sub; ++j) {
        tris.push_back({lat(i, j), lat(i + 1, j), lat(i, j + 1)});
        if (i + j + 2 <= n_sub)
          tris.push_back({lat(i + 1, j), lat(i + 1, j + 1), lat(i, j + 1)});
      }
    }
  }

  const int n_q = static_cast<int>(nodes.pts.size());
  if (n_q != 10 * n_sub * n_sub + 2)
    throw std::runtime_error("icosahedron subdivision produced an unexpected node count");

  // Incident triangles per node, in deterministic triangle order.
  std::vector<std::vector<int>> incident(static_cast<size_t>(n_q));
  for (int t = 0; t < static_cast<int>(tris.size()); ++t)
    for (int v : tris[static_cast<size_t>(t)]) incident[static_cast<size_t>(v)].push_back(t);

  std::vector<Vec3> centroids(tris.size());
  for (size_t t = 0; t < tris.size(); ++t) {
    const auto& tr = tris[t];
    centroids[t] = normalized((nodes.pts[static_cast<size_t>(tr[0])] +
                               nodes.pts[static_cast<size_t>(tr[1])] +
                               nodes.pts[static_cast<size_t>(tr[2])]) /
                              3.0);
  }

  QuadratureSet q;
  q.order = order;
  q.points = nodes.pts;
  q.weights.resize(static_cast<size_t>(n_q));

  for (int v = 0; v < n_q; ++v) {
    const Vec3 p = nodes.pts[static_cast<size_t>(v)];
    const auto& inc = incident[static_cast<size_t>(v)];
    // Tangent basis at p; the pole case needs a non-parallel seed axis.
    Vec3 seed = std::abs(p.z) < 0.9 ? Vec3{0.0, 0.0, 1.0} : Vec3{1.0, 0.0, 0.0};
    Vec3 e1 = normalized(cross(seed, p));
    Vec3 e2 = cross(p, e1);
    std::vector<std::pair<double, int>> order_by_angle;
    order_by_angle.reserve(inc.size());
    for (int t : inc) {
      const Vec3& c = centroids[static_cast<size_t>(t)];
      order_by_angle.emplace_back(std::atan2(dot(c, e2), dot(c, e1)), t);
    }
    std::sort(order_by_angle.begin(), order_by_angle.end());
    std::vector<Vec3> poly;
    poly.reserve(order_by_angle.size());
    for (const auto& [ang, t] : order_by_angle) poly.push_back(centroids[static_cast<size_t>(t)]);
    q.weights[static_cast<size_t>(v)] = spherical_polygon_area(poly);
  }

  double sum = 0.0;
  for (double w : q.weights) sum += w;
  const double scale = kFourPi / sum;
  for (double& w : q.weights) w *= scale;
  return q;
}

QuadratureSet load_quadrature(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw QuadratureLoadError("cannot open quadrature file: " + path);

  QuadratureSet q;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
    std::istringstream ls(line);
    double x, y, z, w;
    if (!(ls >> x >> y >> z >> w))
      throw QuadratureLoadError(path + ":" + std::to_string(lineno) +
                                ": expected 4 floating-point entries");
    std::string rest;
    if (ls >> rest)
      throw QuadratureLoadError(path + ":" + std::to_string(lineno) + ": trailing content '" +
                                rest + "'");
    const double r = std::sqrt(x * x + y * y + z * z);
    if (std::abs(r - 1.0) > 1e-9)
      throw QuadratureLoadError(path + ":" + std::to_string(lineno) +
                                ": point norm deviates from 1 by more than 1e-9");
    if (!(w > 0.0))
      throw QuadratureLoadError(path + ":" + std::to_string(lineno) + ": nonpositive weight");
    q.points.push_back({x, y, z});
    q.weights.push_back(w);
  }
  if (q.points.empty()) throw QuadratureLoadError(path + ": no quadrature entries");

  double sum = 0.0;
  for (double w : q.weights) sum += w;
  if (std::abs(sum - kFourPi) > 1e-9 * kFourPi)
    throw QuadratureLoadError(path + ": weights sum to " + std::to_string(sum) +
                              ", expected 4*pi");

  const int n_q = q.size();
  const int m = (n_q - 2) / 10;
  const int root = static_cast<int>(std::lround(std::sqrt(static_cast<double>(m))));
  if (n_q < 12 || (n_q - 2) % 10 != 0 || root * root != m)
    throw QuadratureLoadError(path + ": point count " + std::to_string(n_q) +
                              " does not match an icosahedral order");
  q.order = root + 1;
  return q;
}

void export_quadrature(const QuadratureSet& q, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  char buf[160];
  for (int i = 0; i < q.size(); ++i) {
    const Vec3& p = q.points[static_cast<size_t>(i)];
    std::snprintf(buf, sizeof(buf), "%.17g %.17g %.17g %.17g\n", p.x, p.y, p.z,
                  q.weights[static_cast<size_t>(i)]);
    out << buf;
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace assn
