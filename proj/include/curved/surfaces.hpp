#pragma once

#include <array>
#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "curved/core.hpp"
#include "curved/hyperbolic.hpp"
#include "curved/spherical.hpp"

// Closed triangulated surfaces described intrinsically: combinatorics plus the
// three corner angles of every face. Total curvature is the sum of the face
// defects.

namespace curved::surfaces {

struct Face {
  std::array<int, 3> v{};
  std::array<double, 3> angle{};  // angle[i] sits at vertex v[i]
};

struct TriangulatedSurface {
  int W = 0, K = 0, S = 0;
  std::vector<Face> faces;

  /// Throws DomainError unless every edge borders exactly two faces and the
  /// header counts agree with the face list.
  void validate() const {
    if (W <= 0 || K <= 0 || S <= 0) throw DomainError("surface: counts must be positive");
    if (static_cast<int>(faces.size()) != S) throw DomainError("surface: face count differs from header S");
    std::map<std::pair<int, int>, int> edge_faces;
    std::vector<bool> used(static_cast<std::size_t>(W), false);
    for (const Face& f : faces) {
      for (int i = 0; i < 3; ++i) {
        const int a = f.v[i];
        if (a < 0 || a >= W) throw DomainError("surface: vertex index out of range");
        used[static_cast<std::size_t>(a)] = true;
        if (!(f.angle[i] > 0.0 && f.angle[i] < kTwoPi)) throw DomainError("surface: corner angle outside (0, 2pi)");
      }
      if (f.v[0] == f.v[1] || f.v[1] == f.v[2] || f.v[0] == f.v[2]) {
        throw DomainError("surface: face repeats a vertex");
      }
      for (int i = 0; i < 3; ++i) {
        const int a = f.v[i], b = f.v[(i + 1) % 3];
        ++edge_faces[{std::min(a, b), std::max(a, b)}];
      }
    }
    for (const auto& [edge, count] : edge_faces) {
      if (count != 2) {
        throw DomainError("surface: edge " + std::to_string(edge.first) + "-" + std::to_string(edge.second) +
                          " borders " + std::to_string(count) + " faces (non-manifold)");
      }
    }
    if (static_cast<int>(edge_faces.size()) != K) throw DomainError("surface: edge count differs from header K");
    for (bool u : used)
      if (!u) throw DomainError("surface: a vertex belongs to no face");
  }
};

struct GaussBonnetResult {
  double total_curvature = 0;
  int chi = 0;
  double residual = 0;
};

inline GaussBonnetResult gauss_bonnet(const TriangulatedSurface& s) {
  s.validate();
  double total = 0.0;
  for (const Face& f : s.faces) total += f.angle[0] + f.angle[1] + f.angle[2] - kPi;
  GaussBonnetResult r;
  r.total_curvature = total;
  r.chi = s.W - s.K + s.S;
  r.residual = std::abs(total - kTwoPi * r.chi);
  return r;
}

// ---------------------------------------------------------------------------
// Text format: "W K S" then one line per face "i j k alpha beta gamma".

inline void write(std::ostream& out, const TriangulatedSurface& s) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "%d %d %d\n", s.W, s.K, s.S);
  out << buf;
  for (const Face& f : s.faces) {
    std::snprintf(buf, sizeof buf, "%d %d %d %.17g %.17g %.17g\n", f.v[0], f.v[1], f.v[2], f.angle[0], f.angle[1],
                  f.angle[2]);
    out << buf;
  }
}

inline TriangulatedSurface read(std::istream& in) {
  TriangulatedSurface s;
  if (!(in >> s.W >> s.K >> s.S)) throw DomainError("surface: missing 'W K S' header");
  if (s.S < 0 || s.S > 10'000'000) throw DomainError("surface: implausible face count");
  s.faces.resize(static_cast<std::size_t>(s.S));
  for (Face& f : s.faces) {
    if (!(in >> f.v[0] >> f.v[1] >> f.v[2] >> f.angle[0] >> f.angle[1] >> f.angle[2])) {
      throw DomainError("surface: truncated face list");
    }
  }
  std::string extra;
  if (in >> extra) throw DomainError("surface: trailing data after the face list");
  s.validate();
  return s;
}

inline std::string to_string(const TriangulatedSurface& s) {
  std::ostringstream os;
  write(os, s);
  return os.str();
}

// ---------------------------------------------------------------------------
// Builders

namespace detail {

inline int count_edges(const std::vector<Face>& faces) {
  std::map<std::pair<int, int>, int> e;
  for (const Face& f : faces)
    for (int i = 0; i < 3; ++i) {
      const int a = f.v[i], b = f.v[(i + 1) % 3];
      ++e[{std::min(a, b), std::max(a, b)}];
    }
  return static_cast<int>(e.size());
}

}  // namespace detail

/// Geodesic triangulation of the unit sphere from the icosahedron, each face
/// split into 4^subdivisions triangles with vertices pushed to the sphere.
inline TriangulatedSurface icosahedral_sphere(int subdivisions = 0) {
  if (subdivisions < 0 || subdivisions > 6) throw DomainError("icosahedral_sphere: subdivisions must lie in [0, 6]");
  const double t = (1.0 + std::sqrt(5.0)) / 2.0;
  std::vector<Vector3> pts = {{-1, t, 0}, {1, t, 0}, {-1, -t, 0}, {1, -t, 0}, {0, -1, t}, {0, 1, t},
                              {0, -1, -t}, {0, 1, -t}, {t, 0, -1}, {t, 0, 1}, {-t, 0, -1}, {-t, 0, 1}};
  for (Vector3& p : pts) p = normalize(p);
  std::vector<std::array<int, 3>> tris = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
                                          {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
                                          {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
                                          {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};
  for (int level = 0; level < subdivisions; ++level) {
    std::map<std::pair<int, int>, int> mid;
    auto midpoint = [&](int a, int b) {
      const auto key = std::pair{std::min(a, b), std::max(a, b)};
      if (auto it = mid.find(key); it != mid.end()) return it->second;
      pts.push_back(normalize(pts[static_cast<std::size_t>(a)] + pts[static_cast<std::size_t>(b)]));
      const int id = static_cast<int>(pts.size()) - 1;
      mid.emplace(key, id);
      return id;
    };
    std::vector<std::array<int, 3>> next;
    for (const auto& f : tris) {
      const int ab = midpoint(f[0], f[1]), bc = midpoint(f[1], f[2]), ca = midpoint(f[2], f[0]);
      next.push_back({f[0], ab, ca});
      next.push_back({f[1], bc, ab});
      next.push_back({f[2], ca, bc});
      next.push_back({ab, bc, ca});
    }
    tris = std::move(next);
  }
  TriangulatedSurface s;
  for (const auto& f : tris) {
    const sphere::SpherePoint A(pts[static_cast<std::size_t>(f[0])]), B(pts[static_cast<std::size_t>(f[1])]),
        C(pts[static_cast<std::size_t>(f[2])]);
    const sphere::SphericalTriangle m = sphere::measure_triangle(A, B, C);
    s.faces.push_back({f, {m.alpha, m.beta, m.gamma}});
  }
  s.W = static_cast<int>(pts.size());
  s.S = static_cast<int>(s.faces.size());
  s.K = detail::count_edges(s.faces);
  return s;
}

/// Unit square with opposite sides glued, cut into an n x n grid of squares
/// and each square into two right isosceles triangles.
inline TriangulatedSurface flat_torus(int n = 3) {
  if (n < 3) throw DomainError("flat_torus: need n >= 3 for a simplicial triangulation");
  auto id = [n](int i, int j) { return ((i % n + n) % n) * n + ((j % n + n) % n); };
  TriangulatedSurface s;
  const double q = kPi / 4, r = kPi / 2;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      // square with corners (i,j), (i+1,j), (i+1,j+1), (i,j+1); diagonal (i,j)-(i+1,j+1)
      s.faces.push_back({{id(i, j), id(i + 1, j), id(i + 1, j + 1)}, {q, r, q}});
      s.faces.push_back({{id(i, j), id(i + 1, j + 1), id(i, j + 1)}, {q, q, r}});
    }
  s.W = n * n;
  s.S = static_cast<int>(s.faces.size());
  s.K = detail::count_edges(s.faces);
  return s;
}

/// Genus-two surface: the regular hyperbolic octagon with corner angles pi/4,
/// sides glued a b a^-1 b^-1 c d c^-1 d^-1. Sides are cut in thirds; the
/// octagon is triangulated by a centre, a ring of 24 points halfway to the
/// boundary points, and the strips between ring and boundary. Corner angles
/// come from the hyperboloid model.
inline TriangulatedSurface genus_two() {
  using namespace curved::hyperbolic;
  constexpr int kSides = 8, kCuts = 3, kBoundary = kSides * kCuts;
  const double cot = 1.0 / std::tan(kPi / kSides);
  const double R = std::acosh(cot * cot);  // circumradius for interior angle pi/4
  std::vector<HPoint> corner;
  for (int k = 0; k < kSides; ++k) corner.push_back(HPoint::polar(R, kTwoPi * k / kSides));

  std::vector<HPoint> boundary;  // 24 points counterclockwise
  for (int k = 0; k < kSides; ++k) {
    const HPoint& a = corner[static_cast<std::size_t>(k)];
    const HPoint& b = corner[static_cast<std::size_t>((k + 1) % kSides)];
    const double len = h_distance(a, b);
    for (int j = 0; j < kCuts; ++j) boundary.push_back(j == 0 ? a : h_geodesic_through(a, b, len * j / kCuts));
  }
  const HPoint O = HPoint::origin();
  std::vector<HPoint> ring;
  for (const HPoint& b : boundary) ring.push_back(h_geodesic_through(O, b, h_distance(O, b) / 2));

  // Vertex ids: 0 = centre, 1..24 = ring, 25 = the single corner class,
  // 26..33 = classes of side points.
  // Side k runs from corner k to corner k+1; word a b a^-1 b^-1 c d c^-1 d^-1:
  // side 0 (a) pairs with side 2 (a^-1) reversed, 1 with 3, 4 with 6, 5 with 7.
  auto side_point_class = [&](int side, int j) {  // j in {1, 2}
    static constexpr int partner[kSides] = {2, 3, 0, 1, 6, 7, 4, 5};
    static constexpr bool primary[kSides] = {true, true, false, false, true, true, false, false};
    int s = side, jj = j;
    if (!primary[side]) {
      s = partner[side];
      jj = kCuts - j;  // glued with reversed direction
    }
    const int pair_index = (s / 4) * 2 + (s % 4);  // 0, 1, 2, 3 for sides 0, 1, 4, 5
    return 26 + pair_index * 2 + (jj - 1);
  };
  auto boundary_id = [&](int idx) {
    idx %= kBoundary;
    const int side = idx / kCuts, j = idx % kCuts;
    return j == 0 ? 25 : side_point_class(side, j);
  };

  TriangulatedSurface s;
  auto add = [&](int ia, int ib, int ic, const HPoint& A, const HPoint& B, const HPoint& C) {
    const HTriangle m = measure_triangle(A, B, C);
    s.faces.push_back({{ia, ib, ic}, {m.alpha, m.beta, m.gamma}});
  };
  for (int j = 0; j < kBoundary; ++j) {
    const int jn = (j + 1) % kBoundary;
    const HPoint& Rj = ring[static_cast<std::size_t>(j)];
    const HPoint& Rn = ring[static_cast<std::size_t>(jn)];
    const HPoint& Bj = boundary[static_cast<std::size_t>(j)];
    const HPoint& Bn = boundary[static_cast<std::size_t>(jn)];
    add(0, 1 + j, 1 + jn, O, Rj, Rn);
    add(1 + j, boundary_id(jn), 1 + jn, Rj, Bn, Rn);
    add(1 + j, boundary_id(j), boundary_id(jn), Rj, Bj, Bn);
  }
  s.W = 34;
  s.S = static_cast<int>(s.faces.size());
  s.K = detail::count_edges(s.faces);
  return s;
}

}  // namespace curved::surfaces
