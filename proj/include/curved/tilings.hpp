#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "curved/core.hpp"
#include "curved/hyperbolic.hpp"

// Combinatorial {p, q} tilings: p-gons, q of them around every vertex.
// Generation grows a disk face by face around its boundary; spherical pairs
// close up into a polyhedron.

namespace curved::tilings {

struct TilingGraph {
  int p = 0, q = 0;
  int layers = 0;
  bool closed = false;
  std::vector<std::vector<int>> faces;     // counterclockwise vertex cycles
  std::vector<std::vector<int>> rotation;  // counterclockwise neighbours; a path for frontier vertices
  std::vector<bool> frontier;

  int vertex_count() const { return static_cast<int>(rotation.size()); }
  int face_count() const { return static_cast<int>(faces.size()); }
  int edge_count() const {
    std::size_t twice = 0;
    for (const auto& r : rotation) twice += r.size();
    return static_cast<int>(twice / 2);
  }
  bool adjacent(int a, int b) const {
    const auto& r = rotation.at(static_cast<std::size_t>(a));
    return std::find(r.begin(), r.end(), b) != r.end();
  }
};

inline int curvature_sign(int p, int q) {
  const int k = (p - 2) * (q - 2);
  return k < 4 ? 1 : (k == 4 ? 0 : -1);
}

namespace detail {

class Builder {
 public:
  Builder(int p, int q) : p_(p), q_(q) {
    std::vector<int> f;
    for (int i = 0; i < p; ++i) f.push_back(new_vertex());
    for (int i = 0; i < p; ++i) link(f[static_cast<std::size_t>(i)], f[static_cast<std::size_t>((i + 1) % p)]);
    add_face(f);
    boundary_size_ = p;
    anchor_ = 0;
  }

  bool closed() const { return boundary_size_ == 0; }

  void layer() {
    if (closed()) return;
    std::vector<int> ring;
    int v = anchor_;
    for (int i = 0; i < boundary_size_; ++i) {
      ring.push_back(v);
      v = next_[static_cast<std::size_t>(v)];
    }
    for (int w : ring) {
      while (!closed() && on_boundary_[static_cast<std::size_t>(w)] && nf_[static_cast<std::size_t>(w)] < q_) {
        grow_at(w);
      }
      if (closed()) return;
    }
  }

  TilingGraph finish(int layers) const {
    TilingGraph g;
    g.p = p_;
    g.q = q_;
    g.layers = layers;
    g.closed = closed();
    g.faces = faces_;
    const std::size_t n = nf_.size();
    g.frontier.assign(n, false);
    for (std::size_t i = 0; i < n; ++i) g.frontier[i] = on_boundary_[i];
    // next_ccw[v][w] = u for each face corner u -> v -> w.
    std::vector<std::map<int, int>> next_ccw(n);
    for (const auto& f : faces_) {
      const std::size_t m = f.size();
      for (std::size_t i = 0; i < m; ++i) {
        const int u = f[(i + m - 1) % m], v = f[i], w = f[(i + 1) % m];
        next_ccw[static_cast<std::size_t>(v)][w] = u;
      }
    }
    g.rotation.resize(n);
    for (std::size_t v = 0; v < n; ++v) {
      const auto& nx = next_ccw[v];
      if (nx.empty()) continue;
      int first = nx.begin()->first;
      if (g.frontier[v]) {
        // Start where no face precedes: a neighbour that is never a successor.
        std::map<int, bool> is_succ;
        for (const auto& [from, to] : nx) is_succ[to] = true;
        for (const auto& [from, to] : nx)
          if (!is_succ.count(from)) {
            first = from;
            break;
          }
      }
      std::vector<int>& r = g.rotation[v];
      int cur = first;
      while (true) {
        r.push_back(cur);
        auto it = nx.find(cur);
        if (it == nx.end()) break;
        cur = it->second;
        if (cur == first) break;
      }
    }
    return g;
  }

 private:
  int new_vertex() {
    nf_.push_back(0);
    next_.push_back(-1);
    prev_.push_back(-1);
    on_boundary_.push_back(true);
    return static_cast<int>(nf_.size()) - 1;
  }

  void link(int a, int b) {
    next_[static_cast<std::size_t>(a)] = b;
    prev_[static_cast<std::size_t>(b)] = a;
  }

  void add_face(const std::vector<int>& f) {
    for (int v : f) ++nf_[static_cast<std::size_t>(v)];
    faces_.push_back(f);
  }

  int nf(int v) const { return nf_[static_cast<std::size_t>(v)]; }

  /// Adds the next face in the open wedge at v, sharing every boundary edge
  /// whose endpoint it completes.
  void grow_at(int v) {
    int s = v, e = next_[static_cast<std::size_t>(v)];
    int run = 1;
    while (nf(s) == q_ - 1 && run < boundary_size_) {
      s = prev_[static_cast<std::size_t>(s)];
      ++run;
    }
    while (nf(e) == q_ - 1 && run < boundary_size_) {
      e = next_[static_cast<std::size_t>(e)];
      ++run;
    }
    if (run == boundary_size_ && s == e) {
      if (boundary_size_ != p_) throw NumericFailure("tiling: boundary cannot be closed by a single face");
      std::vector<int> f;
      int w = s;
      for (int i = 0; i < boundary_size_; ++i) {
        f.push_back(w);
        w = prev_[static_cast<std::size_t>(w)];
      }
      add_face(f);
      for (int x : f) on_boundary_[static_cast<std::size_t>(x)] = false;
      boundary_size_ = 0;
      return;
    }
    const int k = p_ - run - 1;
    if (k < 0) throw NumericFailure("tiling: face would need more sides than p");
    std::vector<int> f;
    for (int w = e;; w = prev_[static_cast<std::size_t>(w)]) {
      f.push_back(w);
      if (w == s) break;
    }
    for (int w = next_[static_cast<std::size_t>(s)]; w != e; w = next_[static_cast<std::size_t>(w)]) {
      on_boundary_[static_cast<std::size_t>(w)] = false;
      if (w == anchor_) anchor_ = e;
    }
    int last = s;
    for (int i = 0; i < k; ++i) {
      const int n = new_vertex();
      f.push_back(n);
      link(last, n);
      last = n;
    }
    link(last, e);
    add_face(f);
    boundary_size_ += k + 1 - run;
    if (k == 0 && next_[static_cast<std::size_t>(e)] == s && boundary_size_ == 2) {
      throw NumericFailure("tiling: closing produced a digon");
    }
  }

  int p_, q_;
  int boundary_size_ = 0;
  int anchor_ = 0;
  std::vector<int> nf_, next_, prev_;
  std::vector<bool> on_boundary_;
  std::vector<std::vector<int>> faces_;
};

}  // namespace detail

/// Grows the tiling by `radius` layers around an initial face; each layer
/// completes every vertex on the boundary at the start of the layer.
inline TilingGraph build_tiling(int p, int q, int radius) {
  if (p < 3 || q < 3) throw DomainError("build_tiling: need p >= 3 and q >= 3");
  if (radius < 0) throw DomainError("build_tiling: radius must be non-negative");
  if (radius > 64) throw DomainError("build_tiling: radius too large");
  detail::Builder b(p, q);
  int done = 0;
  while (done < radius && !b.closed()) {
    b.layer();
    ++done;
  }
  return b.finish(done);
}

/// Generates until the complex closes; only for spherical pairs.
inline TilingGraph closed_tiling(int p, int q) {
  if (curvature_sign(p, q) <= 0) {
    throw DomainError("closed_tiling: {" + std::to_string(p) + "," + std::to_string(q) + "} does not close");
  }
  TilingGraph g = build_tiling(p, q, 64);
  if (!g.closed) throw NumericFailure("closed_tiling: generation did not close");
  return g;
}

struct PlatonicCounts {
  int W = 0, K = 0, S = 0, chi = 0;
};

inline PlatonicCounts platonic_counts(int p, int q) {
  const TilingGraph g = closed_tiling(p, q);
  PlatonicCounts c{g.vertex_count(), g.edge_count(), g.face_count(), 0};
  c.chi = c.W - c.K + c.S;
  return c;
}

/// Number of vertices at graph distance exactly n from vertex 0, n = 0..N.
inline std::vector<std::int64_t> growth_counts(const TilingGraph& g, int N) {
  if (N < 0) throw DomainError("growth_counts: N must be non-negative");
  std::vector<int> dist(static_cast<std::size_t>(g.vertex_count()), -1);
  std::deque<int> queue{0};
  dist[0] = 0;
  while (!queue.empty()) {
    const int v = queue.front();
    queue.pop_front();
    if (dist[static_cast<std::size_t>(v)] >= N) continue;
    for (int w : g.rotation[static_cast<std::size_t>(v)]) {
      if (dist[static_cast<std::size_t>(w)] < 0) {
        dist[static_cast<std::size_t>(w)] = dist[static_cast<std::size_t>(v)] + 1;
        queue.push_back(w);
      }
    }
  }
  std::vector<std::int64_t> counts(static_cast<std::size_t>(N) + 1, 0);
  for (std::size_t v = 0; v < dist.size(); ++v) {
    if (dist[v] < 0) continue;
    if (g.frontier[v]) {
      throw DomainError("growth_counts: frontier reached at distance " + std::to_string(dist[v]) +
                        "; generate more layers");
    }
    ++counts[static_cast<std::size_t>(dist[v])];
  }
  return counts;
}

/// Walks from the directed edge start -> next. At each vertex the walker
/// leaves by the street `choice` positions counterclockwise from the street it
/// arrived on. Returns the final vertex (next itself for an empty word).
inline int replay_word(const TilingGraph& g, int start, int next, const std::vector<int>& word) {
  const int n = g.vertex_count();
  if (start < 0 || start >= n || next < 0 || next >= n || !g.adjacent(start, next)) {
    throw DomainError("replay_word: start edge is not an edge of the tiling");
  }
  int u = start, v = next;
  for (std::size_t i = 0; i < word.size(); ++i) {
    const int c = word[i];
    if (c < 1 || c > g.q - 1) throw DomainError("replay_word: choice at step " + std::to_string(i + 1) + " out of range");
    if (g.frontier[static_cast<std::size_t>(v)]) {
      throw DomainError("replay_word: step " + std::to_string(i + 1) + " reaches the generated frontier");
    }
    const auto& r = g.rotation[static_cast<std::size_t>(v)];
    const auto idx = static_cast<std::size_t>(std::find(r.begin(), r.end(), u) - r.begin());
    const int w = r[(idx + static_cast<std::size_t>(c)) % r.size()];
    u = v;
    v = w;
  }
  return v;
}

/// Parses a word such as "2 2 4" or "224".
inline std::vector<int> parse_word(const std::string& text) {
  std::vector<int> w;
  for (char ch : text) {
    if (ch >= '0' && ch <= '9') {
      w.push_back(ch - '0');
    } else if (ch != ' ' && ch != ',' && ch != '\t') {
      throw DomainError(std::string("parse_word: unexpected character '") + ch + "'");
    }
  }
  return w;
}

/// Number of faces inside a simple closed walk given as a vertex cycle (the
/// first vertex may be repeated at the end). The inside is the side that does
/// not reach the generated frontier; on closed complexes it is the side to
/// the left of the walk.
inline int enclosed_faces(const TilingGraph& g, std::vector<int> loop) {
  if (loop.size() >= 2 && loop.front() == loop.back()) loop.pop_back();
  if (loop.size() < 3) throw DomainError("enclosed_faces: a closed walk needs at least three vertices");
  {
    std::vector<int> sorted = loop;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      throw DomainError("enclosed_faces: walk visits a vertex twice (self-crossing)");
    }
  }
  const std::size_t m = loop.size();
  for (std::size_t i = 0; i < m; ++i) {
    const int a = loop[i], b = loop[(i + 1) % m];
    if (a < 0 || a >= g.vertex_count() || b < 0 || b >= g.vertex_count() || !g.adjacent(a, b)) {
      throw DomainError("enclosed_faces: consecutive vertices are not adjacent (walk not closed)");
    }
  }
  std::map<std::pair<int, int>, int> dart_face;
  for (std::size_t f = 0; f < g.faces.size(); ++f) {
    const auto& c = g.faces[f];
    for (std::size_t i = 0; i < c.size(); ++i) dart_face[{c[i], c[(i + 1) % c.size()]}] = static_cast<int>(f);
  }
  std::map<std::pair<int, int>, bool> cut;
  for (std::size_t i = 0; i < m; ++i) {
    const int a = loop[i], b = loop[(i + 1) % m];
    cut[{std::min(a, b), std::max(a, b)}] = true;
  }
  auto flood = [&](bool left, int& count) {
    std::vector<bool> seen(g.faces.size(), false);
    std::deque<int> queue;
    for (std::size_t i = 0; i < m; ++i) {
      const int a = loop[i], b = loop[(i + 1) % m];
      auto it = dart_face.find(left ? std::pair{a, b} : std::pair{b, a});
      if (it == dart_face.end()) return false;  // the walk runs along the frontier
      if (!seen[static_cast<std::size_t>(it->second)]) {
        seen[static_cast<std::size_t>(it->second)] = true;
        queue.push_back(it->second);
      }
    }
    count = 0;
    while (!queue.empty()) {
      const int f = queue.front();
      queue.pop_front();
      ++count;
      const auto& c = g.faces[static_cast<std::size_t>(f)];
      for (std::size_t i = 0; i < c.size(); ++i) {
        const int a = c[i], b = c[(i + 1) % c.size()];
        if (cut.count({std::min(a, b), std::max(a, b)})) continue;
        auto it = dart_face.find({b, a});
        if (it == dart_face.end()) return false;  // reached the frontier
        if (!seen[static_cast<std::size_t>(it->second)]) {
          seen[static_cast<std::size_t>(it->second)] = true;
          queue.push_back(it->second);
        }
      }
    }
    return true;
  };
  int count = 0;
  if (flood(true, count)) return count;
  if (!g.closed && flood(false, count)) return count;
  throw DomainError("enclosed_faces: walk does not enclose a region inside the generated tiling");
}

/// Adjacency text: "v <id> : <neighbours>" lines, then "f <id> : <vertices>".
inline std::string export_text(const TilingGraph& g) {
  std::ostringstream os;
  os << "tiling " << g.p << ' ' << g.q << " layers " << g.layers << (g.closed ? " closed" : " open") << '\n';
  for (std::size_t v = 0; v < g.rotation.size(); ++v) {
    os << "v " << v << " :";
    for (int w : g.rotation[v]) os << ' ' << w;
    if (g.frontier[v]) os << " frontier";
    os << '\n';
  }
  for (std::size_t f = 0; f < g.faces.size(); ++f) {
    os << "f " << f << " :";
    for (int w : g.faces[f]) os << ' ' << w;
    os << '\n';
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Geometric realization

enum class Geometry { Spherical, Euclidean, Hyperbolic };

inline Geometry geometry_of(int p, int q) {
  const int s = curvature_sign(p, q);
  return s > 0 ? Geometry::Spherical : (s == 0 ? Geometry::Euclidean : Geometry::Hyperbolic);
}

namespace detail {

inline Vector3 half_turn(Geometry geo, const Vector3& m, const Vector3& x) {
  switch (geo) {
    case Geometry::Euclidean: return m * 2.0 - x;
    case Geometry::Spherical: return m * (2.0 * dot(m, x)) - x;
    case Geometry::Hyperbolic: return -x - m * (2.0 * hyperbolic::linner(m, x));
  }
  return x;
}

inline Vector3 midpoint(Geometry geo, const Vector3& a, const Vector3& b) {
  switch (geo) {
    case Geometry::Euclidean: return (a + b) * 0.5;
    case Geometry::Spherical: return normalize(a + b);
    case Geometry::Hyperbolic: return normalize(hyperbolic::kForm, a + b, -1);
  }
  return a;
}

}  // namespace detail

/// Vertex positions of a regular realization: the plane z = 0, the unit
/// sphere, or the hyperboloid. Face 0 is centred at (0,0,0), (0,0,-1) or
/// (0,0,1) respectively; the rest follow by half-turns about edge midpoints.
inline std::vector<Vector3> embed(const TilingGraph& g) {
  const Geometry geo = geometry_of(g.p, g.q);
  const double cp = 1.0 / std::tan(kPi / g.p), cq = 1.0 / std::tan(kPi / g.q);
  std::vector<Vector3> first(static_cast<std::size_t>(g.p));
  for (int k = 0; k < g.p; ++k) {
    const double phi = kTwoPi * k / g.p;
    Vector3 x;
    switch (geo) {
      case Geometry::Euclidean: x = {std::cos(phi), std::sin(phi), 0}; break;
      case Geometry::Spherical: {
        const double R = std::acos(cp * cq);
        x = {std::sin(R) * std::cos(phi), std::sin(R) * std::sin(phi), -std::cos(R)};
        break;
      }
      case Geometry::Hyperbolic: x = hyperbolic::HPoint::polar(std::acosh(cp * cq), phi).coords; break;
    }
    first[static_cast<std::size_t>(k)] = x;
  }

  std::map<std::pair<int, int>, int> dart_face;
  for (std::size_t f = 0; f < g.faces.size(); ++f) {
    const auto& c = g.faces[f];
    for (std::size_t i = 0; i < c.size(); ++i) dart_face[{c[i], c[(i + 1) % c.size()]}] = static_cast<int>(f);
  }
  std::vector<std::vector<Vector3>> placed(g.faces.size());
  placed[0] = first;
  std::deque<int> queue{0};
  while (!queue.empty()) {
    const int f = queue.front();
    queue.pop_front();
    const auto& cf = g.faces[static_cast<std::size_t>(f)];
    const auto& pf = placed[static_cast<std::size_t>(f)];
    const std::size_t n = cf.size();
    for (std::size_t i = 0; i < n; ++i) {
      const int a = cf[i], b = cf[(i + 1) % n];
      auto it = dart_face.find({b, a});
      if (it == dart_face.end() || !placed[static_cast<std::size_t>(it->second)].empty()) continue;
      const int h = it->second;
      const auto& ch = g.faces[static_cast<std::size_t>(h)];
      const Vector3 m = detail::midpoint(geo, pf[i], pf[(i + 1) % n]);
      const std::size_t start = static_cast<std::size_t>(std::find(ch.begin(), ch.end(), b) - ch.begin());
      std::vector<Vector3> ph(ch.size());
      for (std::size_t k = 0; k < n; ++k) {
        // the half-turn sends cf[i + k] to ch[start + k]
        ph[(start + k) % ch.size()] = detail::half_turn(geo, m, pf[(i + k) % n]);
      }
      placed[static_cast<std::size_t>(h)] = std::move(ph);
      queue.push_back(h);
    }
  }
  std::vector<Vector3> pos(static_cast<std::size_t>(g.vertex_count()));
  std::vector<bool> set(pos.size(), false);
  for (std::size_t f = 0; f < g.faces.size(); ++f)
    for (std::size_t k = 0; k < g.faces[f].size(); ++k) {
      const auto v = static_cast<std::size_t>(g.faces[f][k]);
      if (!set[v] && !placed[f].empty()) {
        pos[v] = placed[f][k];
        set[v] = true;
      }
    }
  return pos;
}

}  // namespace curved::tilings
