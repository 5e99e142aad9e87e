#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "curved/core.hpp"
#include "curved/random.hpp"

// Intrinsic geometry on a coordinate chart (u, v) with a Riemannian metric
// g = [[g11, g12], [g12, g22]]. Everything downstream (geodesics, transport,
// polygons, curvature) is computed from the metric alone.

namespace curved::charts {

struct Metric {
  double g11 = 1, g12 = 0, g22 = 1;

  double det() const { return g11 * g22 - g12 * g12; }
  double operator()(const Vec2& a, const Vec2& b) const {
    return g11 * a.x * b.x + g12 * (a.x * b.y + a.y * b.x) + g22 * a.y * b.y;
  }
};

/// Partial derivatives of the metric components along u and v.
struct MetricGradient {
  Metric du{0, 0, 0};
  Metric dv{0, 0, 0};
};

using MetricFn = std::function<Metric(const Vec2&)>;
using MetricGradientFn = std::function<MetricGradient(const Vec2&)>;
using EmbeddingFn = std::function<Vector3(const Vec2&)>;

/// Christoffel symbols gamma[i][j][k] = Gamma^i_{jk}.
using Christoffel = std::array<std::array<std::array<double, 2>, 2>, 2>;

struct Domain {
  double u_min = -1, u_max = 1, v_min = -1, v_max = 1;
  bool periodic_u = false;
  bool periodic_v = false;

  double min_extent() const { return std::min(u_max - u_min, v_max - v_min); }

  Vec2 wrap(const Vec2& p) const {
    Vec2 q = p;
    if (periodic_u) q.x = u_min + std::fmod(std::fmod(q.x - u_min, u_max - u_min) + (u_max - u_min), u_max - u_min);
    if (periodic_v) q.y = v_min + std::fmod(std::fmod(q.y - v_min, v_max - v_min) + (v_max - v_min), v_max - v_min);
    return q;
  }

  bool contains(const Vec2& p) const {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) return false;
    const Vec2 q = wrap(p);
    return q.x >= u_min && q.x <= u_max && q.y >= v_min && q.y <= v_max;
  }
};

struct TangentVector {
  Vec2 base;
  Vec2 components;
};

/// One sample of a parameterized curve: position and coordinate velocity.
struct CurvePoint {
  double t = 0;
  Vec2 x;
  Vec2 dx;
};

struct GeodesicTrace {
  std::vector<CurvePoint> points;
  bool truncated = false;

  const CurvePoint& front() const { return points.front(); }
  const CurvePoint& back() const { return points.back(); }
  double length() const { return points.empty() ? 0.0 : points.back().t - points.front().t; }
};

class Chart {
 public:
  Chart(std::string name, Domain domain, MetricFn metric, MetricGradientFn gradient = {},
        EmbeddingFn embedding = {})
      : name_(std::move(name)),
        domain_(domain),
        metric_(std::move(metric)),
        gradient_(std::move(gradient)),
        embedding_(std::move(embedding)) {
    if (!(domain_.u_max > domain_.u_min && domain_.v_max > domain_.v_min)) {
      throw DomainError("Chart " + name_ + ": empty domain");
    }
    fd_step_ = 1e-5 * std::min(1.0, domain_.min_extent());
    validate();
  }

  const std::string& name() const { return name_; }
  const Domain& domain() const { return domain_; }
  bool has_analytic_gradient() const { return static_cast<bool>(gradient_); }
  bool has_embedding() const { return static_cast<bool>(embedding_); }
  double fd_step() const { return fd_step_; }

  Metric metric(const Vec2& p) const { return metric_(p); }

  Vector3 embed(const Vec2& p) const {
    if (!embedding_) throw DomainError("Chart " + name_ + " has no embedding");
    return embedding_(p);
  }

  MetricGradient gradient(const Vec2& p) const { return gradient_ ? gradient_(p) : fd_gradient(p); }

  /// Central differences of the metric components.
  MetricGradient fd_gradient(const Vec2& p) const {
    const double h = fd_step_;
    const Metric up = metric_({p.x + h, p.y}), um = metric_({p.x - h, p.y});
    const Metric vp = metric_({p.x, p.y + h}), vm = metric_({p.x, p.y - h});
    const double s = 0.5 / h;
    return {{(up.g11 - um.g11) * s, (up.g12 - um.g12) * s, (up.g22 - um.g22) * s},
            {(vp.g11 - vm.g11) * s, (vp.g12 - vm.g12) * s, (vp.g22 - vm.g22) * s}};
  }

  Christoffel christoffel(const Vec2& p) const { return christoffel_from(metric_(p), gradient(p)); }
  Christoffel fd_christoffel(const Vec2& p) const { return christoffel_from(metric_(p), fd_gradient(p)); }

  static Christoffel christoffel_from(const Metric& g, const MetricGradient& dg) {
    const double det = g.det();
    if (!(det > 0.0) || !(g.g11 > 0.0)) throw DomainError("christoffel: metric is not positive definite");
    const double inv[2][2] = {{g.g22 / det, -g.g12 / det}, {-g.g12 / det, g.g11 / det}};
    // d[a][l][m] = partial_a g_lm
    double d[2][2][2];
    d[0][0][0] = dg.du.g11;
    d[0][0][1] = d[0][1][0] = dg.du.g12;
    d[0][1][1] = dg.du.g22;
    d[1][0][0] = dg.dv.g11;
    d[1][0][1] = d[1][1][0] = dg.dv.g12;
    d[1][1][1] = dg.dv.g22;
    Christoffel gamma{};
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        for (int k = 0; k < 2; ++k) {
          double s = 0.0;
          for (int l = 0; l < 2; ++l) s += inv[i][l] * (d[j][l][k] + d[k][l][j] - d[l][j][k]);
          gamma[i][j][k] = 0.5 * s;
        }
    return gamma;
  }

  double inner(const Vec2& p, const Vec2& a, const Vec2& b) const { return metric_(p)(a, b); }
  double norm(const Vec2& p, const Vec2& a) const { return std::sqrt(inner(p, a, a)); }

  Vec2 unit(const Vec2& p, const Vec2& a) const {
    const double n = norm(p, a);
    if (!(n > 0.0)) throw DegenerateInput("Chart::unit: zero vector");
    return a * (1.0 / n);
  }

  /// Rotation of a by +pi/2 in the metric (counterclockwise in chart orientation).
  Vec2 perp(const Vec2& p, const Vec2& a) const {
    const Metric g = metric_(p);
    const double s = 1.0 / std::sqrt(g.det());
    return {-(g.g12 * a.x + g.g22 * a.y) * s, (g.g11 * a.x + g.g12 * a.y) * s};
  }

  /// Rotation of a by angle theta in the metric.
  Vec2 rotate(const Vec2& p, const Vec2& a, double theta) const {
    return a * std::cos(theta) + perp(p, a) * std::sin(theta);
  }

  /// Signed angle from a to b, in (-pi, pi].
  double signed_angle(const Vec2& p, const Vec2& a, const Vec2& b) const {
    const Metric g = metric_(p);
    return std::atan2(std::sqrt(g.det()) * cross(a, b), g(a, b));
  }

  bool contains(const Vec2& p) const { return domain_.contains(p); }

 private:
  void validate() const {
    constexpr int kGrid = 9;
    double worst = 0.0;
    for (int i = 0; i < kGrid; ++i)
      for (int j = 0; j < kGrid; ++j) {
        const Vec2 p{domain_.u_min + (domain_.u_max - domain_.u_min) * i / (kGrid - 1),
                     domain_.v_min + (domain_.v_max - domain_.v_min) * j / (kGrid - 1)};
        const Metric g = metric_(p);
        if (!(g.g11 > 0.0 && g.det() > 0.0)) {
          throw DomainError("Chart " + name_ + ": metric is not positive definite on its domain");
        }
        if (gradient_ && i > 0 && j > 0 && i < kGrid - 1 && j < kGrid - 1) {
          const MetricGradient a = gradient_(p), f = fd_gradient(p);
          const double scale = std::max({1.0, std::abs(g.g11), std::abs(g.g22)});
          for (auto [x, y] : {std::pair{a.du.g11, f.du.g11}, {a.du.g12, f.du.g12}, {a.du.g22, f.du.g22},
                              {a.dv.g11, f.dv.g11}, {a.dv.g12, f.dv.g12}, {a.dv.g22, f.dv.g22}}) {
            worst = std::max(worst, std::abs(x - y) / scale);
          }
        }
      }
    if (worst > 1e-6) {
      throw NumericFailure("Chart " + name_ + ": analytic metric derivatives disagree with finite differences");
    }
  }

  std::string name_;
  Domain domain_;
  MetricFn metric_;
  MetricGradientFn gradient_;
  EmbeddingFn embedding_;
  double fd_step_ = 1e-5;
};

// ---------------------------------------------------------------------------
// Geodesics

namespace detail {

struct State {
  Vec2 x, dx;
};

inline State geodesic_rhs(const Chart& chart, const State& s) {
  const Christoffel G = chart.christoffel(s.x);
  const double w[2] = {s.dx.x, s.dx.y};
  double acc[2];
  for (int i = 0; i < 2; ++i) {
    double a = 0.0;
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k) a += G[i][j][k] * w[j] * w[k];
    acc[i] = -a;
  }
  return {s.dx, {acc[0], acc[1]}};
}

inline State rk4_step(const Chart& chart, const State& s, double h) {
  auto add = [](const State& a, const State& k, double f) { return State{a.x + k.x * f, a.dx + k.dx * f}; };
  const State k1 = geodesic_rhs(chart, s);
  const State k2 = geodesic_rhs(chart, add(s, k1, h / 2));
  const State k3 = geodesic_rhs(chart, add(s, k2, h / 2));
  const State k4 = geodesic_rhs(chart, add(s, k3, h));
  return {s.x + (k1.x + k2.x * 2.0 + k3.x * 2.0 + k4.x) * (h / 6), s.dx + (k1.dx + k2.dx * 2.0 + k3.dx * 2.0 + k4.dx) * (h / 6)};
}

inline bool usable(const Chart& chart, const State& s) {
  return chart.contains(s.x) && std::isfinite(s.dx.x) && std::isfinite(s.dx.y);
}

/// Integrates the geodesic ODE from (x, dx) over parameter span T in n steps.
inline GeodesicTrace integrate(const Chart& chart, const Vec2& x0, const Vec2& v0, double T, int n) {
  GeodesicTrace trace;
  trace.points.reserve(static_cast<std::size_t>(n) + 1);
  State s{x0, v0};
  trace.points.push_back({0.0, x0, v0});
  const double h = T / n;
  for (int i = 1; i <= n; ++i) {
    const State next = rk4_step(chart, s, h);
    if (!usable(chart, next)) {
      trace.truncated = true;
      break;
    }
    s = next;
    trace.points.push_back({i == n ? T : h * i, s.x, s.dx});
  }
  return trace;
}

}  // namespace detail

inline constexpr double kUnitSpeedTolerance = 1e-9;

/// Unit-speed geodesic from start over the given arclength. step <= 0 selects
/// length / 1000. Leaving the chart domain truncates the trace.
inline GeodesicTrace integrate_geodesic(const Chart& chart, const TangentVector& start, double length,
                                        double step = 0.0) {
  if (!chart.contains(start.base)) throw DomainError("integrate_geodesic: start point outside the chart domain");
  if (!(length >= 0.0) || !std::isfinite(length)) throw DomainError("integrate_geodesic: length must be non-negative");
  if (std::abs(chart.norm(start.base, start.components) - 1.0) > kUnitSpeedTolerance) {
    throw DomainError("integrate_geodesic: start vector is not unit speed");
  }
  if (length == 0.0) return {{{0.0, start.base, start.components}}, false};
  if (step < 0.0) throw DomainError("integrate_geodesic: step must be positive");
  if (step == 0.0) step = length / 1000.0;
  const int n = std::max(1, static_cast<int>(std::ceil(length / step - 1e-9)));
  return detail::integrate(chart, start.base, start.components, length, n);
}

/// Walks distance s from p along the geodesic with unit initial direction dir.
inline Vec2 exp_map(const Chart& chart, const Vec2& p, const Vec2& unit_dir, double s, int steps = 200) {
  if (s == 0.0) return p;
  const double sign = s < 0 ? -1.0 : 1.0;
  const GeodesicTrace tr = integrate_geodesic(chart, {p, unit_dir * sign}, std::abs(s), std::abs(s) / steps);
  if (tr.truncated) throw DomainError("exp_map: geodesic leaves the chart domain");
  return tr.back().x;
}

/// Geodesic joining p and q, found by Newton shooting on the initial velocity
/// over a unit affine parameter, then expressed by arclength.
inline GeodesicTrace geodesic_between(const Chart& chart, const Vec2& p, const Vec2& q, int steps = 1000) {
  if (!chart.contains(p) || !chart.contains(q)) throw DomainError("geodesic_between: endpoint outside the domain");
  const Vec2 gap = q - p;
  if (norm(gap) < 1e-14) throw DegenerateInput("geodesic_between: endpoints coincide");

  auto shoot = [&](const Vec2& V, Vec2& end) {
    const GeodesicTrace tr = detail::integrate(chart, p, V, 1.0, steps);
    if (tr.truncated) return false;
    end = tr.back().x - q;
    return true;
  };

  const double tol = 1e-13 * (1.0 + norm(q));
  Vec2 V = gap;
  Vec2 F;
  if (!shoot(V, F)) throw NumericFailure("geodesic_between: initial shot leaves the domain");
  double best = norm(F);
  for (int iter = 0; iter < 60 && best > tol; ++iter) {
    const double delta = 1e-7 * std::max(norm(V), 1e-6);
    Vec2 Fu, Fv;
    if (!shoot(V + Vec2{delta, 0}, Fu) || !shoot(V + Vec2{0, delta}, Fv)) {
      throw NumericFailure("geodesic_between: Jacobian probe leaves the domain");
    }
    const double j11 = (Fu.x - F.x) / delta, j21 = (Fu.y - F.y) / delta;
    const double j12 = (Fv.x - F.x) / delta, j22 = (Fv.y - F.y) / delta;
    const double det = j11 * j22 - j12 * j21;
    if (!(std::abs(det) > 0.0)) throw NumericFailure("geodesic_between: singular shooting Jacobian");
    const Vec2 dV{(j22 * F.x - j12 * F.y) / det, (-j21 * F.x + j11 * F.y) / det};
    double lambda = 1.0;
    bool improved = false;
    for (int halving = 0; halving < 30; ++halving, lambda *= 0.5) {
      const Vec2 trial = V - dV * lambda;
      Vec2 Ft;
      if (shoot(trial, Ft) && norm(Ft) < best) {
        V = trial;
        F = Ft;
        best = norm(Ft);
        improved = true;
        break;
      }
    }
    if (!improved) break;
  }
  if (best > 1e-10 * (1.0 + norm(q))) throw NumericFailure("geodesic_between: shooting did not converge");

  GeodesicTrace affine = detail::integrate(chart, p, V, 1.0, steps);
  const double L = chart.norm(p, V);
  for (CurvePoint& pt : affine.points) {
    pt.t *= L;
    pt.dx = pt.dx * (1.0 / L);
  }
  return affine;
}

// ---------------------------------------------------------------------------
// Parallel transport

/// Transports w0 along a sampled curve by RK4 on dw/dt + Gamma(xdot, w) = 0,
/// with positions between samples from cubic Hermite interpolation.
inline Vec2 parallel_transport(const Chart& chart, const std::vector<CurvePoint>& path, const Vec2& w0) {
  if (path.empty()) throw DomainError("parallel_transport: empty path");
  auto rhs = [&](const Vec2& x, const Vec2& xd, const Vec2& w) {
    const Christoffel G = chart.christoffel(x);
    const double a[2] = {xd.x, xd.y}, b[2] = {w.x, w.y};
    double out[2];
    for (int i = 0; i < 2; ++i) {
      double s = 0.0;
      for (int j = 0; j < 2; ++j)
        for (int k = 0; k < 2; ++k) s += G[i][j][k] * a[j] * b[k];
      out[i] = -s;
    }
    return Vec2{out[0], out[1]};
  };
  Vec2 w = w0;
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    const CurvePoint& p0 = path[i];
    const CurvePoint& p1 = path[i + 1];
    const double h = p1.t - p0.t;
    const Vec2 xm = (p0.x + p1.x) * 0.5 + (p0.dx - p1.dx) * (h / 8);
    const Vec2 vm = (p1.x - p0.x) * (1.5 / h) - (p0.dx + p1.dx) * 0.25;
    const Vec2 k1 = rhs(p0.x, p0.dx, w);
    const Vec2 k2 = rhs(xm, vm, w + k1 * (h / 2));
    const Vec2 k3 = rhs(xm, vm, w + k2 * (h / 2));
    const Vec2 k4 = rhs(p1.x, p1.dx, w + k3 * h);
    w = w + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6);
  }
  return w;
}

// ---------------------------------------------------------------------------
// Geodesic polygons

struct GeodesicPolygon {
  std::vector<Vec2> vertices;
  std::vector<GeodesicTrace> edges;  // edge i runs from vertex i to vertex i+1
};

/// Joins consecutive vertices (counterclockwise) by geodesics.
inline GeodesicPolygon make_polygon(const Chart& chart, const std::vector<Vec2>& vertices, int steps = 1000) {
  if (vertices.size() < 3) throw DomainError("make_polygon: a polygon needs at least three vertices");
  GeodesicPolygon poly;
  poly.vertices = vertices;
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    poly.edges.push_back(geodesic_between(chart, vertices[i], vertices[(i + 1) % vertices.size()], steps));
  }
  return poly;
}

namespace detail {

inline void check_closed(const GeodesicPolygon& poly) {
  const std::size_t n = poly.edges.size();
  if (n < 3 || poly.vertices.size() != n) throw DomainError("polygon: vertex and edge counts disagree");
  for (std::size_t i = 0; i < n; ++i) {
    if (poly.edges[i].truncated) throw DomainError("polygon: an edge left the chart domain");
    const Vec2 gap = poly.edges[i].back().x - poly.edges[(i + 1) % n].front().x;
    if (norm(gap) > 1e-8) throw DomainError("polygon: consecutive edges do not meet");
  }
}

inline double positive_angle(double a) {
  double r = std::fmod(a, kTwoPi);
  if (r < 0) r += kTwoPi;
  return r;
}

}  // namespace detail

/// Interior angle at each vertex, measured counterclockwise from the outgoing
/// edge to the reversed incoming edge.
inline std::vector<double> interior_angles(const Chart& chart, const GeodesicPolygon& poly) {
  detail::check_closed(poly);
  const std::size_t n = poly.edges.size();
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& in = poly.edges[(i + n - 1) % n].back().dx;
    const Vec2& outgoing = poly.edges[i].front().dx;
    out[i] = detail::positive_angle(chart.signed_angle(poly.vertices[i], outgoing, in * -1.0));
  }
  return out;
}

inline double polygon_defect(const Chart& chart, const GeodesicPolygon& poly) {
  const std::vector<double> angles = interior_angles(chart, poly);
  double s = 0.0;
  for (double a : angles) s += a;
  return s - static_cast<double>(angles.size() - 2) * kPi;
}

/// 2 pi minus the total turning at the vertices (edges are geodesics).
inline double polygon_turning_deficit(const Chart& chart, const GeodesicPolygon& poly) {
  detail::check_closed(poly);
  const std::size_t n = poly.edges.size();
  double turning = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& in = poly.edges[(i + n - 1) % n].back().dx;
    turning += chart.signed_angle(poly.vertices[i], in, poly.edges[i].front().dx);
  }
  return kTwoPi - turning;
}

/// Signed rotation of a vector transported once around the boundary.
inline double holonomy_angle(const Chart& chart, const GeodesicPolygon& poly) {
  detail::check_closed(poly);
  const Vec2 w0 = poly.edges.front().front().dx;
  Vec2 w = w0;
  for (const GeodesicTrace& e : poly.edges) w = parallel_transport(chart, e.points, w);
  return chart.signed_angle(poly.vertices.front(), w0, w);
}

/// Deterministic area of a polygon star-shaped about its vertex centroid:
/// fan quadrature of sqrt(det g) over the sampled boundary.
inline double polygon_area(const Chart& chart, const GeodesicPolygon& poly) {
  static constexpr std::array<double, 8> kNodes = {0.0198550717512319, 0.1016667612931866, 0.2372337950418355,
                                                   0.4082826787521751, 0.5917173212478249, 0.7627662049581645,
                                                   0.8983332387068134, 0.9801449282487681};
  static constexpr std::array<double, 8> kWeights = {0.0506142681451881, 0.1111905172266872, 0.1568533229389436,
                                                     0.1813418916891810, 0.1813418916891810, 0.1568533229389436,
                                                     0.1111905172266872, 0.0506142681451881};
  static constexpr std::array<double, 2> kSNodes = {0.2113248654051871, 0.7886751345948129};
  Vec2 c{0, 0};
  for (const Vec2& v : poly.vertices) c = c + v;
  c = c * (1.0 / static_cast<double>(poly.vertices.size()));
  double total = 0.0;
  for (const GeodesicTrace& e : poly.edges) {
    for (std::size_t k = 0; k + 1 < e.points.size(); ++k) {
      const Vec2 a = e.points[k].x - c, b = e.points[k + 1].x - c;
      const double jac = cross(a, b);
      double s = 0.0;
      for (std::size_t i = 0; i < kNodes.size(); ++i) {
        const double r = kNodes[i];
        for (double t : kSNodes) {
          const Vec2 x = c + (a * (1.0 - t) + b * t) * r;
          s += kWeights[i] * 0.5 * r * std::sqrt(chart.metric(x).det());
        }
      }
      total += s * jac;
    }
  }
  return total;
}

// ---------------------------------------------------------------------------
// Areas

struct Box {
  double u_min, u_max, v_min, v_max;
};

/// Monte Carlo integral of sqrt(det g) over {p in box : inside(p)}.
template <class Predicate>
Estimate area(const Chart& chart, Predicate&& inside, const Box& box, std::uint64_t samples, std::uint64_t seed) {
  if (samples == 0) throw DomainError("area: need at least one sample");
  const Domain& d = chart.domain();
  const double slack = 1e-6 * std::max(d.u_max - d.u_min, d.v_max - d.v_min);
  if (!d.periodic_u && (box.u_min < d.u_min - slack || box.u_max > d.u_max + slack)) {
    throw DomainError("area: sampling box leaves the chart domain");
  }
  if (!d.periodic_v && (box.v_min < d.v_min - slack || box.v_max > d.v_max + slack)) {
    throw DomainError("area: sampling box leaves the chart domain");
  }
  const double box_area = (box.u_max - box.u_min) * (box.v_max - box.v_min);
  Rng rng(seed);
  MeanAccumulator acc;
  std::uint64_t hits = 0;
  for (std::uint64_t i = 0; i < samples; ++i) {
    const Vec2 p{rng.uniform(box.u_min, box.u_max), rng.uniform(box.v_min, box.v_max)};
    double f = 0.0;
    if (inside(p)) {
      ++hits;
      f = std::sqrt(chart.metric(p).det()) * box_area;
    }
    acc.add(f);
  }
  Estimate e;
  e.value = acc.mean();
  e.standard_error = acc.standard_error();
  e.samples = samples;
  e.degenerate = hits == 0;
  return e;
}

/// Even-odd test against the sampled boundary of a polygon.
inline bool inside_polygon(const GeodesicPolygon& poly, const Vec2& p) {
  bool in = false;
  for (const GeodesicTrace& e : poly.edges) {
    for (std::size_t k = 0; k + 1 < e.points.size(); ++k) {
      const Vec2& a = e.points[k].x;
      const Vec2& b = e.points[k + 1].x;
      if ((a.y > p.y) != (b.y > p.y)) {
        const double x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
        if (p.x < x) in = !in;
      }
    }
  }
  return in;
}

inline Estimate area(const Chart& chart, const GeodesicPolygon& poly, std::uint64_t samples, std::uint64_t seed) {
  Box box{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(),
          std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  for (const GeodesicTrace& e : poly.edges)
    for (const CurvePoint& pt : e.points) {
      box.u_min = std::min(box.u_min, pt.x.x);
      box.u_max = std::max(box.u_max, pt.x.x);
      box.v_min = std::min(box.v_min, pt.x.y);
      box.v_max = std::max(box.v_max, pt.x.y);
    }
  return area(chart, [&](const Vec2& p) { return inside_polygon(poly, p); }, box, samples, seed);
}

// ---------------------------------------------------------------------------
// Curvature

/// Orthonormal frame at p: e1 along +u, e2 its counterclockwise perpendicular.
inline std::pair<Vec2, Vec2> frame(const Chart& chart, const Vec2& p) {
  const Vec2 e1 = chart.unit(p, {1, 0});
  return {e1, chart.perp(p, e1)};
}

/// Corners of the small geodesic square of side `scale` centred at p:
/// geodesics of length scale/2 along +-e1, then orthogonal geodesics of
/// length scale/2 on each side. Counterclockwise order.
inline std::vector<Vec2> geodesic_square(const Chart& chart, const Vec2& p, double scale, int steps = 1000) {
  const auto [e1, e2] = frame(chart, p);
  const double h = scale / 2;
  std::vector<Vec2> corners;
  for (double side : {1.0, -1.0}) {
    const GeodesicTrace spine = integrate_geodesic(chart, {p, e1 * side}, h, h / steps);
    if (spine.truncated) throw DomainError("curvature_density: square does not fit in the chart domain");
    const Vec2 foot = spine.back().x;
    const Vec2 t = chart.unit(foot, spine.back().dx * side);  // points along +e1 direction
    const Vec2 n = chart.perp(foot, t);
    for (double up : side > 0 ? std::array{-1.0, 1.0} : std::array{1.0, -1.0}) {
      const GeodesicTrace rib = integrate_geodesic(chart, {foot, n * up}, h, h / steps);
      if (rib.truncated) throw DomainError("curvature_density: square does not fit in the chart domain");
      corners.push_back(rib.back().x);
    }
  }
  return corners;
}

/// Defect over area of a small geodesic square around p.
inline double curvature_density(const Chart& chart, const Vec2& p, double scale, int steps = 1000) {
  if (!(scale > 0.0)) throw DomainError("curvature_density: scale must be positive");
  if (!chart.contains(p)) throw DomainError("curvature_density: point outside the chart domain");
  GeodesicPolygon poly;
  try {
    poly = make_polygon(chart, geodesic_square(chart, p, scale, steps), steps);
  } catch (const NumericFailure&) {
    throw DomainError("curvature_density: geodesic square could not be closed inside the domain");
  }
  const double a = polygon_area(chart, poly);
  if (!(a > 0.0)) throw NumericFailure("curvature_density: polygon area is not positive");
  return polygon_turning_deficit(chart, poly) / a;
}

// ---------------------------------------------------------------------------
// Two-feet curvature meter

/// Endpoint of the geodesic leaving the walk point orthogonally to its left
/// (negative distance: to the right).
inline Vec2 offset_point(const Chart& chart, const CurvePoint& walk_point, double distance) {
  const Vec2 t = chart.unit(walk_point.x, walk_point.dx);
  return exp_map(chart, walk_point.x, chart.perp(walk_point.x, t), distance, 100);
}

inline double polyline_length(const Chart& chart, const std::vector<Vec2>& pts) {
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const Vec2 mid = (pts[i] + pts[i + 1]) * 0.5;
    s += chart.norm(mid, pts[i + 1] - pts[i]);
  }
  return s;
}

struct FeetReading {
  double left_length = 0;
  double right_length = 0;
  double radius = 0;  // positive for a left turn, infinite for a geodesic
};

/// Radius of curvature from the lengths l, p walked by feet d apart:
/// R = l d / (l - p), returned with magnitude |l d / (l - p)| and the sign of
/// the turn (left positive).
inline FeetReading feet_radius(const Chart& chart, const std::vector<CurvePoint>& walk, double d) {
  if (!(d > 0.0)) throw DomainError("feet_radius: foot separation must be positive");
  if (walk.size() < 2) throw DomainError("feet_radius: walk needs at least two samples");
  std::vector<Vec2> left, right;
  left.reserve(walk.size());
  right.reserve(walk.size());
  for (const CurvePoint& p : walk) {
    left.push_back(offset_point(chart, p, d / 2));
    right.push_back(offset_point(chart, p, -d / 2));
  }
  FeetReading r;
  r.left_length = polyline_length(chart, left);
  r.right_length = polyline_length(chart, right);
  const double diff = r.left_length - r.right_length;
  if (std::abs(diff) <= 1e-12 * (r.left_length + r.right_length)) {
    r.radius = std::numeric_limits<double>::infinity();
  } else {
    r.radius = r.left_length * d / -diff;
  }
  return r;
}

/// Samples a coordinate curve with its central-difference velocity.
template <class Curve>
std::vector<CurvePoint> sample_curve(Curve&& curve, double t0, double t1, int n) {
  if (n < 2) throw DomainError("sample_curve: need at least two samples");
  std::vector<CurvePoint> out;
  out.reserve(static_cast<std::size_t>(n));
  const double eps = 1e-6 * (t1 - t0);
  for (int i = 0; i < n; ++i) {
    const double t = t0 + (t1 - t0) * i / (n - 1);
    const Vec2 x = curve(t);
    const Vec2 dx = (curve(t + eps) - curve(t - eps)) * (0.5 / eps);
    out.push_back({t, x, dx});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Map distortion on a sphere of radius R

struct MapDistortion {
  double size = 0;
  double max_angle_error = 0;      // top corner angle minus pi/2
  double side_mismatch_ratio = 0;  // |top - base| / base
};

/// Quadrilateral with a base of length `size` on the equator, two meridian
/// sides of length `size` and a great-circle top side.
inline MapDistortion map_distortion_report(double R, double size) {
  if (!(R > 0.0)) throw DomainError("map_distortion_report: radius must be positive");
  if (!(size > 0.0 && size < kPi * R)) throw DomainError("map_distortion_report: size must lie in (0, pi R)");
  const double s = size / R;
  auto at = [](double lat, double lon) {
    return Vector3{std::cos(lat) * std::cos(lon), std::cos(lat) * std::sin(lon), std::sin(lat)};
  };
  const Vector3 base_l = at(0, 0), base_r = at(0, s), top_l = at(s, 0), top_r = at(s, s);
  // atan2 keeps the angles accurate when the quadrilateral is tiny
  auto angle = [](const Vector3& u, const Vector3& v) { return std::atan2(norm(cross(u, v)), dot(u, v)); };
  const double base = angle(base_l, base_r) * R;
  const double top = angle(top_l, top_r) * R;
  auto tangent = [](const Vector3& p, const Vector3& q) { return normalize(q - p * dot(p, q)); };
  const double corner = angle(tangent(top_r, top_l), tangent(top_r, base_r));
  return {size, corner - kPi / 2, std::abs(top - base) / base};
}

// ---------------------------------------------------------------------------
// Chart catalog

inline Chart plane(double half_extent = 100.0) {
  return Chart("plane", {-half_extent, half_extent, -half_extent, half_extent},
               [](const Vec2&) { return Metric{1, 0, 1}; }, [](const Vec2&) { return MetricGradient{}; },
               [](const Vec2& p) { return Vector3{p.x, p.y, 0}; });
}

/// (phi, z) on a cylinder of radius rho.
inline Chart cylinder(double rho = 1.0) {
  if (!(rho > 0.0)) throw DomainError("cylinder: radius must be positive");
  return Chart("cylinder", {-4 * kPi, 4 * kPi, -100, 100}, [rho](const Vec2&) { return Metric{rho * rho, 0, 1}; },
               [](const Vec2&) { return MetricGradient{}; },
               [rho](const Vec2& p) { return Vector3{rho * std::cos(p.x), rho * std::sin(p.x), p.y}; });
}

/// Cone in polar coordinates (r, phi) with ds^2 = dr^2 + k^2 r^2 dphi^2; the
/// angle deficit at the excluded apex is 2 pi (1 - k).
inline Chart cone(double k = 0.5) {
  if (!(k > 0.0 && k <= 1.0)) throw DomainError("cone: k must lie in (0, 1]");
  return Chart(
      "cone", {0.01, 100, -4 * kPi, 4 * kPi}, [k](const Vec2& p) { return Metric{1, 0, k * k * p.x * p.x}; },
      [k](const Vec2& p) { return MetricGradient{{0, 0, 2 * k * k * p.x}, {0, 0, 0}}; },
      [k](const Vec2& p) {
        const double h = std::sqrt(1 - k * k);
        return Vector3{k * p.x * std::cos(p.y), k * p.x * std::sin(p.y), -h * p.x};
      });
}

/// The unit square with opposite sides identified.
inline Chart flat_torus() {
  Domain d{0, 1, 0, 1, true, true};
  return Chart("flat-torus", d, [](const Vec2&) { return Metric{1, 0, 1}; },
               [](const Vec2&) { return MetricGradient{}; });
}

/// Colatitude theta and longitude phi on a sphere of radius R.
inline Chart sphere(double R = 1.0) {
  if (!(R > 0.0)) throw DomainError("sphere: radius must be positive");
  const double eps = 1e-3;
  return Chart(
      "sphere", {eps, kPi - eps, -4 * kPi, 4 * kPi},
      [R](const Vec2& p) {
        const double s = std::sin(p.x);
        return Metric{R * R, 0, R * R * s * s};
      },
      [R](const Vec2& p) { return MetricGradient{{0, 0, R * R * std::sin(2 * p.x)}, {0, 0, 0}}; },
      [R](const Vec2& p) {
        return Vector3{R * std::sin(p.x) * std::cos(p.y), R * std::sin(p.x) * std::sin(p.y), R * std::cos(p.x)};
      });
}

/// Fermi coordinates on the hyperbolic plane, ds^2 = cosh^2(v) du^2 + dv^2;
/// embedding (sinh u cosh v, sinh v, cosh u cosh v) on the hyperboloid.
inline Chart hyperbolic_plane(double half_extent = 6.0) {
  return Chart(
      "hyperbolic", {-half_extent, half_extent, -half_extent, half_extent},
      [](const Vec2& p) {
        const double c = std::cosh(p.y);
        return Metric{c * c, 0, 1};
      },
      [](const Vec2& p) { return MetricGradient{{0, 0, 0}, {std::sinh(2 * p.y), 0, 0}}; },
      [](const Vec2& p) {
        return Vector3{std::sinh(p.x) * std::cosh(p.y), std::sinh(p.y), std::cosh(p.x) * std::cosh(p.y)};
      });
}

using SpeedFn = std::function<double(const Vec2&)>;
using SpeedGradientFn = std::function<Vec2(const Vec2&)>;

/// Plane where a walker at (u, v) moves with speed c(u, v): g = c^-2 * identity.
inline Chart beetle(SpeedFn c, Domain domain = {-10, 10, -10, 10}, SpeedGradientFn grad = {}) {
  MetricFn metric = [c](const Vec2& p) {
    const double s = c(p);
    if (!(s > 0.0)) throw DomainError("beetle: speed must be positive");
    return Metric{1 / (s * s), 0, 1 / (s * s)};
  };
  MetricGradientFn gradient;
  if (grad) {
    gradient = [c, grad](const Vec2& p) {
      const double s = c(p);
      const Vec2 gs = grad(p);
      const double f = -2.0 / (s * s * s);
      return MetricGradient{{f * gs.x, 0, f * gs.x}, {f * gs.y, 0, f * gs.y}};
    };
  }
  return Chart("beetle", domain, std::move(metric), std::move(gradient));
}

/// A parameterized surface (u, v) -> R^3 with optional analytic partials.
struct Immersion {
  EmbeddingFn position;
  EmbeddingFn du, dv;            // first partials
  EmbeddingFn duu, duv, dvv;     // second partials

  Vector3 partial_u(const Vec2& p, double h) const {
    return du ? du(p) : (position({p.x + h, p.y}) - position({p.x - h, p.y})) / (2 * h);
  }
  Vector3 partial_v(const Vec2& p, double h) const {
    return dv ? dv(p) : (position({p.x, p.y + h}) - position({p.x, p.y - h})) / (2 * h);
  }
};

/// Chart whose metric is the first fundamental form of the immersion.
inline Chart pullback(const Immersion& X, Domain domain, std::string name = "pullback") {
  if (!X.position) throw DomainError("pullback: immersion has no position function");
  const double h = 1e-4 * std::min(1.0, domain.min_extent());
  MetricFn metric = [X, h](const Vec2& p) {
    const Vector3 xu = X.partial_u(p, h), xv = X.partial_v(p, h);
    return Metric{dot(xu, xu), dot(xu, xv), dot(xv, xv)};
  };
  MetricGradientFn gradient;
  if (X.du && X.dv && X.duu && X.duv && X.dvv) {
    gradient = [X](const Vec2& p) {
      const Vector3 xu = X.du(p), xv = X.dv(p), xuu = X.duu(p), xuv = X.duv(p), xvv = X.dvv(p);
      return MetricGradient{{2 * dot(xuu, xu), dot(xuu, xv) + dot(xu, xuv), 2 * dot(xuv, xv)},
                            {2 * dot(xuv, xu), dot(xuv, xv) + dot(xu, xvv), 2 * dot(xvv, xv)}};
    };
  }
  return Chart(std::move(name), domain, std::move(metric), std::move(gradient), X.position);
}

/// Graph of z = a x^2 + 2 b x y + c y^2 over [-h, h]^2.
inline Immersion quadric_immersion(double a, double b, double c) {
  Immersion X;
  X.position = [=](const Vec2& p) { return Vector3{p.x, p.y, a * p.x * p.x + 2 * b * p.x * p.y + c * p.y * p.y}; };
  X.du = [=](const Vec2& p) { return Vector3{1, 0, 2 * a * p.x + 2 * b * p.y}; };
  X.dv = [=](const Vec2& p) { return Vector3{0, 1, 2 * b * p.x + 2 * c * p.y}; };
  X.duu = [=](const Vec2&) { return Vector3{0, 0, 2 * a}; };
  X.duv = [=](const Vec2&) { return Vector3{0, 0, 2 * b}; };
  X.dvv = [=](const Vec2&) { return Vector3{0, 0, 2 * c}; };
  return X;
}

inline Chart quadric_chart(double a, double b, double c, double half_extent = 1.0) {
  return pullback(quadric_immersion(a, b, c), {-half_extent, half_extent, -half_extent, half_extent}, "quadric");
}

/// Unit sphere immersion in (theta, phi).
inline Immersion sphere_immersion(double R = 1.0) {
  Immersion X;
  X.position = [R](const Vec2& p) {
    return Vector3{R * std::sin(p.x) * std::cos(p.y), R * std::sin(p.x) * std::sin(p.y), R * std::cos(p.x)};
  };
  X.du = [R](const Vec2& p) {
    return Vector3{R * std::cos(p.x) * std::cos(p.y), R * std::cos(p.x) * std::sin(p.y), -R * std::sin(p.x)};
  };
  X.dv = [R](const Vec2& p) {
    return Vector3{-R * std::sin(p.x) * std::sin(p.y), R * std::sin(p.x) * std::cos(p.y), 0};
  };
  X.duu = [R](const Vec2& p) {
    return Vector3{-R * std::sin(p.x) * std::cos(p.y), -R * std::sin(p.x) * std::sin(p.y), -R * std::cos(p.x)};
  };
  X.duv = [R](const Vec2& p) {
    return Vector3{-R * std::cos(p.x) * std::sin(p.y), R * std::cos(p.x) * std::cos(p.y), 0};
  };
  X.dvv = [R](const Vec2& p) {
    return Vector3{-R * std::sin(p.x) * std::cos(p.y), -R * std::sin(p.x) * std::sin(p.y), 0};
  };
  return X;
}

/// Cylinder of radius rho in (phi, z).
inline Immersion cylinder_immersion(double rho = 1.0) {
  Immersion X;
  X.position = [rho](const Vec2& p) { return Vector3{rho * std::cos(p.x), rho * std::sin(p.x), p.y}; };
  X.du = [rho](const Vec2& p) { return Vector3{-rho * std::sin(p.x), rho * std::cos(p.x), 0}; };
  X.dv = [](const Vec2&) { return Vector3{0, 0, 1}; };
  X.duu = [rho](const Vec2& p) { return Vector3{-rho * std::cos(p.x), -rho * std::sin(p.x), 0}; };
  X.duv = [](const Vec2&) { return Vector3{0, 0, 0}; };
  X.dvv = [](const Vec2&) { return Vector3{0, 0, 0}; };
  return X;
}

}  // namespace curved::charts
