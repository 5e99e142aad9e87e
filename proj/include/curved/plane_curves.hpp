#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "curved/core.hpp"

// Planar curves. Signed curvature is positive when the curve turns left as
// the parameter increases.

namespace curved::plane {

using PointFn = std::function<Vec2(double)>;

struct PlaneCurve {
  PointFn position;
  PointFn d1;  // optional first derivative
  PointFn d2;  // optional second derivative
  double t0 = 0;
  double t1 = 1;
  bool closed = false;

  void validate() const {
    if (!position) throw DomainError("PlaneCurve: missing position function");
    if (!(t1 > t0)) throw DomainError("PlaneCurve: empty parameter interval");
    if (closed && norm(position(t0) - position(t1)) > 1e-12) {
      throw DomainError("PlaneCurve: closed curve does not return to its start");
    }
  }

  Vec2 velocity(double t) const {
    if (d1) return d1(t);
    const double h = 1e-6 * (t1 - t0);
    return (position(t + h) - position(t - h)) * (0.5 / h);
  }
};

/// Left unit normal of a nonzero vector.
inline Vec2 left_normal(const Vec2& v) {
  const double n = norm(v);
  if (!(n > 0.0)) throw DomainError("left_normal: zero tangent");
  return {-v.y / n, v.x / n};
}

/// Signed distance from curve(t) to the intersection of the normals at t - h
/// and t + h; positive when the intersection is to the left. Parallel normals
/// return +infinity.
inline double osculating_radius_normals(const PlaneCurve& curve, double t, double h) {
  curve.validate();
  if (!(h > 0.0)) throw DomainError("osculating_radius_normals: h must be positive");
  if (!curve.closed && (t - h < curve.t0 || t + h > curve.t1)) {
    throw DomainError("osculating_radius_normals: t +- h leaves the parameter interval");
  }
  const Vec2 p1 = curve.position(t - h), p2 = curve.position(t + h);
  const Vec2 n1 = left_normal(curve.velocity(t - h)), n2 = left_normal(curve.velocity(t + h));
  const double den = cross(n1, n2);
  const Vec2 gap = p2 - p1;
  if (std::abs(den) <= 1e-15 * (1.0 + norm(gap))) return std::numeric_limits<double>::infinity();
  // p1 + s n1 = p2 + r n2
  const double s = cross(gap, n2) / den;
  const double r = cross(gap, n1) / den;
  if (s * r < 0.0) throw NumericFailure("osculating_radius_normals: normals meet on opposite sides; h too large");
  const Vec2 centre = p1 + n1 * s;
  const Vec2 p = curve.position(t);
  const Vec2 to_centre = centre - p;
  const double dist = norm(to_centre);
  return cross(curve.velocity(t), to_centre) >= 0.0 ? dist : -dist;
}

/// (x'y'' - y'x'') / |x'|^3 from the analytic derivatives.
inline double signed_curvature_analytic(const PlaneCurve& curve, double t) {
  if (!curve.d1 || !curve.d2) throw DomainError("signed_curvature_analytic: derivatives not supplied");
  const Vec2 a = curve.d1(t), b = curve.d2(t);
  const double speed = norm(a);
  if (!(speed > 0.0)) throw DomainError("signed_curvature_analytic: zero speed");
  return cross(a, b) / (speed * speed * speed);
}

struct Arc {
  double curvature = 0;  // signed, 1/length
  double length = 0;
};

using ArcChain = std::vector<Arc>;

struct ChainEnd {
  Vec2 position;
  double heading = 0;  // accumulated, not wrapped
};

/// Lays the arcs end to end from the origin heading along +x.
inline ChainEnd realize(const ArcChain& chain) {
  ChainEnd e{{0, 0}, 0};
  for (const Arc& a : chain) {
    if (a.length < 0.0) throw DomainError("realize: arc length must be non-negative");
    const double th = e.heading;
    if (a.curvature == 0.0) {
      e.position = e.position + Vec2{std::cos(th), std::sin(th)} * a.length;
    } else {
      const double th2 = th + a.curvature * a.length;
      e.position = e.position + Vec2{(std::sin(th2) - std::sin(th)) / a.curvature,
                                     -(std::cos(th2) - std::cos(th)) / a.curvature};
    }
    e.heading = th + a.curvature * a.length;
  }
  return e;
}

/// Sum of curvature times length over a closed tangent-continuous chain.
inline double total_curvature(const ArcChain& chain) {
  if (chain.empty()) throw DomainError("total_curvature: empty chain");
  double scale = 0.0;
  for (const Arc& a : chain) scale += a.length;
  const ChainEnd e = realize(chain);
  const double turns = e.heading / kTwoPi;
  if (norm(e.position) > 1e-9 * std::max(1.0, scale) || std::abs(turns - std::round(turns)) > 1e-9) {
    throw DomainError("total_curvature: chain is not closed");
  }
  double s = 0.0;
  for (const Arc& a : chain) s += a.curvature * a.length;
  return s;
}

/// Sum of exterior angles of the inscribed n-gon of a closed curve.
inline double total_curvature_sampled(const PlaneCurve& curve, int n) {
  curve.validate();
  if (!curve.closed) throw DomainError("total_curvature_sampled: curve must be closed");
  if (n < 16) throw DomainError("total_curvature_sampled: need n >= 16");
  std::vector<Vec2> pts(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) pts[static_cast<std::size_t>(i)] = curve.position(curve.t0 + (curve.t1 - curve.t0) * i / n);
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    const Vec2& a = pts[static_cast<std::size_t>((i + n - 1) % n)];
    const Vec2& b = pts[static_cast<std::size_t>(i)];
    const Vec2& c = pts[static_cast<std::size_t>((i + 1) % n)];
    const Vec2 u = b - a, v = c - b;
    total += std::atan2(cross(u, v), dot(u, v));
  }
  return total;
}

struct VertexCount {
  int count = 0;
  bool constant_curvature = false;
};

/// Strict local extrema of the sampled curvature (cyclic), with runs of values
/// equal within 1e-9 merged into one.
inline VertexCount count_vertices(const PlaneCurve& curve, int n) {
  curve.validate();
  if (!curve.closed) throw DomainError("count_vertices: curve must be closed");
  if (n < 8) throw DomainError("count_vertices: need n >= 8");
  constexpr double kTol = 1e-9;
  std::vector<double> k(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double t = curve.t0 + (curve.t1 - curve.t0) * i / n;
    if (curve.d1 && curve.d2) {
      k[static_cast<std::size_t>(i)] = signed_curvature_analytic(curve, t);
    } else {
      const double h = 1e-4 * (curve.t1 - curve.t0);
      const Vec2 a = (curve.position(t + h) - curve.position(t - h)) * (0.5 / h);
      const Vec2 b = (curve.position(t + h) - curve.position(t) * 2.0 + curve.position(t - h)) * (1.0 / (h * h));
      k[static_cast<std::size_t>(i)] = cross(a, b) / std::pow(norm(a), 3);
    }
  }
  const auto [lo, hi] = std::minmax_element(k.begin(), k.end());
  if (*hi - *lo <= kTol) return {0, true};

  // Rotate so the sequence starts at the beginning of a run.
  std::size_t start = 0;
  while (start < k.size() && std::abs(k[start] - k[(start + k.size() - 1) % k.size()]) <= kTol) ++start;
  if (start == k.size()) start = 0;
  std::vector<double> runs;
  for (std::size_t i = 0; i < k.size(); ++i) {
    const double v = k[(start + i) % k.size()];
    if (runs.empty() || std::abs(v - runs.back()) > kTol) runs.push_back(v);
  }
  if (runs.size() > 1 && std::abs(runs.front() - runs.back()) <= kTol) runs.pop_back();
  const std::size_t m = runs.size();
  int count = 0;
  for (std::size_t i = 0; i < m; ++i) {
    const double prev = runs[(i + m - 1) % m], next = runs[(i + 1) % m];
    if ((runs[i] > prev && runs[i] > next) || (runs[i] < prev && runs[i] < next)) ++count;
  }
  return {count, false};
}

// ---------------------------------------------------------------------------
// Sample curves with analytic derivatives

inline PlaneCurve circle(double r, Vec2 centre = {0, 0}) {
  PlaneCurve c;
  c.position = [=](double t) { return centre + Vec2{r * std::cos(t), r * std::sin(t)}; };
  c.d1 = [=](double t) { return Vec2{-r * std::sin(t), r * std::cos(t)}; };
  c.d2 = [=](double t) { return Vec2{-r * std::cos(t), -r * std::sin(t)}; };
  c.t0 = 0;
  c.t1 = kTwoPi;
  c.closed = true;
  return c;
}

/// y = a x^2 for x in [-span, span].
inline PlaneCurve parabola(double a, double span = 10.0) {
  PlaneCurve c;
  c.position = [=](double t) { return Vec2{t, a * t * t}; };
  c.d1 = [=](double t) { return Vec2{1, 2 * a * t}; };
  c.d2 = [=](double) { return Vec2{0, 2 * a}; };
  c.t0 = -span;
  c.t1 = span;
  return c;
}

/// Ellipse with semi-major axis a and focal half-distance b (semi-minor sqrt(a^2 - b^2)).
inline PlaneCurve ellipse(double a, double b) {
  if (!(a > 0.0 && b >= 0.0 && b < a)) throw DomainError("ellipse: need 0 <= b < a");
  const double m = std::sqrt(a * a - b * b);
  PlaneCurve c;
  c.position = [=](double t) { return Vec2{a * std::cos(t), m * std::sin(t)}; };
  c.d1 = [=](double t) { return Vec2{-a * std::sin(t), m * std::cos(t)}; };
  c.d2 = [=](double t) { return Vec2{-a * std::cos(t), -m * std::sin(t)}; };
  c.t0 = 0;
  c.t1 = kTwoPi;
  c.closed = true;
  return c;
}

/// Limacon r = b + a cos t; it has an inner loop when a > b.
inline PlaneCurve limacon(double a, double b) {
  PlaneCurve c;
  c.position = [=](double t) {
    const double r = b + a * std::cos(t);
    return Vec2{r * std::cos(t), r * std::sin(t)};
  };
  c.d1 = [=](double t) {
    const double r = b + a * std::cos(t), dr = -a * std::sin(t);
    return Vec2{dr * std::cos(t) - r * std::sin(t), dr * std::sin(t) + r * std::cos(t)};
  };
  c.d2 = [=](double t) {
    const double r = b + a * std::cos(t), dr = -a * std::sin(t), ddr = -a * std::cos(t);
    return Vec2{ddr * std::cos(t) - 2 * dr * std::sin(t) - r * std::cos(t),
                ddr * std::sin(t) + 2 * dr * std::cos(t) - r * std::sin(t)};
  };
  c.t0 = 0;
  c.t1 = kTwoPi;
  c.closed = true;
  return c;
}

/// Applies a rigid motion (rotation by phi, then shift) to a curve.
inline PlaneCurve moved(const PlaneCurve& src, double phi, Vec2 shift) {
  const double cs = std::cos(phi), sn = std::sin(phi);
  auto rot = [=](Vec2 p) { return Vec2{cs * p.x - sn * p.y, sn * p.x + cs * p.y}; };
  PlaneCurve c = src;
  c.position = [=, f = src.position](double t) { return rot(f(t)) + shift; };
  if (src.d1) c.d1 = [=, f = src.d1](double t) { return rot(f(t)); };
  if (src.d2) c.d2 = [=, f = src.d2](double t) { return rot(f(t)); };
  return c;
}

/// Same trace traversed backwards.
inline PlaneCurve reversed(const PlaneCurve& src) {
  PlaneCurve c = src;
  const double s = src.t0 + src.t1;
  c.position = [=, f = src.position](double t) { return f(s - t); };
  if (src.d1) c.d1 = [=, f = src.d1](double t) { return f(s - t) * -1.0; };
  if (src.d2) c.d2 = [=, f = src.d2](double t) { return f(s - t); };
  return c;
}

}  // namespace curved::plane
