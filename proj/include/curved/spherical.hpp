#pragma once

#include <cmath>
#include <span>
#include <utility>
#include <vector>

#include "curved/core.hpp"

// Geometry of the unit sphere. Points and oriented great circles are both unit
// triples; the triple of a great circle is its north pole, so duality is the
// identity on coordinates.

namespace curved::sphere {

inline constexpr double kUnitTolerance = 1e-12;
inline constexpr double kIncidenceTolerance = 1e-10;

struct SpherePoint {
  Vector3 coords;

  SpherePoint() : coords(0, 0, 1) {}
  explicit SpherePoint(const Vector3& v) : coords(v) {
    if (!v.finite() || std::abs(dot(v, v) - 1.0) > kUnitTolerance) {
      throw DomainError("SpherePoint: coordinates are not a unit vector");
    }
  }

  static SpherePoint from(const Vector3& v) { return SpherePoint(normalize(v)); }

  /// Colatitude theta in [0, pi] and longitude phi.
  static SpherePoint from_angles(double colatitude, double longitude) {
    const double s = std::sin(colatitude);
    return from({s * std::cos(longitude), s * std::sin(longitude), std::cos(colatitude)});
  }

  SpherePoint antipode() const { return SpherePoint(-coords); }
};

/// Oriented great circle stored by its north pole: travelling along the circle,
/// the pole is on the left (counterclockwise as seen from outside, above the pole).
struct GreatCircle {
  Vector3 normal;

  GreatCircle() : normal(0, 0, 1) {}
  explicit GreatCircle(const Vector3& n) : normal(n) {
    if (!n.finite() || std::abs(dot(n, n) - 1.0) > kUnitTolerance) {
      throw DomainError("GreatCircle: normal is not a unit vector");
    }
  }

  GreatCircle reversed() const { return GreatCircle(-normal); }
};

/// Sides a, b, c (radians) opposite the angles alpha, beta, gamma.
struct SphericalTriangle {
  double a = 0, b = 0, c = 0;
  double alpha = 0, beta = 0, gamma = 0;

  /// Range checks only; see law_of_sines_check for the metric consistency test.
  void validate() const {
    for (double x : {a, b, c, alpha, beta, gamma}) {
      if (!(x > 0.0 && x < kPi)) throw DomainError("SphericalTriangle: side or angle outside (0, pi)");
    }
    const double d = alpha + beta + gamma - kPi;
    if (!(d > 0.0 && d < kTwoPi)) throw DomainError("SphericalTriangle: defect outside (0, 2pi)");
  }
};

/// Equal to arccos(p . q); the atan2 form keeps full precision near 0 and pi.
inline double distance(const SpherePoint& p, const SpherePoint& q) {
  return std::atan2(norm(cross(p.coords, q.coords)), dot(p.coords, q.coords));
}

inline GreatCircle great_circle_through(const SpherePoint& p, const SpherePoint& q) {
  const Vector3 n = cross(p.coords, q.coords);
  if (norm(n) < 1e-12) {
    throw DegenerateInput("great_circle_through: points are equal or antipodal; the circle is not unique");
  }
  return GreatCircle(normalize(n));
}

inline bool incident(const SpherePoint& p, const GreatCircle& k) {
  return std::abs(dot(p.coords, k.normal)) <= kIncidenceTolerance;
}

inline GreatCircle dual(const SpherePoint& p) { return GreatCircle(p.coords); }
inline SpherePoint dual(const GreatCircle& k) { return SpherePoint(k.normal); }

inline double angle_between(const GreatCircle& k1, const GreatCircle& k2) {
  const double s = norm(cross(k1.normal, k2.normal));
  if (s < 1e-12) throw DegenerateInput("angle_between: circles coincide (possibly with opposite orientation)");
  return std::atan2(s, dot(k1.normal, k2.normal));
}

/// Sides become pi minus the angles and vice versa.
inline SphericalTriangle dual_triangle(const SphericalTriangle& t) {
  t.validate();
  SphericalTriangle d{kPi - t.alpha, kPi - t.beta, kPi - t.gamma, kPi - t.a, kPi - t.b, kPi - t.c};
  d.validate();
  return d;
}

inline double law_of_sines_check(const SphericalTriangle& t) {
  const double r1 = std::sin(t.alpha) / std::sin(t.a);
  const double r2 = std::sin(t.beta) / std::sin(t.b);
  const double r3 = std::sin(t.gamma) / std::sin(t.c);
  return std::max({std::abs(r1 - r2), std::abs(r2 - r3), std::abs(r1 - r3)});
}

/// Right angle at C; legs a = CB and b = CA restricted to (0, pi/2).
inline SphericalTriangle solve_right_triangle(double a, double b) {
  if (!(a > 0.0 && a < kPi / 2) || !(b > 0.0 && b < kPi / 2)) {
    throw DomainError("solve_right_triangle: legs must lie in (0, pi/2)");
  }
  SphericalTriangle t;
  t.a = a;
  t.b = b;
  // cos c = cos a cos b, written with half-angle sines so small triangles keep their digits
  const double sa = std::sin(a / 2), sb = std::sin(b / 2);
  const double h = sa * sa + std::cos(a) * sb * sb;  // sin^2(c/2)
  t.c = 2.0 * std::atan2(std::sqrt(h), std::sqrt(1.0 - h));
  t.alpha = std::atan2(std::tan(a), std::sin(b));  // cos(alpha) = tan b / tan c
  t.beta = std::atan2(std::tan(b), std::sin(a));
  t.gamma = kPi / 2;
  return t;
}

inline double law_of_cosines_side(double a, double b, double gamma) {
  if (!(a > 0 && a < kPi && b > 0 && b < kPi && gamma > 0 && gamma < kPi)) {
    throw DomainError("law_of_cosines_side: arguments must lie in (0, pi)");
  }
  return safe_acos(std::cos(a) * std::cos(b) + std::sin(a) * std::sin(b) * std::cos(gamma),
                   "law_of_cosines_side");
}

/// Angle from the law of cosines: the angle opposite side a.
inline double law_of_cosines_angle(double a, double b, double c) {
  return safe_acos((std::cos(a) - std::cos(b) * std::cos(c)) / (std::sin(b) * std::sin(c)),
                   "law_of_cosines_angle");
}

/// On the unit sphere the defect equals the enclosed area.
inline double triangle_defect(const SphericalTriangle& t) {
  t.validate();
  return t.alpha + t.beta + t.gamma - kPi;
}

inline double polygon_defect(std::span<const double> angles) {
  if (angles.size() < 3) throw DomainError("polygon_defect: a polygon needs at least three vertices");
  double s = 0.0;
  for (double a : angles) s += a;
  return s - static_cast<double>(angles.size() - 2) * kPi;
}

/// Angle at vertex `at` between the great-circle arcs toward `p` and `q`.
inline double vertex_angle(const SpherePoint& at, const SpherePoint& p, const SpherePoint& q) {
  const GreatCircle k1 = great_circle_through(at, p);
  const GreatCircle k2 = great_circle_through(at, q);
  return angle_between(k1, k2);
}

/// Sides and angles of the geodesic triangle with vertices A, B, C.
inline SphericalTriangle measure_triangle(const SpherePoint& A, const SpherePoint& B, const SpherePoint& C) {
  SphericalTriangle t;
  t.a = distance(B, C);
  t.b = distance(C, A);
  t.c = distance(A, B);
  t.alpha = vertex_angle(A, B, C);
  t.beta = vertex_angle(B, C, A);
  t.gamma = vertex_angle(C, A, B);
  return t;
}

struct CircleMeasures {
  double circumference = 0;
  double area = 0;
};

/// Circle of geodesic radius r on the unit sphere.
inline CircleMeasures circle_measures(double r) {
  if (!(r > 0.0 && r < kPi)) throw DomainError("circle_measures: radius must lie in (0, pi)");
  return {kTwoPi * std::sin(r), kTwoPi * (1.0 - std::cos(r))};
}

enum class QuantityKind { Length, Area, Angle };

/// Converts a measurement taken on a sphere of radius R into its unit-sphere
/// counterpart: lengths become angles l/R, areas are divided by R^2, angles
/// (and therefore defects) are unchanged.
inline double rescale(QuantityKind kind, double value, double R) {
  if (!(R > 0.0)) throw DomainError("rescale: radius must be positive");
  switch (kind) {
    case QuantityKind::Length: return value / R;
    case QuantityKind::Area: return value / (R * R);
    case QuantityKind::Angle: return value;
  }
  return value;
}

/// Inverse of rescale: unit-sphere quantity to radius R.
inline double restore(QuantityKind kind, double value, double R) {
  if (!(R > 0.0)) throw DomainError("restore: radius must be positive");
  switch (kind) {
    case QuantityKind::Length: return value * R;
    case QuantityKind::Area: return value * R * R;
    case QuantityKind::Angle: return value;
  }
  return value;
}

/// Circle of geodesic radius r on a sphere of radius R.
inline CircleMeasures circle_measures(double r, double R) {
  const CircleMeasures unit = circle_measures(rescale(QuantityKind::Length, r, R));
  return {restore(QuantityKind::Length, unit.circumference, R), restore(QuantityKind::Area, unit.area, R)};
}

/// Intrinsic radius of curvature of a circle of intrinsic radius a; infinity
/// for the great circle a = pi/2.
inline double geodesic_circle_radius_of_curvature(double a) {
  if (a == kPi / 2) return std::numeric_limits<double>::infinity();
  if (!(a > 0.0 && a < kPi / 2)) throw DomainError("geodesic_circle_radius_of_curvature: a must lie in (0, pi/2]");
  return std::tan(a);
}

/// An orthonormal pair spanning the plane of the great circle.
inline std::pair<Vector3, Vector3> circle_basis(const GreatCircle& k) {
  const Vector3& n = k.normal;
  const Vector3 seed = std::abs(n.x) < 0.9 ? Vector3(1, 0, 0) : Vector3(0, 1, 0);
  const Vector3 e1 = normalize(cross(n, seed));
  const Vector3 e2 = cross(n, e1);
  return {e1, e2};
}

/// Distance from a point to a great circle.
inline double distance_to_circle(const SpherePoint& p, const GreatCircle& k) {
  return kPi / 2 - distance(p, dual(k));
}

/// Samples of the locus at distance d from k, on the side of its north pole.
inline std::vector<SpherePoint> equidistant(const GreatCircle& k, double d, int samples) {
  if (!(d > 0.0 && d < kPi / 2)) throw DomainError("equidistant: distance must lie in (0, pi/2)");
  if (samples < 1) throw DomainError("equidistant: need at least one sample");
  const auto [e1, e2] = circle_basis(k);
  std::vector<SpherePoint> out;
  out.reserve(static_cast<std::size_t>(samples));
  for (int i = 0; i < samples; ++i) {
    const double phi = kTwoPi * i / samples;
    const Vector3 base = e1 * std::cos(phi) + e2 * std::sin(phi);
    out.push_back(SpherePoint::from(base * std::cos(d) + k.normal * std::sin(d)));
  }
  return out;
}

/// Exponential map: walk distance s from p in the unit tangent direction t.
inline SpherePoint exp_map(const SpherePoint& p, const Vector3& unit_tangent, double s) {
  return SpherePoint::from(p.coords * std::cos(s) + unit_tangent * std::sin(s));
}

/// Unit tangent at p of the great-circle arc toward q.
inline Vector3 tangent_toward(const SpherePoint& p, const SpherePoint& q) {
  return normalize(q.coords - p.coords * dot(p.coords, q.coords));
}

}  // namespace curved::sphere
