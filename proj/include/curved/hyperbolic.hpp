#pragma once

#include <cmath>

#include "curved/core.hpp"

// The hyperboloid model: the upper sheet of x^2 + y^2 - z^2 = -1 with the
// Lorentzian form diag(1, 1, -1). Distances are arcosh(-<P, Q>).

namespace curved::hyperbolic {

inline constexpr BilinearForm kForm = BilinearForm::lorentzian();
inline constexpr double kSheetTolerance = 1e-10;

inline double linner(const Vector3& u, const Vector3& v) { return inner(kForm, u, v); }

struct HPoint {
  Vector3 coords{0, 0, 1};

  HPoint() = default;
  explicit HPoint(const Vector3& v) : coords(v) {
    if (!v.finite() || v.z <= 0.0 || std::abs(linner(v, v) + 1.0) > kSheetTolerance * std::max(1.0, v.z * v.z)) {
      throw DomainError("HPoint: coordinates are not on the upper sheet of the hyperboloid");
    }
  }

  static HPoint origin() { return HPoint(); }

  /// Projects any timelike vector with z > 0 onto the sheet.
  static HPoint from(const Vector3& v) {
    if (v.z <= 0.0) throw DomainError("HPoint::from: vector is not future-pointing");
    return HPoint(normalize(kForm, v, -1));
  }

  /// Geodesic polar coordinates about the origin.
  static HPoint polar(double r, double phi) {
    return HPoint({std::sinh(r) * std::cos(phi), std::sinh(r) * std::sin(phi), std::cosh(r)});
  }
};

/// A linear map preserving the Lorentzian form and the upper sheet.
struct HIsometry {
  Mat3 matrix = Mat3::identity();

  HPoint apply(const HPoint& p) const { return HPoint::from(matrix * p.coords); }
  Vector3 apply(const Vector3& v) const { return matrix * v; }

  HIsometry operator*(const HIsometry& o) const { return {matrix * o.matrix}; }

  /// G M^T G for G = diag(1, 1, -1).
  HIsometry inverse() const {
    Mat3 t = matrix.transposed();
    for (int i = 0; i < 3; ++i) {
      t.m[i][2] = -t.m[i][2];
      t.m[2][i] = -t.m[2][i];
    }
    return {t};
  }

  /// Max entry deviation of M^T G M from G.
  double form_defect() const {
    double worst = 0.0;
    const double g[3] = {1.0, 1.0, -1.0};
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        double s = 0.0;
        for (int k = 0; k < 3; ++k) s += matrix.m[k][i] * g[k] * matrix.m[k][j];
        worst = std::max(worst, std::abs(s - (i == j ? g[i] : 0.0)));
      }
    return worst;
  }
};

inline double h_distance(const HPoint& p, const HPoint& q) { return safe_acosh(-linner(p.coords, q.coords)); }

/// (x, y, z) -> (x cos a + y sin a, y cos a - x sin a, z); fixes (0, 0, 1).
inline HIsometry rotation(double alpha) {
  const double c = std::cos(alpha), s = std::sin(alpha);
  Mat3 m;
  m.m = {{{c, s, 0}, {-s, c, 0}, {0, 0, 1}}};
  return {m};
}

/// (x, y, z) -> (x cosh t + z sinh t, y, z cosh t + x sinh t).
inline HIsometry boost(double t) {
  const double c = std::cosh(t), s = std::sinh(t);
  Mat3 m;
  m.m = {{{c, 0, s}, {0, 1, 0}, {s, 0, c}}};
  return {m};
}

/// Isometry taking the origin (0, 0, 1) to p: a boost along x followed by a
/// counterclockwise turn by the polar angle of p.
inline HIsometry from_origin(const HPoint& p) {
  const double r = safe_acosh(p.coords.z);
  const double phi = std::atan2(p.coords.y, p.coords.x);
  return rotation(-phi) * boost(r);
}

inline HIsometry transitive_isometry(const HPoint& p, const HPoint& q) {
  return from_origin(q) * from_origin(p).inverse();
}

/// Lorentz-unit tangent at p pointing toward q.
inline Vector3 tangent_toward(const HPoint& p, const HPoint& q) {
  const Vector3 t = q.coords + p.coords * linner(p.coords, q.coords);
  const double n2 = linner(t, t);
  if (!(n2 > 0.0)) throw DegenerateInput("tangent_toward: points coincide");
  return t / std::sqrt(n2);
}

inline HPoint exp_map(const HPoint& p, const Vector3& unit_tangent, double s) {
  return HPoint::from(p.coords * std::cosh(s) + unit_tangent * std::sinh(s));
}

/// Point at arclength s from p on the geodesic through p and q.
inline HPoint h_geodesic_through(const HPoint& p, const HPoint& q, double s) {
  if (h_distance(p, q) < 1e-14) throw DegenerateInput("h_geodesic_through: points coincide");
  return exp_map(p, tangent_toward(p, q), s);
}

/// Angle at vertex `at` between geodesics toward p and q.
inline double vertex_angle(const HPoint& at, const HPoint& p, const HPoint& q) {
  const Vector3 t1 = tangent_toward(at, p);
  const Vector3 t2 = tangent_toward(at, q);
  return safe_acos(linner(t1, t2), "hyperbolic::vertex_angle");
}

struct HTriangle {
  double a = 0, b = 0, c = 0;
  double alpha = 0, beta = 0, gamma = 0;
};

inline HTriangle measure_triangle(const HPoint& A, const HPoint& B, const HPoint& C) {
  return {h_distance(B, C), h_distance(C, A), h_distance(A, B),
          vertex_angle(A, B, C), vertex_angle(B, C, A), vertex_angle(C, A, B)};
}

/// Builds the right triangle with legs a, b meeting orthogonally at the origin
/// and returns its measured hypotenuse.
inline double h_right_triangle_check(double a, double b) {
  if (a < 0.0 || b < 0.0) throw DomainError("h_right_triangle_check: legs must be non-negative");
  const HPoint A = HPoint::polar(b, 0.0);
  const HPoint B = HPoint::polar(a, kPi / 2);
  return h_distance(A, B);
}

/// cosh c = cosh a cosh b - sinh a sinh b cos(gamma).
inline double h_law_of_cosines_side(double a, double b, double gamma) {
  return safe_acosh(std::cosh(a) * std::cosh(b) - std::sinh(a) * std::sinh(b) * std::cos(gamma));
}

/// Angle law: cos(gamma) = -cos(alpha) cos(beta) + sin(alpha) sin(beta) cosh(c).
inline double h_law_of_cosines_angle(double alpha, double beta, double c) {
  return safe_acos(-std::cos(alpha) * std::cos(beta) + std::sin(alpha) * std::sin(beta) * std::cosh(c),
                   "h_law_of_cosines_angle");
}

/// Side opposite gamma from the two adjacent angles and the included side c
/// (angle-side-angle), via the angle law applied to each vertex.
inline HTriangle h_solve_asa(double alpha, double beta, double c) {
  if (!(alpha > 0 && beta > 0 && alpha + beta < kPi && c > 0)) throw DomainError("h_solve_asa: invalid data");
  HTriangle t;
  t.alpha = alpha;
  t.beta = beta;
  t.c = c;
  t.gamma = h_law_of_cosines_angle(alpha, beta, c);
  // cosh a = (cos alpha + cos beta cos gamma) / (sin beta sin gamma)
  t.a = safe_acosh((std::cos(alpha) + std::cos(beta) * std::cos(t.gamma)) / (std::sin(beta) * std::sin(t.gamma)));
  t.b = safe_acosh((std::cos(beta) + std::cos(alpha) * std::cos(t.gamma)) / (std::sin(alpha) * std::sin(t.gamma)));
  return t;
}

struct CircleMeasures {
  double circumference = 0;
  double area = 0;
};

inline CircleMeasures h_circle_measures(double r) {
  if (!(r > 0.0)) throw DomainError("h_circle_measures: radius must be positive");
  return {kTwoPi * std::sinh(r), kTwoPi * (std::cosh(r) - 1.0)};
}

}  // namespace curved::hyperbolic
