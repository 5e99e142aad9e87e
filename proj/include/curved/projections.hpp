#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <utility>
#include <vector>

#include "curved/core.hpp"
#include "curved/hyperbolic.hpp"
#include "curved/random.hpp"
#include "curved/spherical.hpp"

// Maps from the sphere and the hyperboloid to the plane. The unit sphere rests
// on the plane z = -1 (tangent at the south pole S = (0,0,-1)); stereographic
// projection is from the north pole N = (0,0,1) and gnomonic projection from
// the centre.

namespace curved::projections {

inline Vec2 stereographic(const sphere::SpherePoint& P) {
  const Vector3& v = P.coords;
  const double d = 1.0 - v.z;
  if (d < 1e-12) throw DomainError("stereographic: the north pole maps to infinity");
  return {2.0 * v.x / d, 2.0 * v.y / d};
}

inline sphere::SpherePoint inverse_stereographic(const Vec2& X) {
  const double r2 = X.x * X.x + X.y * X.y;
  const double den = r2 + 4.0;
  return sphere::SpherePoint::from({4.0 * X.x / den, 4.0 * X.y / den, (r2 - 4.0) / den});
}

inline Vec2 gnomonic(const sphere::SpherePoint& P) {
  const Vector3& v = P.coords;
  if (!(v.z < -1e-12)) throw DomainError("gnomonic: point is not in the open lower hemisphere");
  return {-v.x / v.z, -v.y / v.z};
}

inline sphere::SpherePoint inverse_gnomonic(const Vec2& X) { return sphere::SpherePoint::from({X.x, X.y, -1.0}); }

/// Horizontal projection onto the circumscribed cylinder, unrolled:
/// (longitude, z).
inline Vec2 cylindrical_equal_area(const sphere::SpherePoint& P) {
  const Vector3& v = P.coords;
  if (1.0 - std::abs(v.z) < 1e-12) throw DegenerateInput("cylindrical_equal_area: poles have no longitude");
  return {std::atan2(v.y, v.x), v.z};
}

inline sphere::SpherePoint inverse_cylindrical_equal_area(const Vec2& X) {
  const double r = std::sqrt(std::max(0.0, 1.0 - X.y * X.y));
  return sphere::SpherePoint::from({r * std::cos(X.x), r * std::sin(X.x), X.y});
}

/// Central projection from (0, 0, -1) onto z = 0.
inline Vec2 poincare(const hyperbolic::HPoint& P) {
  const Vector3& v = P.coords;
  return {v.x / (1.0 + v.z), v.y / (1.0 + v.z)};
}

inline hyperbolic::HPoint inverse_poincare(const Vec2& X) {
  const double r2 = X.x * X.x + X.y * X.y;
  if (!(r2 < 1.0)) throw DomainError("inverse_poincare: point outside the unit disk");
  const double d = 1.0 - r2;
  return hyperbolic::HPoint::from({2.0 * X.x / d, 2.0 * X.y / d, (1.0 + r2) / d});
}

/// Central projection from the origin onto z = 1.
inline Vec2 klein(const hyperbolic::HPoint& P) {
  const Vector3& v = P.coords;
  return {v.x / v.z, v.y / v.z};
}

inline hyperbolic::HPoint inverse_klein(const Vec2& X) {
  const double r2 = X.x * X.x + X.y * X.y;
  if (!(r2 < 1.0)) throw DomainError("inverse_klein: point outside the unit disk");
  return hyperbolic::HPoint::from({X.x, X.y, 1.0});
}

// ---------------------------------------------------------------------------
// Fits

struct CircleFit {
  Vec2 centre;
  double radius = 0;
  double residual = 0;  // max | |p - centre| - radius |
};

/// Algebraic (Kasa) circle fit: least squares for x^2 + y^2 + D x + E y + F = 0.
inline CircleFit fit_circle(const std::vector<Vec2>& pts) {
  if (pts.size() < 3) throw DomainError("fit_circle: need at least three points");
  Vec2 mean{0, 0};
  for (const Vec2& p : pts) mean = mean + p;
  mean = mean * (1.0 / static_cast<double>(pts.size()));
  double A[3][3] = {}, b[3] = {};
  for (const Vec2& q : pts) {
    const Vec2 p = q - mean;
    const double row[3] = {p.x, p.y, 1.0};
    const double rhs = -(p.x * p.x + p.y * p.y);
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) A[i][j] += row[i] * row[j];
      b[i] += row[i] * rhs;
    }
  }
  // Gaussian elimination with partial pivoting.
  for (int c = 0; c < 3; ++c) {
    int piv = c;
    for (int r = c + 1; r < 3; ++r)
      if (std::abs(A[r][c]) > std::abs(A[piv][c])) piv = r;
    std::swap(A[c], A[piv]);
    std::swap(b[c], b[piv]);
    if (std::abs(A[c][c]) < 1e-300) throw DegenerateInput("fit_circle: points are collinear or coincident");
    for (int r = c + 1; r < 3; ++r) {
      const double f = A[r][c] / A[c][c];
      for (int k = c; k < 3; ++k) A[r][k] -= f * A[c][k];
      b[r] -= f * b[c];
    }
  }
  double x[3];
  for (int r = 2; r >= 0; --r) {
    double s = b[r];
    for (int k = r + 1; k < 3; ++k) s -= A[r][k] * x[k];
    x[r] = s / A[r][r];
  }
  CircleFit fit;
  const Vec2 c{-x[0] / 2, -x[1] / 2};
  fit.centre = c + mean;
  fit.radius = std::sqrt(std::max(0.0, c.x * c.x + c.y * c.y - x[2]));
  for (const Vec2& p : pts) fit.residual = std::max(fit.residual, std::abs(norm(p - fit.centre) - fit.radius));
  return fit;
}

/// Largest distance of the points from their total-least-squares line.
inline double line_fit_residual(const std::vector<Vec2>& pts) {
  if (pts.size() < 2) throw DomainError("line_fit_residual: need at least two points");
  Vec2 mean{0, 0};
  for (const Vec2& p : pts) mean = mean + p;
  mean = mean * (1.0 / static_cast<double>(pts.size()));
  double sxx = 0, sxy = 0, syy = 0;
  for (const Vec2& q : pts) {
    const Vec2 p = q - mean;
    sxx += p.x * p.x;
    sxy += p.x * p.y;
    syy += p.y * p.y;
  }
  const double theta = 0.5 * std::atan2(2 * sxy, sxx - syy);
  const Vec2 normal{-std::sin(theta), std::cos(theta)};
  double worst = 0.0;
  for (const Vec2& p : pts) worst = std::max(worst, std::abs(dot(p - mean, normal)));
  return worst;
}

/// Angle between two plane vectors in [0, pi].
inline double plane_angle(const Vec2& a, const Vec2& b) { return std::atan2(std::abs(cross(a, b)), dot(a, b)); }

// ---------------------------------------------------------------------------
// Distortion meter

/// A surface policy supplies an orthonormal tangent frame and an exponential map.
struct SphereSurface {
  using Point = Vector3;
  std::pair<Vector3, Vector3> frame(const Point& p) const { return sphere::circle_basis(sphere::GreatCircle(p)); }
  Point exp(const Point& p, const Vector3& unit_tangent, double s) const {
    return p * std::cos(s) + unit_tangent * std::sin(s);
  }
};

struct HyperboloidSurface {
  using Point = Vector3;
  std::pair<Vector3, Vector3> frame(const Point& p) const {
    const hyperbolic::HIsometry T = hyperbolic::from_origin(hyperbolic::HPoint::from(p));
    return {T.apply(Vector3{1, 0, 0}), T.apply(Vector3{0, 1, 0})};
  }
  Point exp(const Point& p, const Vector3& unit_tangent, double s) const {
    return p * std::cosh(s) + unit_tangent * std::sinh(s);
  }
};

struct FlatSurface {
  using Point = Vector3;
  std::pair<Vector3, Vector3> frame(const Point&) const { return {{1, 0, 0}, {0, 1, 0}}; }
  Point exp(const Point& p, const Vector3& unit_tangent, double s) const { return p + unit_tangent * s; }
};

struct DistortionReport {
  double min_length_ratio = std::numeric_limits<double>::infinity();
  double max_length_ratio = 0;
  double max_angle_error = 0;
  double min_area_ratio = std::numeric_limits<double>::infinity();
  double max_area_ratio = 0;
  int samples = 0;

  /// Largest |ratio - 1| over the sampled length ratios.
  double length_deviation() const { return std::max(std::abs(max_length_ratio - 1), std::abs(1 - min_length_ratio)); }
};

/// Samples n points from `sampler(rng)`, and at each point measures the
/// images of short geodesic segments in random directions (central
/// differences, step eps): length ratios, the error of the angle between two
/// random directions, and the area ratio of the frame.
template <class Surface, class Map, class Sampler>
DistortionReport distortion_meter(const Surface& surface, Map&& map, Sampler&& sampler, int n, std::uint64_t seed,
                                  double eps = 1e-5) {
  if (n < 1) throw DomainError("distortion_meter: need at least one sample");
  Rng rng(seed);
  DistortionReport r;
  auto image_derivative = [&](const typename Surface::Point& p, const Vector3& t) {
    const Vec2 a = map(surface.exp(p, t, eps));
    const Vec2 b = map(surface.exp(p, t, -eps));
    return (a - b) * (0.5 / eps);
  };
  for (int i = 0; i < n; ++i) {
    const typename Surface::Point p = sampler(rng);
    const auto [e1, e2] = surface.frame(p);
    const double th1 = rng.uniform(0.0, kTwoPi);
    const double th2 = th1 + rng.uniform(0.2, kPi - 0.2);
    const Vector3 t1 = e1 * std::cos(th1) + e2 * std::sin(th1);
    const Vector3 t2 = e1 * std::cos(th2) + e2 * std::sin(th2);
    const Vec2 d1 = image_derivative(p, t1), d2 = image_derivative(p, t2);
    for (const Vec2& d : {d1, d2}) {
      const double ratio = norm(d);
      r.min_length_ratio = std::min(r.min_length_ratio, ratio);
      r.max_length_ratio = std::max(r.max_length_ratio, ratio);
    }
    r.max_angle_error = std::max(r.max_angle_error, std::abs(plane_angle(d1, d2) - (th2 - th1)));
    const double area = std::abs(cross(image_derivative(p, e1), image_derivative(p, e2)));
    r.min_area_ratio = std::min(r.min_area_ratio, area);
    r.max_area_ratio = std::max(r.max_area_ratio, area);
    ++r.samples;
  }
  return r;
}

/// Uniform sampler of the spherical cap of angular radius alpha about `centre`.
inline auto cap_sampler(const Vector3& centre, double alpha) {
  if (!(alpha > 0.0 && alpha <= kPi)) throw DomainError("cap_sampler: radius must lie in (0, pi]");
  const Vector3 c = normalize(centre);
  const auto [e1, e2] = sphere::circle_basis(sphere::GreatCircle(c));
  return [c, e1 = e1, e2 = e2, alpha](Rng& rng) {
    const double z = rng.uniform(std::cos(alpha), 1.0);
    const double phi = rng.uniform(0.0, kTwoPi);
    const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
    return c * z + (e1 * std::cos(phi) + e2 * std::sin(phi)) * s;
  };
}

/// Uniform sampler (by area) of the hyperbolic disk of radius r about the origin.
inline auto hyperbolic_disk_sampler(double r) {
  if (!(r > 0.0)) throw DomainError("hyperbolic_disk_sampler: radius must be positive");
  return [r](Rng& rng) {
    const double c = 1.0 + rng.uniform() * (std::cosh(r) - 1.0);
    return hyperbolic::HPoint::polar(std::acosh(c), rng.uniform(0.0, kTwoPi)).coords;
  };
}

}  // namespace curved::projections
