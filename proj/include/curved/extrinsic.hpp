#pragma once

#include <array>
#include <cmath>
#include <vector>

#include "curved/charts.hpp"
#include "curved/core.hpp"

// Second-order geometry of a surface touching the plane z = 0 at the origin,
// z = a x^2 + 2 b x y + c y^2. Curvatures are taken with the normal on the +z
// side.

namespace curved::extrinsic {

struct QuadricPatch {
  double a = 0, b = 0, c = 0;

  void validate() const {
    if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(c)) {
      throw DomainError("QuadricPatch: coefficients must be finite");
    }
  }

  double height(double x, double y) const { return a * x * x + 2 * b * x * y + c * y * y; }

  /// Coefficients of the same surface in coordinates rotated by phi.
  QuadricPatch rotated(double phi) const {
    const double cs = std::cos(phi), sn = std::sin(phi);
    // f(x cos - y sin, x sin + y cos)
    return {a * cs * cs + 2 * b * cs * sn + c * sn * sn,
            (c - a) * cs * sn + b * (cs * cs - sn * sn),
            a * sn * sn - 2 * b * cs * sn + c * cs * cs};
  }
};

struct CurvatureSpectrum {
  double k_min = 0, k_max = 0;
  double dir_min = 0, dir_max = 0;  // angles in [0, pi)
};

/// Second derivative of the section z(t) = f(t cos alpha, t sin alpha).
inline double normal_section_curvature(const QuadricPatch& p, double alpha) {
  const double cs = std::cos(alpha), sn = std::sin(alpha);
  return 2.0 * (p.a * cs * cs + 2.0 * p.b * sn * cs + p.c * sn * sn);
}

inline double wrap_half_turn(double a) {
  double r = std::fmod(a, kPi);
  if (r < 0) r += kPi;
  if (r >= kPi) r -= kPi;
  return r;
}

inline CurvatureSpectrum principal_curvatures(const QuadricPatch& p) {
  p.validate();
  const double root = std::sqrt((p.a - p.c) * (p.a - p.c) + 4.0 * p.b * p.b);
  CurvatureSpectrum s;
  s.k_min = p.a + p.c - root;
  s.k_max = p.a + p.c + root;
  s.dir_max = wrap_half_turn(0.5 * std::atan2(2.0 * p.b, p.a - p.c));
  s.dir_min = wrap_half_turn(s.dir_max + kPi / 2);
  return s;
}

inline double mean_curvature(const QuadricPatch& p) { return 2.0 * (p.a + p.c); }
inline double gaussian_curvature(const QuadricPatch& p) { return 4.0 * (p.a * p.c - p.b * p.b); }

/// Euler's formula: k_min sin^2 + k_max cos^2 of the angle from dir_max.
inline double euler_direction_formula(const CurvatureSpectrum& s, double theta) {
  const double d = theta - s.dir_max;
  const double cs = std::cos(d), sn = std::sin(d);
  return s.k_min * sn * sn + s.k_max * cs * cs;
}

struct Jacobian2 {
  std::array<std::array<double, 2>, 2> m{};
  double det() const { return m[0][0] * m[1][1] - m[0][1] * m[1][0]; }
};

/// Linearization at the origin of (x, y) -> first two components of the
/// unnormalized normal (-f_x, -f_y, 1).
inline Jacobian2 gauss_map_jacobian(const QuadricPatch& p) {
  Jacobian2 j;
  j.m = {{{-2 * p.a, -2 * p.b}, {-2 * p.b, -2 * p.c}}};
  return j;
}

/// The same linearization using the unit normal, by central differences.
inline Jacobian2 gauss_map_jacobian_normalized(const QuadricPatch& p, double h = 1e-5) {
  auto n = [&](double x, double y) {
    const Vector3 raw{-(2 * p.a * x + 2 * p.b * y), -(2 * p.b * x + 2 * p.c * y), 1.0};
    return normalize(raw);
  };
  const Vector3 xp = n(h, 0), xm = n(-h, 0), yp = n(0, h), ym = n(0, -h);
  Jacobian2 j;
  j.m = {{{(xp.x - xm.x) / (2 * h), (yp.x - ym.x) / (2 * h)}, {(xp.y - xm.y) / (2 * h), (yp.y - ym.y) / (2 * h)}}};
  return j;
}

struct EgregiumCheck {
  double intrinsic = 0;
  double extrinsic = 0;
  double gap = 0;
};

/// Compares the defect/area curvature of the pullback metric at the origin
/// with 4(ac - b^2).
inline EgregiumCheck theorema_egregium_check(const QuadricPatch& p, double scale) {
  p.validate();
  if (!(scale > 0.0 && scale <= 0.5)) throw DomainError("theorema_egregium_check: scale must lie in (0, 0.5]");
  const charts::Chart chart = charts::quadric_chart(p.a, p.b, p.c, 1.0);
  EgregiumCheck r;
  r.intrinsic = charts::curvature_density(chart, {0, 0}, scale);
  r.extrinsic = gaussian_curvature(p);
  r.gap = std::abs(r.intrinsic - r.extrinsic);
  return r;
}

/// Largest tangential component of the second derivative of a curve traced in
/// a pullback chart and lifted to R^3. Samples must be equally spaced in t.
inline double geodesic_normal_acceleration_check(const charts::Immersion& X,
                                                  const std::vector<charts::CurvePoint>& samples) {
  if (samples.size() < 3) throw DomainError("geodesic_normal_acceleration_check: need at least three samples");
  const double h = samples[1].t - samples[0].t;
  if (!(h > 0.0)) throw DomainError("geodesic_normal_acceleration_check: samples must increase in t");
  double worst = 0.0;
  for (std::size_t i = 1; i + 1 < samples.size(); ++i) {
    const Vector3 p0 = X.position(samples[i - 1].x), p1 = X.position(samples[i].x), p2 = X.position(samples[i + 1].x);
    const Vector3 acc = (p2 - p1 * 2.0 + p0) / (h * h);
    const Vector3 xu = X.partial_u(samples[i].x, 1e-6), xv = X.partial_v(samples[i].x, 1e-6);
    const Vector3 n = normalize(cross(xu, xv));
    const Vector3 tangential = acc - n * dot(acc, n);
    worst = std::max(worst, norm(tangential));
  }
  return worst;
}

/// Height function of the surface over its tangent plane at p, written as a
/// quadric patch in an orthonormal tangent frame (e1 along X_u). The normal is
/// X_u x X_v; second derivatives come from central differences with step h.
inline QuadricPatch fit_osculating_patch(const charts::Immersion& X, const Vec2& p, double h = 1e-4) {
  auto P = [&](double du, double dv) { return X.position({p.x + du, p.y + dv}); };
  const Vector3 c = P(0, 0);
  const Vector3 xu = (P(h, 0) - P(-h, 0)) / (2 * h);
  const Vector3 xv = (P(0, h) - P(0, -h)) / (2 * h);
  const Vector3 xuu = (P(h, 0) - c * 2.0 + P(-h, 0)) / (h * h);
  const Vector3 xvv = (P(0, h) - c * 2.0 + P(0, -h)) / (h * h);
  const Vector3 xuv = (P(h, h) - P(h, -h) - P(-h, h) + P(-h, -h)) / (4 * h * h);
  const Vector3 n = normalize(cross(xu, xv));
  const Vector3 e1 = normalize(xu);
  const Vector3 e2 = cross(n, e1);
  // Second fundamental form in (u, v), then transported to (x, y) = tangent coordinates.
  const double L = dot(xuu, n), M = dot(xuv, n), N = dot(xvv, n);
  const double j11 = dot(e1, xu), j12 = dot(e1, xv), j21 = dot(e2, xu), j22 = dot(e2, xv);
  const double det = j11 * j22 - j12 * j21;
  if (std::abs(det) < 1e-14) throw DegenerateInput("fit_osculating_patch: immersion is singular at p");
  const double i11 = j22 / det, i12 = -j12 / det, i21 = -j21 / det, i22 = j11 / det;
  // Hessian H = J^-T II J^-1
  const double t11 = L * i11 + M * i21, t12 = L * i12 + M * i22;
  const double t21 = M * i11 + N * i21, t22 = M * i12 + N * i22;
  const double h11 = i11 * t11 + i21 * t21, h12 = i11 * t12 + i21 * t22, h22 = i12 * t12 + i22 * t22;
  return {h11 / 2, h12 / 2, h22 / 2};
}

}  // namespace curved::extrinsic
