#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "curved/projections.hpp"
#include "oracles.hpp"

using namespace curved;
using namespace curved::projections;
using sphere::SpherePoint;
using hyperbolic::HPoint;

namespace {

std::vector<Vector3> great_arc(const Vector3& p, const Vector3& q, double from, double to, int n) {
  const Vector3 t = normalize(q - p * dot(p, q));
  std::vector<Vector3> out;
  for (int k = 0; k <= n; ++k) {
    const double s = from + (to - from) * k / n;
    out.push_back(p * std::cos(s) + t * std::sin(s));
  }
  return out;
}

std::vector<Vector3> h_geodesic(const Vector3& a, const Vector3& b, double from, double to, int n) {
  const double c = -hyperbolic::linner(a, b);
  const Vector3 t = (b - a * c) / std::sqrt(c * c - 1);
  std::vector<Vector3> out;
  for (int k = 0; k <= n; ++k) {
    const double s = from + (to - from) * k / n;
    out.push_back(a * std::cosh(s) + t * std::sinh(s));
  }
  return out;
}

Vector3 random_lower(oracle::Gen& g) {
  Vector3 v = g.unit();
  while (v.z > -0.3) v = g.unit();
  return v;
}

Vector3 random_h(oracle::Gen& g, double r) { return HPoint::polar(g.uniform(0, r), g.uniform(0, kTwoPi)).coords; }

auto stereo = [](const Vector3& x) { return stereographic(SpherePoint::from(x)); };
auto gnomon = [](const Vector3& x) { return gnomonic(SpherePoint::from(x)); };
auto cyl = [](const Vector3& x) { return cylindrical_equal_area(SpherePoint::from(x)); };
auto disk = [](const Vector3& x) { return poincare(HPoint::from(x)); };
auto kl = [](const Vector3& x) { return klein(HPoint::from(x)); };

}  // namespace

TEST(Stereographic, Examples) {
  const Vec2 s = stereographic(SpherePoint::from({0, 0, -1}));
  EXPECT_EQ(s.x, 0.0);
  EXPECT_EQ(s.y, 0.0);
  for (double phi : {0.0, 1.0, 2.5, -2.0}) {
    EXPECT_NEAR(norm(stereographic(SpherePoint::from({std::cos(phi), std::sin(phi), 0}))), 2.0, 1e-15);
  }
  EXPECT_THROW(stereographic(SpherePoint::from({0, 0, 1})), DomainError);
}

TEST(Stereographic, RoundTrip) {
  oracle::Gen g(91);
  for (int n = 0; n < 1000; ++n) {
    Vector3 v = g.unit();
    if (v.z > 0.99) continue;
    EXPECT_LT(norm(inverse_stereographic(stereographic(SpherePoint::from(v))).coords - v), 1e-12);
  }
}

TEST(Stereographic, GreatCirclesBecomeCirclesOrLines) {
  oracle::Gen g(92);
  for (int n = 0; n < 100; ++n) {
    const Vector3 p = random_lower(g), q = random_lower(g);
    std::vector<Vec2> img;
    for (const Vector3& x : great_arc(p, q, -1.0, 1.0, 40)) img.push_back(stereo(x));
    const Vector3 normal = normalize(cross(p, q));
    if (std::abs(normal.z) < 1e-6) {
      EXPECT_LT(line_fit_residual(img), 1e-9);
    } else {
      const CircleFit f = fit_circle(img);
      EXPECT_LT(f.residual, 1e-9 * std::max(1.0, f.radius));
    }
  }
}

TEST(Stereographic, ConformalOnCap) {
  const DistortionReport r = distortion_meter(SphereSurface{}, stereo, cap_sampler({0, 0, -1}, 0.5), 1000, 1);
  EXPECT_LT(r.max_angle_error, 1e-7);
  EXPECT_GE(r.length_deviation(), 1e-3);
}

TEST(Gnomonic, StraightensGreatCircles) {
  EXPECT_EQ(norm(gnomonic(SpherePoint::from({0, 0, -1}))), 0.0);
  oracle::Gen g(93);
  for (int n = 0; n < 100; ++n) {
    const Vector3 p = random_lower(g), q = random_lower(g);
    std::vector<Vec2> img;
    for (const Vector3& x : great_arc(p, q, 0.0, oracle::sphere_distance(p, q), 30)) img.push_back(gnomon(x));
    EXPECT_LT(line_fit_residual(img), 1e-9);
  }
  EXPECT_THROW(gnomonic(SpherePoint::from({1, 0, 0})), DomainError);
  EXPECT_THROW(gnomonic(SpherePoint::from({0, 0.6, 0.8})), DomainError);
  const SpherePoint back = inverse_gnomonic(gnomonic(SpherePoint::from({0.3, -0.2, -0.9})));
  EXPECT_LT(norm(back.coords - normalize(Vector3{0.3, -0.2, -0.9})), 1e-15);
}

TEST(Gnomonic, NotConformalNorLengthTrue) {
  const DistortionReport r = distortion_meter(SphereSurface{}, gnomon, cap_sampler({0, 0, -1}, 0.5), 1000, 2);
  EXPECT_GT(r.max_angle_error, 1e-2);
  EXPECT_GE(r.length_deviation(), 1e-3);
}

TEST(CylindricalEqualArea, EquatorAndGrid) {
  const int N = 1000;
  double length = 0;
  Vec2 prev = cyl({-1, -1.2246467991473532e-16, 0});
  for (int k = 1; k <= N; ++k) {
    const double phi = -kPi + kTwoPi * k / N;
    const Vec2 x = cyl({std::cos(phi), std::sin(phi), 0});
    length += norm(x - prev);
    prev = x;
  }
  EXPECT_NEAR(length, kTwoPi, 1e-12);
  // meridians go to vertical lines, parallels to horizontal lines
  const Vec2 a = cyl(SpherePoint::from_angles(0.4, 1.0).coords), b = cyl(SpherePoint::from_angles(1.9, 1.0).coords);
  EXPECT_NEAR(a.x, b.x, 1e-15);
  const Vec2 c = cyl(SpherePoint::from_angles(0.4, -2.0).coords);
  EXPECT_NEAR(a.y, c.y, 1e-15);
  EXPECT_THROW(cyl({0, 0, 1}), DegenerateInput);
}

TEST(CylindricalEqualArea, PreservesAreaByMonteCarlo) {
  // Pull a uniform sample of the image rectangle back and count hits in a cap.
  const double alpha = 0.5;
  const Vector3 centre{1, 0, 0};
  Rng rng(5);
  MeanAccumulator acc;
  for (int i = 0; i < 400000; ++i) {
    const Vec2 X{rng.uniform(-kPi, kPi), rng.uniform(-1.0, 1.0)};
    acc.add(dot(inverse_cylindrical_equal_area(X).coords, centre) > std::cos(alpha) ? 4 * kPi : 0.0);
  }
  const double exact = kTwoPi * (1 - std::cos(alpha));
  EXPECT_NEAR(acc.mean() / exact, 1.0, 3 * acc.standard_error() / exact);
}

TEST(CylindricalEqualArea, EquiarealButNeitherConformalNorLengthTrue) {
  const DistortionReport r = distortion_meter(SphereSurface{}, cyl, cap_sampler({1, 0, 0}, 0.5), 1000, 3);
  EXPECT_NEAR(r.min_area_ratio, 1.0, 1e-8);
  EXPECT_NEAR(r.max_area_ratio, 1.0, 1e-8);
  EXPECT_GT(r.max_angle_error, 1e-2);
  EXPECT_GE(r.length_deviation(), 1e-3);
}

TEST(Poincare, ExamplesAndRoundTrip) {
  EXPECT_EQ(norm(poincare(HPoint::origin())), 0.0);
  EXPECT_EQ(norm(klein(HPoint::origin())), 0.0);
  oracle::Gen g(94);
  for (int n = 0; n < 200; ++n) {
    const Vector3 v = random_h(g, 3.0);
    EXPECT_LT(norm(disk(v)), 1.0);
    EXPECT_LT(norm(kl(v)), 1.0);
    EXPECT_LT(norm(inverse_poincare(disk(v)).coords - v) / v.z, 1e-12);
    EXPECT_LT(norm(inverse_klein(kl(v)).coords - v) / v.z, 1e-12);
  }
  EXPECT_THROW(inverse_poincare({1, 0}), DomainError);
  EXPECT_THROW(inverse_klein({0.8, 0.8}), DomainError);
}

TEST(Poincare, ConformalWithOrthogonalCircles) {
  const DistortionReport r =
      distortion_meter(HyperboloidSurface{}, disk, hyperbolic_disk_sampler(2.0), 1000, 4);
  EXPECT_LT(r.max_angle_error, 1e-7);
  oracle::Gen g(95);
  for (int n = 0; n < 100; ++n) {
    const Vector3 a = random_h(g, 2.0), b = random_h(g, 2.0);
    std::vector<Vec2> img;
    for (const Vector3& x : h_geodesic(a, b, -1.0, 2.0, 40)) img.push_back(disk(x));
    if (std::abs(cross(disk(a), disk(b))) < 1e-6) continue;  // diameter
    const CircleFit f = fit_circle(img);
    EXPECT_LT(f.residual, 1e-7 * std::max(1.0, f.radius));
    EXPECT_NEAR(norm(f.centre) * norm(f.centre), f.radius * f.radius + 1.0, 1e-7 * (1 + f.radius * f.radius));
  }
}

TEST(Klein, StraightensGeodesicsButNotAngles) {
  oracle::Gen g(96);
  for (int n = 0; n < 100; ++n) {
    const Vector3 a = random_h(g, 2.0), b = random_h(g, 2.0);
    std::vector<Vec2> img;
    for (const Vector3& x : h_geodesic(a, b, -1.0, 2.0, 40)) img.push_back(kl(x));
    EXPECT_LT(line_fit_residual(img), 1e-9);
  }
  const DistortionReport r = distortion_meter(HyperboloidSurface{}, kl, hyperbolic_disk_sampler(2.0), 500, 5);
  EXPECT_GT(r.max_angle_error, 1e-2);
}

TEST(DistortionMeter, IdentityOnFlatChart) {
  auto id = [](const Vector3& x) { return Vec2{x.x, x.y}; };
  auto sampler = [](Rng& rng) { return Vector3{rng.uniform(-1, 1), rng.uniform(-1, 1), 0}; };
  const DistortionReport r = distortion_meter(FlatSurface{}, id, sampler, 200, 6);
  EXPECT_LT(r.length_deviation(), 1e-9);
  EXPECT_LT(r.max_angle_error, 1e-9);
  EXPECT_NEAR(r.max_area_ratio, 1.0, 1e-9);
  EXPECT_EQ(r.samples, 200);
  EXPECT_THROW(distortion_meter(FlatSurface{}, id, sampler, 0, 6), DomainError);
}

TEST(Fits, CircleAndLine) {
  std::vector<Vec2> pts;
  for (int k = 0; k < 12; ++k) pts.push_back(Vec2{3, -1} + Vec2{std::cos(0.3 * k), std::sin(0.3 * k)} * 2.5);
  const CircleFit f = fit_circle(pts);
  EXPECT_NEAR(f.radius, 2.5, 1e-12);
  EXPECT_LT(norm(f.centre - Vec2{3, -1}), 1e-12);
  EXPECT_THROW(fit_circle({{0, 0}, {1, 1}, {2, 2}}), DegenerateInput);
  EXPECT_THROW(fit_circle({{0, 0}, {1, 1}}), DomainError);
  EXPECT_LT(line_fit_residual({{0, 1}, {1, 3}, {2, 5}}), 1e-15);
  EXPECT_NEAR(plane_angle({1, 0}, {0, -2}), kPi / 2, 1e-15);
}
