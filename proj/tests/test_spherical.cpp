#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "curved/random.hpp"
#include "curved/spherical.hpp"
#include "oracles.hpp"

using namespace curved;
using namespace curved::sphere;

namespace {

SpherePoint P(double x, double y, double z) { return SpherePoint::from({x, y, z}); }

/// Vertices C = (1,0,0), A = (cos b, sin b, 0), B = (cos a, 0, sin a).
struct RightTriangleVertices {
  Vector3 A, B, C;
};
RightTriangleVertices right_vertices(double a, double b) {
  return {{std::cos(b), std::sin(b), 0}, {std::cos(a), 0, std::sin(a)}, {1, 0, 0}};
}

}  // namespace

TEST(SpherePoint, RejectsOffSphere) {
  EXPECT_THROW(SpherePoint(Vector3{1, 1, 0}), DomainError);
  EXPECT_NO_THROW(SpherePoint(Vector3{0, 0, 1}));
}

TEST(Distance, Examples) {
  EXPECT_DOUBLE_EQ(distance(P(1, 0, 0), P(0, 1, 0)), kPi / 2);
  EXPECT_EQ(distance(P(0.3, 0.4, 0.5), P(0.3, 0.4, 0.5)), 0.0);
  const SpherePoint p = P(0.3, -0.4, 0.5);
  EXPECT_DOUBLE_EQ(distance(p, p.antipode()), kPi);
}

TEST(Distance, MatchesAtan2Oracle) {
  oracle::Gen g(21);
  for (int i = 0; i < 1000; ++i) {
    const Vector3 a = g.unit(), b = g.unit();
    EXPECT_NEAR(distance(SpherePoint(a), SpherePoint(b)), oracle::sphere_distance(a, b), 1e-7);
  }
}

TEST(GreatCircle, ThroughTwoPoints) {
  EXPECT_EQ(great_circle_through(P(1, 0, 0), P(0, 1, 0)).normal, (Vector3{0, 0, 1}));
  EXPECT_THROW(great_circle_through(P(1, 0, 0), P(-1, 0, 0)), DegenerateInput);
  EXPECT_THROW(great_circle_through(P(1, 0, 0), P(1, 0, 0)), DegenerateInput);
  const double a = 0.7, b = 0.4;
  const GreatCircle k = great_circle_through(P(std::cos(b), std::sin(b), 0), P(std::cos(a), 0, std::sin(a)));
  const Vector3 expect = normalize(Vector3{std::sin(a) * std::sin(b), -std::sin(a) * std::cos(b), -std::cos(a) * std::sin(b)});
  EXPECT_LT(norm(k.normal - expect), 1e-15);
}

TEST(Incidence, Examples) {
  EXPECT_TRUE(incident(P(1, 0, 0), GreatCircle({0, 0, 1})));
  EXPECT_FALSE(incident(P(0, 0, 1), GreatCircle({0, 0, 1})));
  oracle::Gen g(22);
  for (int i = 0; i < 1000; ++i) {
    const SpherePoint p(g.unit()), q(g.unit());
    const GreatCircle k = great_circle_through(p, q);
    EXPECT_TRUE(incident(p, k));
    EXPECT_TRUE(incident(q, k));
  }
}

TEST(Duality, InvolutionAndIncidencePreservation) {
  const GreatCircle eq = dual(P(0, 0, 1));
  EXPECT_EQ(eq.normal, (Vector3{0, 0, 1}));
  oracle::Gen g(23);
  for (int i = 0; i < 1000; ++i) {
    const SpherePoint p(g.unit());
    EXPECT_EQ(dual(dual(p)).coords, p.coords);
    // a circle through p, and the dual statement
    const GreatCircle s = great_circle_through(p, SpherePoint(g.unit()));
    ASSERT_TRUE(incident(p, s));
    EXPECT_TRUE(incident(dual(s), dual(p)));
  }
}

TEST(AngleBetween, Examples) {
  EXPECT_DOUBLE_EQ(angle_between(GreatCircle({0, 0, 1}), GreatCircle({0, 1, 0})), kPi / 2);
  EXPECT_NEAR(angle_between(GreatCircle({0, 0, 1}), GreatCircle({0, std::sin(0.3), std::cos(0.3)})), 0.3, 1e-15);
  EXPECT_THROW(angle_between(GreatCircle({0, 0, 1}), GreatCircle({0, 0, -1})), DegenerateInput);
  oracle::Gen g(24);
  for (int i = 0; i < 100; ++i) {
    const GreatCircle k1(g.unit()), k2(g.unit());
    EXPECT_NEAR(angle_between(k1, k2), distance(dual(k1), dual(k2)), 1e-15);
  }
}

TEST(DualTriangle, OctantIsSelfDualAndInvolution) {
  const SphericalTriangle oct{kPi / 2, kPi / 2, kPi / 2, kPi / 2, kPi / 2, kPi / 2};
  const SphericalTriangle d = dual_triangle(oct);
  EXPECT_DOUBLE_EQ(d.a, kPi / 2);
  EXPECT_DOUBLE_EQ(d.alpha, kPi / 2);
  oracle::Gen g(25);
  for (int i = 0; i < 200; ++i) {
    const SpherePoint A(g.unit()), B(g.unit()), C(g.unit());
    const SphericalTriangle t = measure_triangle(A, B, C);
    const SphericalTriangle dd = dual_triangle(dual_triangle(t));
    EXPECT_NEAR(dd.a, t.a, 1e-14);
    EXPECT_NEAR(dd.gamma, t.gamma, 1e-14);
  }
}

TEST(DualTriangle, MatchesTheDualConstruction) {
  // The polar triangle's vertices are the poles of the sides; its sides are pi - angles.
  oracle::Gen g(26);
  for (int i = 0; i < 200; ++i) {
    Vector3 a = g.unit(), b = g.unit(), c = g.unit();
    if (dot(a, cross(b, c)) < 0) std::swap(b, c);
    const Vector3 A2 = normalize(cross(b, c)), B2 = normalize(cross(c, a)), C2 = normalize(cross(a, b));
    const SphericalTriangle t = measure_triangle(SpherePoint(a), SpherePoint(b), SpherePoint(c));
    const SphericalTriangle polar = measure_triangle(SpherePoint(A2), SpherePoint(B2), SpherePoint(C2));
    const SphericalTriangle d = dual_triangle(t);
    EXPECT_NEAR(polar.a, d.a, 1e-8);
    EXPECT_NEAR(polar.b, d.b, 1e-8);
    EXPECT_NEAR(polar.alpha, d.alpha, 1e-8);
  }
}

TEST(RightTriangle, HalfRadianLegsAgainstFrozenAndCoordinates) {
  const SphericalTriangle t = solve_right_triangle(0.5, 0.5);
  // mpmath, 30 digits
  EXPECT_NEAR(t.c, 0.691718240721045852506448166035, 1e-15);
  EXPECT_NEAR(t.alpha, 0.850505507928404412942945398466, 1e-15);
  const auto v = right_vertices(0.5, 0.5);
  EXPECT_NEAR(t.c, oracle::sphere_distance(v.A, v.B), 1e-12);
  EXPECT_NEAR(t.alpha, oracle::sphere_angle(v.A, v.B, v.C), 1e-12);
  EXPECT_NEAR(t.beta, oracle::sphere_angle(v.B, v.C, v.A), 1e-12);
  EXPECT_NEAR(oracle::sphere_angle(v.C, v.A, v.B), kPi / 2, 1e-15);
}

TEST(RightTriangle, RangeAndLimits) {
  EXPECT_THROW(solve_right_triangle(kPi / 2, kPi / 2), DomainError);
  EXPECT_THROW(solve_right_triangle(0.0, 0.3), DomainError);
  const SphericalTriangle near = solve_right_triangle(kPi / 2 - 1e-3, kPi / 2 - 1e-3);
  const auto v = right_vertices(kPi / 2 - 1e-3, kPi / 2 - 1e-3);
  EXPECT_NEAR(near.c, kPi / 2, 1e-5);
  EXPECT_NEAR(near.alpha, oracle::sphere_angle(v.A, v.B, v.C), 1e-9);
  const SphericalTriangle small = solve_right_triangle(1e-3, 1e-3);
  EXPECT_NEAR(small.c * small.c / 2e-6, 1.0, 1e-5);
}

TEST(RightTriangle, PythagorasOnRandomEmbeddings) {
  oracle::Gen g(27);
  for (int i = 0; i < 1000; ++i) {
    const double a = g.uniform(1e-3, kPi / 2 - 1e-3), b = g.uniform(1e-3, kPi / 2 - 1e-3);
    const auto v = right_vertices(a, b);
    const SphericalTriangle t = measure_triangle(SpherePoint(v.A), SpherePoint(v.B), SpherePoint(v.C));
    EXPECT_NEAR(std::cos(t.c) - std::cos(t.a) * std::cos(t.b), 0.0, 1e-12);
  }
}

TEST(LawOfCosines, Examples) {
  EXPECT_NEAR(law_of_cosines_side(1.0, 1.2, 0.9), 0.818521599249432411896454212212, 1e-15);
  EXPECT_NEAR(std::cos(law_of_cosines_side(0.7, 0.4, kPi / 2)), std::cos(0.7) * std::cos(0.4), 1e-15);
  EXPECT_LT(law_of_cosines_side(0.8, 0.8, 1e-9), 1e-8);
  oracle::Gen g(28);
  for (int i = 0; i < 500; ++i) {
    const Vector3 A = g.unit(), B = g.unit(), C = g.unit();
    const double a = oracle::sphere_distance(B, C), b = oracle::sphere_distance(C, A);
    const double gamma = oracle::sphere_angle(C, A, B);
    if (gamma < 1e-3 || gamma > kPi - 1e-3) continue;
    EXPECT_NEAR(law_of_cosines_side(a, b, gamma), oracle::sphere_distance(A, B), 1e-10);
  }
}

TEST(LawOfSines, Diagnostic) {
  const SphericalTriangle oct{kPi / 2, kPi / 2, kPi / 2, kPi / 2, kPi / 2, kPi / 2};
  EXPECT_LT(law_of_sines_check(oct), 1e-12);
  oracle::Gen g(29);
  for (int i = 0; i < 200; ++i) {
    const SphericalTriangle t = measure_triangle(SpherePoint(g.unit()), SpherePoint(g.unit()), SpherePoint(g.unit()));
    EXPECT_LT(law_of_sines_check(t), 1e-9);
    SphericalTriangle bad = t;
    bad.alpha += 0.1;
    if (bad.alpha < kPi - 0.2 && std::abs(std::cos(t.alpha)) > 0.1 && std::sin(t.a) > 0.1) {
      EXPECT_GT(law_of_sines_check(bad), 1e-3);
    }
  }
}

TEST(Defect, OctantAndSmall) {
  const SphericalTriangle oct{kPi / 2, kPi / 2, kPi / 2, kPi / 2, kPi / 2, kPi / 2};
  EXPECT_DOUBLE_EQ(triangle_defect(oct), kPi / 2);
  const SphericalTriangle s = solve_right_triangle(1e-3, 1e-3);
  EXPECT_NEAR(triangle_defect(s) / 5e-7, 1.0, 2e-2);
  const auto v = right_vertices(1e-3, 1e-3);
  EXPECT_NEAR(triangle_defect(s) / oracle::sphere_triangle_area(v.A, v.B, v.C), 1.0, 2e-2);
}

TEST(Defect, EqualsAreaFormulaAndMonteCarlo) {
  oracle::Gen g(30);
  for (int i = 0; i < 200; ++i) {
    const Vector3 A = g.unit(), B = g.unit(), C = g.unit();
    const SphericalTriangle t = measure_triangle(SpherePoint(A), SpherePoint(B), SpherePoint(C));
    if (std::min({t.alpha, t.beta, t.gamma}) < 1e-3) continue;
    EXPECT_NEAR(triangle_defect(t), oracle::sphere_triangle_area(A, B, C), 1e-8);
  }
  // one Monte Carlo instance with the library's estimator
  const Vector3 A{1, 0, 0}, B{0, 1, 0}, C = normalize(Vector3{1, 1, 1});
  const SphericalTriangle t = measure_triangle(SpherePoint(A), SpherePoint(B), SpherePoint(C));
  const Vector3 nab = cross(A, B), nbc = cross(B, C), nca = cross(C, A);
  const Estimate e = sphere_region_area(
      [&](const Vector3& x) { return dot(x, nab) > 0 && dot(x, nbc) > 0 && dot(x, nca) > 0; }, 1000000, 3);
  EXPECT_NEAR(triangle_defect(t), e.value, 3 * e.standard_error);
}

TEST(Defect, AdditiveUnderCevianSplit) {
  oracle::Gen g(31);
  for (int i = 0; i < 200; ++i) {
    const Vector3 A = g.unit(), B = g.unit(), C = g.unit();
    const double s = g.uniform(0.1, 0.9);
    const Vector3 D = normalize(B * (1 - s) + C * s);  // on arc BC
    auto area = [](const Vector3& x, const Vector3& y, const Vector3& z) {
      return triangle_defect(measure_triangle(SpherePoint(x), SpherePoint(y), SpherePoint(z)));
    };
    const SphericalTriangle whole = measure_triangle(SpherePoint(A), SpherePoint(B), SpherePoint(C));
    if (std::min({whole.alpha, whole.beta, whole.gamma}) < 1e-2) continue;
    EXPECT_NEAR(area(A, B, D) + area(A, D, C), area(A, B, C), 1e-10);
  }
}

TEST(PolygonDefect, Examples) {
  const std::vector<double> square(4, kPi / 2);
  EXPECT_DOUBLE_EQ(polygon_defect(square), 0.0);
  const std::vector<double> lune{1.0, 1.0};
  EXPECT_THROW(polygon_defect(lune), DomainError);
  // a convex quadrilateral split along a diagonal
  const Vector3 q0 = normalize(Vector3{0.3, 0.1, 1}), q1 = normalize(Vector3{-0.1, 0.35, 1}),
                q2 = normalize(Vector3{-0.4, -0.1, 1}), q3 = normalize(Vector3{0.1, -0.5, 1});
  const std::vector<double> angles{oracle::sphere_angle(q0, q1, q3), oracle::sphere_angle(q1, q2, q0),
                                   oracle::sphere_angle(q2, q3, q1), oracle::sphere_angle(q3, q0, q2)};
  const double t1 = oracle::sphere_triangle_area(q0, q1, q2), t2 = oracle::sphere_triangle_area(q0, q2, q3);
  EXPECT_NEAR(polygon_defect(angles), t1 + t2, 1e-12);
}

TEST(CircleMeasures, Examples) {
  const auto eq = circle_measures(kPi / 2);
  EXPECT_DOUBLE_EQ(eq.circumference, kTwoPi);
  EXPECT_NEAR(eq.area, kTwoPi, 1e-15);
  const auto tiny = circle_measures(1e-5);
  EXPECT_NEAR(tiny.circumference / 1e-5, kTwoPi, 1e-9);
  EXPECT_NEAR(tiny.area / 1e-10, kPi, 1e-6);
  EXPECT_NEAR(circle_measures(kPi - 1e-9).area, 4 * kPi, 1e-6);
  EXPECT_THROW(circle_measures(0.0), DomainError);
  EXPECT_THROW(circle_measures(kPi), DomainError);
}

TEST(Rescale, FlatLimitAndIdentity) {
  EXPECT_NEAR(circle_measures(1.0, 1e4).circumference / kTwoPi, 1.0, 1e-6);
  const auto unit = circle_measures(0.8);
  const auto same = circle_measures(0.8, 1.0);
  EXPECT_EQ(unit.circumference, same.circumference);
  EXPECT_EQ(unit.area, same.area);
  EXPECT_THROW(rescale(QuantityKind::Length, 1.0, 0.0), DomainError);
  // a triangle on the sphere of radius R: its defect equals area / R^2
  const double R = 3.0;
  const SphericalTriangle t = solve_right_triangle(0.4, 0.6);
  const double area_on_R = restore(QuantityKind::Area, triangle_defect(t), R);
  EXPECT_NEAR(triangle_defect(t), area_on_R / (R * R), 1e-15);
  EXPECT_EQ(rescale(QuantityKind::Angle, 0.3, R), 0.3);
}

TEST(CircleCurvature, TanFormula) {
  EXPECT_NEAR(geodesic_circle_radius_of_curvature(kPi / 4), 1.0, 1e-15);
  EXPECT_NEAR(geodesic_circle_radius_of_curvature(1e-6) / 1e-6, 1.0, 1e-11);
  EXPECT_TRUE(std::isinf(geodesic_circle_radius_of_curvature(kPi / 2)));
  EXPECT_GT(geodesic_circle_radius_of_curvature(kPi / 2 - 1e-6), 1e5);
  EXPECT_THROW(geodesic_circle_radius_of_curvature(2.0), DomainError);
}

TEST(Equidistant, DistanceAndComposition) {
  oracle::Gen g(33);
  for (int i = 0; i < 20; ++i) {
    const GreatCircle k(g.unit());
    const double d = g.uniform(0.05, 1.4);
    for (const SpherePoint& p : equidistant(k, d, 64)) EXPECT_NEAR(distance_to_circle(p, k), d, 1e-10);
  }
  EXPECT_THROW(equidistant(GreatCircle({0, 0, 1}), kPi / 2, 8), DomainError);
  // equidistant of the equidistant: points at d' further from the first lie at d + d' from k
  const GreatCircle k({0, 0, 1});
  const double d = 0.3, d2 = 0.5;
  const auto first = equidistant(k, d, 32);
  const auto second = equidistant(k, d + d2, 32);
  for (std::size_t i = 0; i < first.size(); ++i) {
    // each point of the first moved d2 further along its meridian
    const Vector3 pole = dual(k).coords;
    const Vector3 t = tangent_toward(first[i], SpherePoint(pole));
    const SpherePoint moved = exp_map(first[i], t, d2);
    EXPECT_NEAR(distance_to_circle(moved, k), d + d2, 1e-12);
    EXPECT_NEAR(distance_to_circle(second[i], k), d + d2, 1e-12);
  }
}

TEST(Equidistant, MeetsPerpendicularGeodesicsAtRightAngles) {
  const GreatCircle k({0, 0, 1});
  const auto pts = equidistant(k, 0.6, 360);
  for (std::size_t i = 1; i + 1 < pts.size(); i += 37) {
    const Vector3 along = pts[i + 1].coords - pts[i - 1].coords;  // tangent of the equidistant at i
    const Vector3 meridian = tangent_toward(pts[i], SpherePoint({0, 0, 1}));
    EXPECT_NEAR(dot(normalize(along), meridian), 0.0, 1e-9);
  }
}

TEST(FlatLimit, QuadraticDecay) {
  std::vector<double> sizes{1e-2, 1e-3, 1e-4}, err;
  for (double s : sizes) {
    const SphericalTriangle t = solve_right_triangle(s, 0.7 * s);
    const double planar = std::hypot(s, 0.7 * s);
    err.push_back(std::abs(t.c - planar) / planar);
  }
  EXPECT_NEAR(oracle::convergence_order(sizes, err), 2.0, 0.1);
}
