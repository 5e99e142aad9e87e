#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "curved/plane_curves.hpp"
#include "oracles.hpp"

using namespace curved;
using namespace curved::plane;

namespace {

PlaneCurve line() {
  PlaneCurve c;
  c.position = [](double t) { return Vec2{1 + 2 * t, -3 + t}; };
  c.d1 = [](double) { return Vec2{2, 1}; };
  c.d2 = [](double) { return Vec2{0, 0}; };
  c.t0 = -1;
  c.t1 = 1;
  return c;
}

/// r = 1 + eps sin(k t + phase): convex for small eps.
PlaneCurve wobbly(double eps, int k, double phase) {
  PlaneCurve c;
  c.position = [=](double t) {
    const double r = 1 + eps * std::sin(k * t + phase);
    return Vec2{r * std::cos(t), r * std::sin(t)};
  };
  c.t0 = 0;
  c.t1 = kTwoPi;
  c.closed = true;
  return c;
}

}  // namespace

TEST(OsculatingNormals, ParabolaVertex) {
  const PlaneCurve p = parabola(0.5);
  EXPECT_NEAR(osculating_radius_normals(p, 0.0, 1e-4), 1.0, 1e-6);
  // the centre sits at 1/(2a) + a h^2 exactly for the parabola
  EXPECT_NEAR(osculating_radius_normals(p, 0.0, 1e-2), 1.0 + 0.5e-4, 1e-12);
}

TEST(OsculatingNormals, CircleIsExactForAllH) {
  const PlaneCurve c = circle(2.5, {1, -1});
  for (double h : {1e-3, 0.1, 0.5, 1.0}) EXPECT_NEAR(osculating_radius_normals(c, 0.7, h), 2.5, 1e-12);
}

TEST(OsculatingNormals, EllipseVertices) {
  const double a = 2.0, b = 1.0;  // focal half-distance b
  const PlaneCurve e = ellipse(a, b);
  EXPECT_NEAR(osculating_radius_normals(e, 0.0, 1e-4) / ((a - b) * (a + b) / a), 1.0, 1e-6);
  EXPECT_NEAR(osculating_radius_normals(e, kPi / 2, 1e-4) / (a * a / std::sqrt(a * a - b * b)), 1.0, 1e-6);
}

TEST(OsculatingNormals, QuadraticConvergence) {
  const std::vector<double> hs{1e-2, 1e-3, 1e-4};
  std::vector<double> ep, ee;
  const PlaneCurve p = parabola(0.5);
  const PlaneCurve e = ellipse(2.0, 1.0);
  for (double h : hs) {
    ep.push_back(std::abs(osculating_radius_normals(p, 0.0, h) - 1.0));
    ee.push_back(std::abs(osculating_radius_normals(e, 0.0, h) - 1.5));
  }
  EXPECT_NEAR(oracle::convergence_order(hs, ep), 2.0, 0.1);
  EXPECT_NEAR(oracle::convergence_order(hs, ee), 2.0, 0.1);
}

TEST(OsculatingNormals, SignAndErrors) {
  const PlaneCurve c = circle(1.0);
  EXPECT_GT(osculating_radius_normals(c, 0.3, 1e-3), 0.0);
  EXPECT_LT(osculating_radius_normals(reversed(c), 0.3, 1e-3), 0.0);
  EXPECT_TRUE(std::isinf(osculating_radius_normals(line(), 0.0, 0.1)));
  EXPECT_THROW(osculating_radius_normals(c, 0.3, 0.0), DomainError);
  EXPECT_THROW(osculating_radius_normals(parabola(0.5, 1.0), 0.95, 0.1), DomainError);
  // an S-shaped cubic whose end normals cross ahead of one point and behind the other
  PlaneCurve s;
  s.position = [](double x) { return Vec2{x, 16 * x * x - 11 * x * x * x}; };
  s.d1 = [](double x) { return Vec2{1, 32 * x - 33 * x * x}; };
  s.t0 = -1;
  s.t1 = 2;
  EXPECT_THROW(osculating_radius_normals(s, 0.5, 0.5), NumericFailure);
}

TEST(AnalyticCurvature, Examples) {
  const PlaneCurve c = circle(1.0);
  for (double t : {0.0, 1.0, 4.0}) EXPECT_NEAR(signed_curvature_analytic(c, t), 1.0, 1e-15);
  EXPECT_EQ(signed_curvature_analytic(line(), 0.2), 0.0);
  EXPECT_NEAR(signed_curvature_analytic(parabola(0.5), 0.0), 1.0, 1e-15);
  EXPECT_NEAR(1.0 / signed_curvature_analytic(parabola(0.5), 0.0), osculating_radius_normals(parabola(0.5), 0.0, 1e-5),
              1e-9);
  PlaneCurve stopped = line();
  stopped.d1 = [](double) { return Vec2{0, 0}; };
  EXPECT_THROW(signed_curvature_analytic(stopped, 0.0), DomainError);
}

TEST(TotalCurvature, ArcChains) {
  EXPECT_EQ(total_curvature({{1.0, kTwoPi}}), kTwoPi);
  EXPECT_NEAR(total_curvature({{1.0 / 3.0, kTwoPi * 3.0}}), kTwoPi, 1e-15);
  // figure eight: a left circle then a right circle
  EXPECT_NEAR(total_curvature({{1.0, kTwoPi}, {-1.0, kTwoPi}}), 0.0, 1e-12);
  // stadium: straight, half circle, straight, half circle
  EXPECT_NEAR(total_curvature({{0, 2}, {1, kPi}, {0, 2}, {1, kPi}}), kTwoPi, 1e-12);
  EXPECT_THROW(total_curvature({{1.0, kPi}}), DomainError);
  EXPECT_THROW(total_curvature({}), DomainError);
}

TEST(TotalCurvature, Sampled) {
  EXPECT_NEAR(total_curvature_sampled(circle(1.3), 1000), kTwoPi, 1e-4);
  EXPECT_NEAR(total_curvature_sampled(ellipse(3, 2), 1000), kTwoPi, 1e-6);
  const double coarse = total_curvature_sampled(limacon(2.0, 1.0), 10000);
  const double fine = total_curvature_sampled(limacon(2.0, 1.0), 100000);
  EXPECT_NEAR(fine, 4 * kPi, 1e-3);
  EXPECT_NEAR(coarse, fine, 1e-3);
  EXPECT_THROW(total_curvature_sampled(parabola(1.0), 100), DomainError);
  EXPECT_THROW(total_curvature_sampled(circle(1.0), 8), DomainError);
}

TEST(TotalCurvature, RigidMotionAndReversal) {
  oracle::Gen g(51);
  const PlaneCurve base = ellipse(2.0, 1.5);
  const double t0 = total_curvature_sampled(base, 512);
  for (int i = 0; i < 50; ++i) {
    const PlaneCurve m = moved(base, g.uniform(-kPi, kPi), {g.uniform(-5, 5), g.uniform(-5, 5)});
    EXPECT_NEAR(total_curvature_sampled(m, 512), t0, 1e-12);
  }
  EXPECT_NEAR(total_curvature_sampled(reversed(base), 512), -t0, 1e-12);
  const ArcChain chain{{0.5, 1.0}, {-0.2, 2.0}, {1.0, 1.0}};
  EXPECT_NEAR(realize(chain).heading, 0.5 - 0.4 + 1.0, 1e-15);
}

TEST(Vertices, EllipseCircleAndPerturbed) {
  EXPECT_EQ(count_vertices(ellipse(2.0, 1.0), 720).count, 4);
  const VertexCount c = count_vertices(circle(1.0), 720);
  EXPECT_EQ(c.count, 0);
  EXPECT_TRUE(c.constant_curvature);
  oracle::Gen g(52);
  for (int i = 0; i < 20; ++i) {
    const PlaneCurve w = wobbly(g.uniform(0.005, 0.05), g.integer(2, 6), g.uniform(0, kTwoPi));
    EXPECT_GE(count_vertices(w, 2048).count, 4);
  }
}
