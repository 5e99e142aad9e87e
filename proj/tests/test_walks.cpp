#include <gtest/gtest.h>

#include <cmath>

#include "curved/walks.hpp"
#include "oracles.hpp"

using namespace curved;
using namespace curved::walks;

namespace {

double max_orthogonality_defect(const Mat3& m) {
  const Mat3 id = m * m.transposed();
  double worst = 0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) worst = std::max(worst, std::abs(id(i, j) - (i == j ? 1.0 : 0.0)));
  return worst;
}

}  // namespace

TEST(RectangleWalk, IdentityWhenEitherSideIsZero) {
  EXPECT_LT(sphere_rectangle_walk(0.0, 0.7).max_abs_diff(Mat3::identity()), 1e-15);
  EXPECT_LT(sphere_rectangle_walk(0.7, 0.0).max_abs_diff(Mat3::identity()), 1e-15);
}

TEST(RectangleWalk, IsARotation) {
  oracle::Gen g(81);
  for (int n = 0; n < 200; ++n) {
    const Mat3 m = sphere_rectangle_walk(g.uniform(-2, 2), g.uniform(-2, 2));
    EXPECT_LT(max_orthogonality_defect(m), 1e-12);
    EXPECT_NEAR(m.determinant(), 1.0, 1e-12);
  }
}

TEST(RectangleWalk, EntryOneThreeMatchesClosedForm) {
  oracle::Gen g(82);
  for (int n = 0; n < 100; ++n) {
    const double a = g.uniform(-2, 2), b = g.uniform(-2, 2);
    const double expect = std::sin(a) * std::sin(b) * (1 - (1 - std::cos(a)) * (1 - std::cos(b)));
    EXPECT_NEAR(sphere_rectangle_walk(a, b)(0, 2), expect, 1e-12);
  }
}

TEST(RectangleWalk, SeriesAtSmallSides) {
  // Taylor expansion through fourth order in the side lengths.
  const double a = 0.05, b = 0.035;
  const Mat3 m = sphere_rectangle_walk(a, b);
  const double corner = a * b - (a * a * a * b + a * b * b * b) / 6;
  const double expect[3][3] = {{1 - a * a * b * b / 2, -a * b * b / 2, corner},
                               {a * b * b / 2, 1, a * a * b / 2},
                               {-corner, -a * a * b / 2, 1 - a * a * b * b / 2}};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) EXPECT_NEAR(m(i, j), expect[i][j], 1e-7) << i << "," << j;
}

TEST(RectangleWalk, ReplayOnSphereFollowsTheMatrix) {
  const charts::Chart c = charts::sphere();
  oracle::Gen g(83);
  for (int n = 0; n < 5; ++n) {
    const double a = g.uniform(0.05, 0.6), b = g.uniform(0.05, 0.6);
    const ReplayResult r = replay(c, rectangle_program(a, b), {{kPi / 2, -kPi / 2}, {0, 1}});
    const Vector3 predicted = sphere_rectangle_walk(a, b) * Vector3{0, -1, 0};
    EXPECT_LT(norm(c.embed(r.end.base) - predicted), 1e-8);
  }
}

TEST(CircleWalk, ClosedFormsAndAsymptotics) {
  const CircleWalk w = sphere_circle_walk(1e-2);
  EXPECT_NEAR(w.drift / 1e-6 / kPi, 1.0, 1e-3);
  EXPECT_NEAR(w.nose_rotation / 1e-4 / kPi, 1.0, 1e-4);
  const double alpha = 0.8;
  EXPECT_DOUBLE_EQ(sphere_circle_walk(alpha).nose_rotation, kTwoPi * (1 - std::cos(alpha)));
  EXPECT_THROW(sphere_circle_walk(0.0), DomainError);
  EXPECT_THROW(sphere_circle_walk(kPi / 2), DomainError);
}

TEST(CircleWalk, RotationIsTheCapDefect) {
  // Polygon inscribed in the latitude circle: its defect approaches the cap area.
  const charts::Chart c = charts::sphere();
  const double alpha = 0.4;
  const Mat3 tilt = axis_rotation({0, 1, 0}, kPi / 2);  // move the cap centre to the equator
  std::vector<Vec2> v;
  for (int k = 0; k < 24; ++k) {
    const double phi = kTwoPi * k / 24;
    const Vector3 p = tilt * Vector3{std::sin(alpha) * std::cos(phi), std::sin(alpha) * std::sin(phi), std::cos(alpha)};
    v.push_back({std::acos(p.z), std::atan2(p.y, p.x)});
  }
  const auto poly = charts::make_polygon(c, v, 200);
  const double defect = std::abs(charts::polygon_defect(c, poly));
  EXPECT_NEAR(defect, sphere_circle_walk(alpha).nose_rotation, 0.02);
}

TEST(Program, TextRoundTrip) {
  const WalkProgram p{forward(1.5), turn(-0.25), sideways(0.1, false), sideways(2, true)};
  const std::string text = format_program(p);
  EXPECT_EQ(text, "F 1.5\nT -0.25\nS 0.10000000000000001 R\nS 2 L\n");
  EXPECT_EQ(format_program(parse_program(text)), text);
  EXPECT_EQ(parse_program("# comment\n\nF 1\n").size(), 1u);
  EXPECT_THROW(parse_program("F -1\n"), DomainError);
  EXPECT_THROW(parse_program("S 1 X\n"), DomainError);
  EXPECT_THROW(parse_program("F 1 2\n"), DomainError);
  EXPECT_THROW(parse_program("Q 1\n"), DomainError);
}

TEST(Replay, FlatSquareCloses) {
  const charts::Chart c = charts::plane();
  const ReplayResult r = replay(c, square_program(1.0), {{0, 0}, {1, 0}});
  EXPECT_LT(r.displacement, 1e-9);
  EXPECT_NEAR(r.nose_angle_change, 0.0, 1e-9);
  const ReplayResult rect = replay(c, rectangle_program(2, 3), {{1, 1}, {0, 1}});
  EXPECT_LT(rect.displacement, 1e-9);
}

TEST(Replay, SphereSquareNoseTracksArea) {
  const charts::Chart c = charts::sphere();
  const double s = 0.1;
  const ReplayResult r = replay(c, square_program(s), {{kPi / 2, 0}, {0, 1}});
  EXPECT_NEAR(r.nose_angle_change / (s * s), 1.0, 5e-2);
  EXPECT_LT(r.displacement, 10 * s * s * s);
}

TEST(Replay, ScalingLaws) {
  const charts::Chart c = charts::sphere();
  const WalkProgram base = square_program(1.0);
  const charts::TangentVector start{{kPi / 2, 0}, {0, 1}};
  const ReplayResult big = replay(c, scaled(base, 1e-1), start);
  const ReplayResult small = replay(c, scaled(base, 1e-2), start);
  const double nose_ratio = big.nose_angle_change / small.nose_angle_change / 1e2;
  const double disp_ratio = big.displacement / small.displacement / 1e3;
  EXPECT_GT(nose_ratio, 1 / 1.5);
  EXPECT_LT(nose_ratio, 1.5);
  EXPECT_GT(disp_ratio, 1 / 1.5);
  EXPECT_LT(disp_ratio, 1.5);
}

TEST(Replay, OctantWalkWithRightTurnsClosesAfterThreeSteps) {
  for (double R : {1.0, 6371.0}) {
    const charts::Chart c = charts::sphere(R);
    const Mat3 tilt = axis_rotation({1, -1, 0}, -0.7);
    const Vector3 A = tilt * Vector3{1, 0, 0}, B = tilt * Vector3{0, 0, 1};
    const Vec2 a{std::acos(A.z), std::atan2(A.y, A.x)}, b{std::acos(B.z), std::atan2(B.y, B.x)};
    const Vec2 heading = c.unit(a, charts::geodesic_between(c, a, b).front().dx);
    const double quarter = kPi * R / 2;
    const WalkProgram p{forward(quarter), turn(-kPi / 2), forward(quarter), turn(-kPi / 2), forward(quarter)};
    const ReplayResult r = replay(c, p, {a, heading});
    EXPECT_LT(r.displacement / R, 1e-9) << R;
  }
}

TEST(Replay, LeavingTheChartCarriesThePartialTrace) {
  const charts::Chart c = charts::plane(1.0);
  try {
    replay(c, {forward(0.5), forward(2.0)}, {{0, 0}, {1, 0}});
    FAIL() << "expected TruncatedWalk";
  } catch (const TruncatedWalk& e) {
    EXPECT_GT(e.partial_trace.size(), 2u);
    EXPECT_LE(e.partial_trace.back().x.x, 1.0);
  }
  EXPECT_THROW(replay(c, {forward(0.1)}, {{0, 0}, {2, 0}}), DomainError);
}
