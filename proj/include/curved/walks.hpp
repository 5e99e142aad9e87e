#pragma once

#include <cmath>
#include <cstdio>
#include <istream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "curved/charts.hpp"
#include "curved/core.hpp"

// Turtle walks. On the sphere the rectangle and circle walks have closed
// forms; on any chart a program of forward steps, turns and sideways steps can
// be replayed with geodesics and parallel transport.

namespace curved::walks {

/// Walker-frame rotations for forward a, sideways b, backward a, sideways
/// back b, multiplied in that order.
inline Mat3 sphere_rectangle_walk(double a, double b) {
  Mat3 fwd, side;
  fwd.m = {{{std::cos(a), -std::sin(a), 0}, {std::sin(a), std::cos(a), 0}, {0, 0, 1}}};
  side.m = {{{1, 0, 0}, {0, std::cos(b), -std::sin(b)}, {0, std::sin(b), std::cos(b)}}};
  return fwd * side * fwd.transposed() * side.transposed();
}

struct CircleWalk {
  double drift = 0;          // arclength walked past the start
  double nose_rotation = 0;  // equals the enclosed cap area
};

/// Walking once around the circle of angular radius alpha on the unit sphere
/// while believing it is a plane circle.
inline CircleWalk sphere_circle_walk(double alpha) {
  if (!(alpha > 0.0 && alpha < kPi / 2)) throw DomainError("sphere_circle_walk: alpha must lie in (0, pi/2)");
  return {kTwoPi * std::tan(alpha) * (1.0 - std::cos(alpha)), kTwoPi * (1.0 - std::cos(alpha))};
}

// ---------------------------------------------------------------------------
// Programs

enum class StepKind { Forward, Turn, Sideways };

struct Step {
  StepKind kind = StepKind::Forward;
  double amount = 0;  // length, or angle for Turn (counterclockwise positive)
  bool left = true;   // Sideways only
};

using WalkProgram = std::vector<Step>;

inline Step forward(double len) { return {StepKind::Forward, len, true}; }
inline Step turn(double angle) { return {StepKind::Turn, angle, true}; }
inline Step sideways(double len, bool left) { return {StepKind::Sideways, len, left}; }

inline void validate(const WalkProgram& program) {
  for (const Step& s : program) {
    if (!std::isfinite(s.amount)) throw DomainError("walk program: non-finite amount");
    if (s.kind != StepKind::Turn && s.amount < 0.0) throw DomainError("walk program: lengths must be non-negative");
  }
}

/// Line format: "F <len>", "T <rad>", "S <len> L|R". Blank lines and lines
/// starting with '#' are ignored.
inline WalkProgram parse_program(std::istream& in) {
  WalkProgram program;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string op;
    if (!(ls >> op) || op[0] == '#') continue;
    Step s;
    std::string side;
    bool ok = false;
    if (op == "F") {
      s.kind = StepKind::Forward;
      ok = static_cast<bool>(ls >> s.amount);
    } else if (op == "T") {
      s.kind = StepKind::Turn;
      ok = static_cast<bool>(ls >> s.amount);
    } else if (op == "S") {
      s.kind = StepKind::Sideways;
      ok = static_cast<bool>(ls >> s.amount >> side) && (side == "L" || side == "R");
      s.left = side == "L";
    }
    std::string rest;
    if (!ok || (ls >> rest)) throw DomainError("walk program: cannot parse line " + std::to_string(lineno));
    program.push_back(s);
  }
  validate(program);
  return program;
}

inline WalkProgram parse_program(const std::string& text) {
  std::istringstream in(text);
  return parse_program(in);
}

inline std::string format_program(const WalkProgram& program) {
  std::string out;
  char buf[64];
  for (const Step& s : program) {
    switch (s.kind) {
      case StepKind::Forward: std::snprintf(buf, sizeof buf, "F %.17g\n", s.amount); break;
      case StepKind::Turn: std::snprintf(buf, sizeof buf, "T %.17g\n", s.amount); break;
      case StepKind::Sideways: std::snprintf(buf, sizeof buf, "S %.17g %c\n", s.amount, s.left ? 'L' : 'R'); break;
    }
    out += buf;
  }
  return out;
}

/// Uniform scaling of every length in a program.
inline WalkProgram scaled(const WalkProgram& program, double lambda) {
  WalkProgram out = program;
  for (Step& s : out)
    if (s.kind != StepKind::Turn) s.amount *= lambda;
  return out;
}

// ---------------------------------------------------------------------------
// Replay

struct ReplayResult {
  charts::TangentVector end;
  double displacement = 0;
  double nose_angle_change = 0;
  std::vector<charts::CurvePoint> trace;
};

/// Raised when a program leaves the chart; carries the trace walked so far.
class TruncatedWalk : public DomainError {
 public:
  TruncatedWalk(const std::string& what, std::vector<charts::CurvePoint> partial)
      : DomainError(what), partial_trace(std::move(partial)) {}
  std::vector<charts::CurvePoint> partial_trace;
};

/// Runs the program from start (unit heading). Forward steps follow
/// geodesics; turns rotate the heading in the metric; sideways steps follow
/// the geodesic orthogonal to the heading and carry the heading along by
/// parallel transport. step_fraction sets the integrator step relative to
/// each move length.
///
/// The nose change compares the final heading with the initial heading
/// transported to the end point along the geodesic from start to end (no
/// transport when the walk closes up to 1e-9).
inline ReplayResult replay(const charts::Chart& chart, const WalkProgram& program, const charts::TangentVector& start,
                           double step_fraction = 1e-3) {
  validate(program);
  if (!(step_fraction > 0.0 && step_fraction <= 1.0)) throw DomainError("replay: step fraction must lie in (0, 1]");
  if (std::abs(chart.norm(start.base, start.components) - 1.0) > charts::kUnitSpeedTolerance) {
    throw DomainError("replay: start heading must be a unit vector");
  }
  ReplayResult r;
  Vec2 pos = start.base;
  Vec2 heading = start.components;
  double t = 0.0;
  r.trace.push_back({t, pos, heading});

  auto append = [&](const charts::GeodesicTrace& g) {
    for (std::size_t i = 1; i < g.points.size(); ++i) {
      charts::CurvePoint p = g.points[i];
      p.t += t;
      r.trace.push_back(p);
    }
    t += g.length();
  };

  for (std::size_t i = 0; i < program.size(); ++i) {
    const Step& s = program[i];
    if (s.kind == StepKind::Turn) {
      heading = chart.rotate(pos, heading, s.amount);
      continue;
    }
    if (s.amount == 0.0) continue;
    const Vec2 dir = s.kind == StepKind::Forward ? heading : chart.rotate(pos, heading, s.left ? kPi / 2 : -kPi / 2);
    const charts::GeodesicTrace g = charts::integrate_geodesic(chart, {pos, dir}, s.amount, s.amount * step_fraction);
    if (g.truncated) {
      append(g);
      throw TruncatedWalk("replay: step " + std::to_string(i + 1) + " leaves the chart domain", r.trace);
    }
    if (s.kind == StepKind::Forward) {
      heading = g.back().dx;
    } else {
      heading = charts::parallel_transport(chart, g.points, heading);
      heading = chart.unit(g.back().x, heading);
    }
    pos = g.back().x;
    append(g);
  }

  r.end = {pos, heading};
  const Vec2 gap = pos - start.base;
  if (norm(gap) <= 1e-9) {
    r.displacement = chart.norm(pos, gap);
    r.nose_angle_change = chart.signed_angle(pos, start.components, heading);
  } else {
    const charts::GeodesicTrace closing = charts::geodesic_between(chart, start.base, pos);
    r.displacement = closing.length();
    const Vec2 carried = charts::parallel_transport(chart, closing.points, start.components);
    r.nose_angle_change = chart.signed_angle(pos, carried, heading);
  }
  return r;
}

/// Forward a, crab right b, about-face, forward a, about-face, crab left b.
inline WalkProgram rectangle_program(double a, double b) {
  return {forward(a), sideways(b, false), turn(kPi), forward(a), turn(kPi), sideways(b, true)};
}

/// Closed planar square of side s walked with left turns.
inline WalkProgram square_program(double s) {
  return {forward(s), turn(kPi / 2), forward(s), turn(kPi / 2), forward(s), turn(kPi / 2), forward(s), turn(kPi / 2)};
}

}  // namespace curved::walks
