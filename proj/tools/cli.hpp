#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "curved/charts.hpp"
#include "curved/expr.hpp"
#include "curved/extrinsic.hpp"
#include "curved/hyperbolic.hpp"
#include "curved/projections.hpp"
#include "curved/random.hpp"
#include "curved/render.hpp"
#include "curved/spherical.hpp"
#include "curved/surfaces.hpp"
#include "curved/tilings.hpp"
#include "curved/walks.hpp"

// Command-line front end. run() is separate from main() so tests can drive it
// in-process. Exit codes: 0 success, 2 usage, 3 domain error, 4 numeric failure.

namespace curved::cli {

using Json = nlohmann::ordered_json;

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitDomain = 3;
inline constexpr int kExitNumeric = 4;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Output

inline std::string format_number(double x) {
  if (std::isnan(x)) return "null";
  if (std::isinf(x)) return x > 0 ? "\"Infinity\"" : "\"-Infinity\"";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

/// JSON with every floating-point value printed to 17 significant digits.
inline void write_json(std::ostream& out, const Json& j, int indent = 0) {
  const std::string pad(static_cast<std::size_t>(indent + 2), ' ');
  const std::string close(static_cast<std::size_t>(indent), ' ');
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out << "{}";
        return;
      }
      out << "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out << ",\n";
        first = false;
        out << pad << Json(it.key()).dump() << ": ";
        write_json(out, it.value(), indent + 2);
      }
      out << "\n" << close << "}";
      return;
    }
    case Json::value_t::array: {
      bool scalars = true;
      for (const auto& e : j) scalars = scalars && !e.is_structured();
      if (j.empty()) {
        out << "[]";
        return;
      }
      if (scalars) {
        out << "[";
        for (std::size_t i = 0; i < j.size(); ++i) {
          if (i) out << ", ";
          write_json(out, j[i], indent);
        }
        out << "]";
        return;
      }
      out << "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out << ",\n";
        out << pad;
        write_json(out, j[i], indent + 2);
      }
      out << "\n" << close << "]";
      return;
    }
    case Json::value_t::number_float: out << format_number(j.get<double>()); return;
    default: out << j.dump(); return;
  }
}

inline void emit(std::ostream& out, const Json& j) {
  write_json(out, j);
  out << "\n";
}

inline Json vec_json(const Vec2& v) { return Json::array({v.x, v.y}); }
inline Json vec_json(const Vector3& v) { return Json::array({v.x, v.y, v.z}); }

inline Json estimate_json(const Estimate& e) {
  return Json{{"value", e.value}, {"standard_error", e.standard_error}, {"samples", e.samples}};
}

// ---------------------------------------------------------------------------
// Argument helpers

inline double parse_double(const std::string& text, const std::string& what) {
  std::size_t used = 0;
  double x = 0;
  try {
    x = std::stod(text, &used);
  } catch (const std::exception&) {
    throw UsageError("cannot parse " + what + ": '" + text + "'");
  }
  if (used != text.size()) throw UsageError("cannot parse " + what + ": '" + text + "'");
  return x;
}

inline std::vector<double> parse_list(const std::string& text, const std::string& what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_double(item, what));
  return out;
}

inline Vec2 parse_vec2(const std::string& text, const std::string& what) {
  const auto v = parse_list(text, what);
  if (v.size() != 2) throw UsageError(what + " needs two comma-separated numbers");
  return {v[0], v[1]};
}

inline Vector3 parse_vec3(const std::string& text, const std::string& what) {
  const auto v = parse_list(text, what);
  if (v.size() != 3) throw UsageError(what + " needs three comma-separated numbers");
  return {v[0], v[1], v[2]};
}

/// key=value positional arguments.
class Params {
 public:
  explicit Params(const std::vector<std::string>& items) {
    for (const std::string& s : items) {
      const auto eq = s.find('=');
      if (eq == std::string::npos || eq == 0) throw UsageError("expected key=value, got '" + s + "'");
      values_[s.substr(0, eq)] = parse_double(s.substr(eq + 1), s.substr(0, eq));
    }
  }
  bool has(const std::string& k) const { return values_.count(k) > 0; }
  double get(const std::string& k) const {
    auto it = values_.find(k);
    if (it == values_.end()) throw UsageError("missing parameter " + k + "=");
    return it->second;
  }
  double get(const std::string& k, double fallback) const { return has(k) ? get(k) : fallback; }
  bool has_all(std::initializer_list<const char*> keys) const {
    for (const char* k : keys)
      if (!has(k)) return false;
    return true;
  }

 private:
  std::map<std::string, double> values_;
};

struct ChartOptions {
  std::string name = "sphere";
  double radius = 1.0;
  double cone_k = 0.5;
  std::string speed = "1";
  std::string quadric = "0.5,0,0.5";
};

inline void add_chart_options(CLI::App* app, ChartOptions& o) {
  app->add_option("--chart", o.name,
                  "plane, cylinder, cone, flat-torus, sphere, hyperbolic, beetle or quadric")
      ->capture_default_str();
  app->add_option("--radius", o.radius, "sphere radius or cylinder radius")->capture_default_str();
  app->add_option("--cone-k", o.cone_k, "cone opening factor")->capture_default_str();
  app->add_option("--speed", o.speed, "beetle speed c(u,v)")->capture_default_str();
  app->add_option("--quadric", o.quadric, "a,b,c for z = a x^2 + 2 b x y + c y^2")->capture_default_str();
}

inline charts::Chart make_chart(const ChartOptions& o) {
  if (o.name == "plane") return charts::plane();
  if (o.name == "cylinder") return charts::cylinder(o.radius);
  if (o.name == "cone") return charts::cone(o.cone_k);
  if (o.name == "flat-torus") return charts::flat_torus();
  if (o.name == "sphere") return charts::sphere(o.radius);
  if (o.name == "hyperbolic") return charts::hyperbolic_plane();
  if (o.name == "beetle") {
    const expr::Expression e = expr::Expression::parse(o.speed);
    return charts::beetle([e](const Vec2& p) { return e(p.x, p.y); });
  }
  if (o.name == "quadric") {
    const Vector3 c = parse_vec3(o.quadric, "--quadric");
    return charts::quadric_chart(c.x, c.y, c.z);
  }
  throw UsageError("unknown chart '" + o.name + "'");
}

inline std::vector<Vec2> parse_points(const std::vector<std::string>& items, const std::string& what) {
  std::vector<Vec2> out;
  for (const std::string& s : items) out.push_back(parse_vec2(s, what));
  return out;
}

// ---------------------------------------------------------------------------
// Subcommands

inline Json triangle_json(double a, double b, double c, double alpha, double beta, double gamma) {
  return Json{{"a", a}, {"b", b}, {"c", c}, {"alpha", alpha}, {"beta", beta}, {"gamma", gamma}};
}

inline Json cmd_triangle(bool hyperbolic, bool right, const Params& P) {
  Json out;
  if (!hyperbolic) {
    sphere::SphericalTriangle t;
    if (right) {
      t = sphere::solve_right_triangle(P.get("a"), P.get("b"));
      out["mode"] = "right";
    } else if (P.has_all({"a", "b", "gamma"})) {
      t.a = P.get("a");
      t.b = P.get("b");
      t.gamma = P.get("gamma");
      t.c = sphere::law_of_cosines_side(t.a, t.b, t.gamma);
      t.alpha = sphere::law_of_cosines_angle(t.a, t.b, t.c);
      t.beta = sphere::law_of_cosines_angle(t.b, t.c, t.a);
      out["mode"] = "side-angle-side";
    } else if (P.has_all({"a", "b", "c"})) {
      t.a = P.get("a");
      t.b = P.get("b");
      t.c = P.get("c");
      t.alpha = sphere::law_of_cosines_angle(t.a, t.b, t.c);
      t.beta = sphere::law_of_cosines_angle(t.b, t.c, t.a);
      t.gamma = sphere::law_of_cosines_angle(t.c, t.a, t.b);
      out["mode"] = "side-side-side";
    } else {
      throw UsageError("triangle --sphere needs --right a= b=, or a= b= gamma=, or a= b= c=");
    }
    t.validate();
    out["geometry"] = "sphere";
    out["triangle"] = triangle_json(t.a, t.b, t.c, t.alpha, t.beta, t.gamma);
    out["defect"] = sphere::triangle_defect(t);
    out["area"] = sphere::triangle_defect(t);
    out["law_of_sines_spread"] = sphere::law_of_sines_check(t);
    return out;
  }
  using namespace hyperbolic;
  HTriangle t;
  if (right) {
    const double a = P.get("a"), b = P.get("b");
    if (!(a > 0 && b > 0)) throw DomainError("triangle: legs must be positive");
    t = measure_triangle(HPoint::polar(b, 0.0), HPoint::polar(a, kPi / 2), HPoint::origin());
    out["mode"] = "right";
    out["hypotenuse_formula"] = std::acosh(std::cosh(a) * std::cosh(b));
  } else if (P.has_all({"a", "b", "gamma"})) {
    const double a = P.get("a"), b = P.get("b"), gamma = P.get("gamma");
    if (!(a > 0 && b > 0 && gamma > 0 && gamma < kPi)) throw DomainError("triangle: invalid side-angle-side data");
    t = measure_triangle(HPoint::polar(b, gamma), HPoint::polar(a, 0.0), HPoint::origin());
    out["mode"] = "side-angle-side";
  } else if (P.has_all({"alpha", "beta", "c"})) {
    t = h_solve_asa(P.get("alpha"), P.get("beta"), P.get("c"));
    out["mode"] = "angle-side-angle";
  } else if (P.has_all({"a", "b", "c"})) {
    const double a = P.get("a"), b = P.get("b"), c = P.get("c");
    if (!(a > 0 && b > 0 && c > 0 && a < b + c && b < a + c && c < a + b)) {
      throw DomainError("triangle: sides violate the triangle inequality");
    }
    const double gamma =
        safe_acos((std::cosh(a) * std::cosh(b) - std::cosh(c)) / (std::sinh(a) * std::sinh(b)), "triangle");
    t = measure_triangle(HPoint::polar(b, gamma), HPoint::polar(a, 0.0), HPoint::origin());
    out["mode"] = "side-side-side";
  } else {
    throw UsageError("triangle --hyperbolic needs --right a= b=, a= b= gamma=, alpha= beta= c=, or a= b= c=");
  }
  out["geometry"] = "hyperbolic";
  out["triangle"] = triangle_json(t.a, t.b, t.c, t.alpha, t.beta, t.gamma);
  out["area"] = kPi - t.alpha - t.beta - t.gamma;
  return out;
}

inline Json cmd_dual(const std::string& point, const Params& P) {
  Json out;
  if (!point.empty()) {
    const sphere::SpherePoint p = sphere::SpherePoint::from(parse_vec3(point, "--point"));
    const sphere::GreatCircle k = sphere::dual(p);
    out["point"] = vec_json(p.coords);
    out["dual_circle_normal"] = vec_json(k.normal);
    out["round_trip"] = vec_json(sphere::dual(k).coords);
    return out;
  }
  const double a = P.get("a"), b = P.get("b"), c = P.get("c");
  sphere::SphericalTriangle t;
  t.a = a;
  t.b = b;
  t.c = c;
  t.alpha = sphere::law_of_cosines_angle(a, b, c);
  t.beta = sphere::law_of_cosines_angle(b, c, a);
  t.gamma = sphere::law_of_cosines_angle(c, a, b);
  t.validate();
  const sphere::SphericalTriangle d = sphere::dual_triangle(t);
  out["triangle"] = triangle_json(t.a, t.b, t.c, t.alpha, t.beta, t.gamma);
  out["dual"] = triangle_json(d.a, d.b, d.c, d.alpha, d.beta, d.gamma);
  return out;
}

/// Monte Carlo area of the hyperbolic disk of radius r, sampled in the
/// Poincare disk with density 4 / (1 - |x|^2)^2.
inline Estimate hyperbolic_disk_area_mc(double r, std::uint64_t samples, std::uint64_t seed) {
  const double rho = std::tanh(r / 2);
  Rng rng(seed);
  MeanAccumulator acc;
  const double box = 4 * rho * rho;
  for (std::uint64_t i = 0; i < samples; ++i) {
    const double x = rng.uniform(-rho, rho), y = rng.uniform(-rho, rho);
    const double s = x * x + y * y;
    acc.add(s < rho * rho ? box * 4.0 / ((1 - s) * (1 - s)) : 0.0);
  }
  return {acc.mean(), acc.standard_error(), samples, false};
}

inline Json cmd_circle(bool hyperbolic, const Params& P, std::uint64_t samples, std::uint64_t seed) {
  const double r = P.get("r");
  Json out;
  out["geometry"] = hyperbolic ? "hyperbolic" : "sphere";
  out["r"] = r;
  const int n = 4096;
  double sampled = 0;
  if (hyperbolic) {
    const auto m = hyperbolic::h_circle_measures(r);
    out["circumference"] = m.circumference;
    out["area"] = m.area;
    for (int i = 0; i < n; ++i) {
      sampled += hyperbolic::h_distance(hyperbolic::HPoint::polar(r, kTwoPi * i / n),
                                        hyperbolic::HPoint::polar(r, kTwoPi * (i + 1) / n));
    }
    out["sampled_circumference"] = sampled;
    if (samples > 0) out["monte_carlo_area"] = estimate_json(hyperbolic_disk_area_mc(r, samples, seed));
    return out;
  }
  const double R = P.get("R", 1.0);
  const auto m = sphere::circle_measures(r, R);
  out["R"] = R;
  out["circumference"] = m.circumference;
  out["area"] = m.area;
  const double s = r / R;
  for (int i = 0; i < n; ++i) {
    auto at = [&](int k) {
      const double phi = kTwoPi * k / n;
      return sphere::SpherePoint::from({std::sin(s) * std::cos(phi), std::sin(s) * std::sin(phi), std::cos(s)});
    };
    sampled += sphere::distance(at(i), at(i + 1)) * R;
  }
  out["sampled_circumference"] = sampled;
  if (samples > 0) {
    const Estimate e = sphere_region_area([&](const Vector3& x) { return x.z > std::cos(s); }, samples, seed);
    out["monte_carlo_area"] = estimate_json({e.value * R * R, e.standard_error * R * R, e.samples, e.degenerate});
  }
  return out;
}

inline void cmd_geodesic(std::ostream& out, const charts::Chart& chart, const std::string& from,
                         const std::string& dir, const std::string& to, double length, int steps) {
  charts::GeodesicTrace g;
  const Vec2 p = parse_vec2(from, "--from");
  if (!to.empty()) {
    g = charts::geodesic_between(chart, p, parse_vec2(to, "--to"), steps);
  } else {
    if (dir.empty()) throw UsageError("geodesic needs --dir or --to");
    if (!(length > 0)) throw UsageError("geodesic needs --length > 0");
    const Vec2 d = chart.unit(p, parse_vec2(dir, "--dir"));
    g = charts::integrate_geodesic(chart, {p, d}, length, length / steps);
  }
  out << "t,u,v,v1,v2\n";
  for (const charts::CurvePoint& c : g.points) {
    out << format_number(c.t) << ',' << format_number(c.x.x) << ',' << format_number(c.x.y) << ','
        << format_number(c.dx.x) << ',' << format_number(c.dx.y) << '\n';
  }
  if (g.truncated) throw DomainError("geodesic: trace left the chart domain (output truncated)");
}

inline Json cmd_polygon(const charts::Chart& chart, const std::vector<Vec2>& vertices, bool with_area,
                        std::uint64_t samples, std::uint64_t seed) {
  const charts::GeodesicPolygon poly = charts::make_polygon(chart, vertices);
  Json out;
  out["chart"] = chart.name();
  Json verts = Json::array();
  for (const Vec2& v : vertices) verts.push_back(vec_json(v));
  out["vertices"] = verts;
  out["interior_angles"] = charts::interior_angles(chart, poly);
  out["defect"] = charts::polygon_defect(chart, poly);
  out["turning_deficit"] = charts::polygon_turning_deficit(chart, poly);
  out["holonomy"] = charts::holonomy_angle(chart, poly);
  if (with_area) {
    out["area"] = charts::polygon_area(chart, poly);
    if (samples > 0) out["monte_carlo_area"] = estimate_json(charts::area(chart, poly, samples, seed));
  }
  return out;
}

inline Json cmd_transport(const charts::Chart& chart, const std::vector<Vec2>& vertices, const std::string& vec) {
  const charts::GeodesicPolygon poly = charts::make_polygon(chart, vertices);
  const Vec2 w0 = vec.empty() ? poly.edges.front().front().dx : parse_vec2(vec, "--vector");
  Vec2 w = w0;
  for (const auto& e : poly.edges) w = charts::parallel_transport(chart, e.points, w);
  Json out;
  out["chart"] = chart.name();
  out["start"] = vec_json(w0);
  out["transported"] = vec_json(w);
  out["rotation"] = chart.signed_angle(vertices.front(), w0, w);
  return out;
}

inline Json cmd_curvature(const charts::Chart& chart, const std::string& at, const std::vector<double>& scales) {
  const Vec2 p = parse_vec2(at, "--at");
  Json out;
  out["chart"] = chart.name();
  out["at"] = vec_json(p);
  Json rows = Json::array();
  for (double s : scales) rows.push_back(Json{{"scale", s}, {"density", charts::curvature_density(chart, p, s)}});
  out["sweep"] = rows;
  return out;
}

inline Json cmd_gauss_bonnet(const std::string& file, const std::string& builtin, const std::string& write_to) {
  surfaces::TriangulatedSurface s;
  if (!builtin.empty()) {
    if (builtin == "icosahedron") s = surfaces::icosahedral_sphere(2);
    else if (builtin == "torus") s = surfaces::flat_torus();
    else if (builtin == "genus-two") s = surfaces::genus_two();
    else throw UsageError("unknown builtin surface '" + builtin + "'");
  } else if (!file.empty()) {
    std::ifstream in(file);
    if (!in) throw UsageError("cannot open " + file);
    s = surfaces::read(in);
  } else {
    throw UsageError("gauss-bonnet needs a file or --builtin");
  }
  if (!write_to.empty()) {
    std::ofstream f(write_to);
    if (!f) throw UsageError("cannot write " + write_to);
    surfaces::write(f, s);
  }
  const auto r = surfaces::gauss_bonnet(s);
  return Json{{"W", s.W},
              {"K", s.K},
              {"S", s.S},
              {"chi", r.chi},
              {"total_curvature", r.total_curvature},
              {"two_pi_chi", kTwoPi * r.chi},
              {"residual", r.residual}};
}

inline Json matrix_json(const Mat3& m) {
  Json rows = Json::array();
  for (int i = 0; i < 3; ++i) rows.push_back(Json::array({m(i, 0), m(i, 1), m(i, 2)}));
  return rows;
}

inline Json cmd_walk_rectangle(double a, double b) {
  const Mat3 M = walks::sphere_rectangle_walk(a, b);
  Mat3 S;
  S.m = {{{1 - a * a * b * b / 2, a * b * b / 2, a * b},
          {a * a * a / 2, 1 - a * a * b * b * (a * a + b * b) / 8, a * a * b / 2},
          {-a * b, -a * a * b / 2, 1 - a * a * b * b / 2}}};
  // replay the same walk on the unit sphere from (1,0,0) heading +y
  const charts::Chart chart = charts::sphere(1.0);
  const auto r = walks::replay(chart, walks::rectangle_program(a, b), {{kPi / 2, -kPi / 2}, {0, 1}});
  const Vector3 end = chart.embed(r.end.base);
  const Vector3 predicted = M * Vector3{0, -1, 0};
  return Json{{"a", a},
              {"b", b},
              {"matrix", matrix_json(M)},
              {"series", matrix_json(S)},
              {"series_gap", M.max_abs_diff(S)},
              {"replay_end", vec_json(end)},
              {"matrix_end", vec_json(predicted)},
              {"replay_gap", norm(end - predicted)},
              {"displacement", r.displacement},
              {"nose_angle_change", r.nose_angle_change}};
}

inline Json cmd_walk_circle(double alpha) {
  const walks::CircleWalk w = walks::sphere_circle_walk(alpha);
  return Json{{"alpha", alpha},
              {"drift", w.drift},
              {"nose_rotation", w.nose_rotation},
              {"drift_over_alpha3", w.drift / (alpha * alpha * alpha)},
              {"rotation_over_alpha2", w.nose_rotation / (alpha * alpha)},
              {"pi", kPi}};
}

inline Json cmd_walk_program(const charts::Chart& chart, const std::string& file, const std::string& start,
                             const std::string& heading, double step_fraction) {
  std::ifstream in(file);
  if (!in) throw UsageError("cannot open " + file);
  const walks::WalkProgram program = walks::parse_program(in);
  const Vec2 p = parse_vec2(start, "--start");
  const Vec2 h = chart.unit(p, parse_vec2(heading, "--heading"));
  const walks::ReplayResult r = walks::replay(chart, program, {p, h}, step_fraction);
  return Json{{"chart", chart.name()},
              {"steps", program.size()},
              {"end", vec_json(r.end.base)},
              {"end_heading", vec_json(r.end.components)},
              {"displacement", r.displacement},
              {"nose_angle_change", r.nose_angle_change}};
}

struct TilingOptions {
  int p = 0, q = 0, layers = 4;
  bool counts = false, exported = false;
  int growth = -1;
  std::string word, edge = "0,1", loop, svg;
};

inline void cmd_tiling(std::ostream& out, const TilingOptions& o) {
  if (o.p < 3 || o.q < 3) throw UsageError("tiling needs --p and --q of at least 3");
  const bool closed = tilings::curvature_sign(o.p, o.q) > 0;
  const tilings::TilingGraph g = closed ? tilings::closed_tiling(o.p, o.q) : tilings::build_tiling(o.p, o.q, o.layers);
  if (!o.svg.empty()) {
    const std::string picture = render::tiling_svg(g);
    if (o.svg == "-") {
      out << picture;
      return;
    }
    std::ofstream f(o.svg);
    if (!f) throw UsageError("cannot write " + o.svg);
    f << picture;
  }
  if (o.exported) {
    out << tilings::export_text(g);
    return;
  }
  Json j;
  j["p"] = o.p;
  j["q"] = o.q;
  j["geometry"] = closed ? "spherical" : (tilings::curvature_sign(o.p, o.q) == 0 ? "euclidean" : "hyperbolic");
  j["closed"] = g.closed;
  if (!closed) j["layers"] = g.layers;
  if (o.counts || (o.growth < 0 && o.word.empty() && o.loop.empty())) {
    j["W"] = g.vertex_count();
    j["K"] = g.edge_count();
    j["S"] = g.face_count();
    if (closed) j["chi"] = g.vertex_count() - g.edge_count() + g.face_count();
  }
  if (o.growth >= 0) j["growth"] = tilings::growth_counts(g, o.growth);
  if (!o.word.empty()) {
    const Vec2 e = parse_vec2(o.edge, "--edge");
    const std::vector<int> w = tilings::parse_word(o.word);
    const int end = tilings::replay_word(g, static_cast<int>(e.x), static_cast<int>(e.y), w);
    j["word"] = w;
    j["end_vertex"] = end;
  }
  if (!o.loop.empty()) {
    std::vector<int> loop;
    for (double x : parse_list(o.loop, "--area")) loop.push_back(static_cast<int>(x));
    j["loop"] = loop;
    j["enclosed_faces"] = tilings::enclosed_faces(g, loop);
  }
  if (!o.svg.empty()) j["svg"] = o.svg;
  emit(out, j);
}

inline Json cmd_project(const std::string& map, const std::string& point, double cap, int samples,
                        std::uint64_t seed) {
  using namespace projections;
  Json out;
  out["map"] = map;
  const bool hyper = map == "poincare" || map == "klein";
  const bool known = hyper || map == "stereographic" || map == "gnomonic" || map == "cylindrical";
  if (!known) throw UsageError("unknown map '" + map + "'");
  auto sphere_map = [&](const Vector3& x) -> Vec2 {
    const sphere::SpherePoint p = sphere::SpherePoint::from(x);
    if (map == "stereographic") return stereographic(p);
    if (map == "gnomonic") return gnomonic(p);
    return cylindrical_equal_area(p);
  };
  auto hyper_map = [&](const Vector3& x) -> Vec2 {
    const hyperbolic::HPoint p = hyperbolic::HPoint::from(x);
    return map == "poincare" ? poincare(p) : klein(p);
  };
  if (!point.empty()) {
    const Vector3 x = parse_vec3(point, "--point");
    out["point"] = vec_json(x);
    out["image"] = vec_json(hyper ? hyper_map(x) : sphere_map(x));
  }
  if (samples > 0) {
    DistortionReport r;
    if (hyper) {
      r = distortion_meter(HyperboloidSurface{}, hyper_map, hyperbolic_disk_sampler(cap), samples, seed);
    } else {
      // caps sit around the point of tangency; the cylinder map uses the equator
      const Vector3 centre = map == "cylindrical" ? Vector3{1, 0, 0} : Vector3{0, 0, -1};
      r = distortion_meter(SphereSurface{}, sphere_map, cap_sampler(centre, cap), samples, seed);
    }
    out["region_radius"] = cap;
    out["report"] = Json{{"samples", r.samples},
                         {"min_length_ratio", r.min_length_ratio},
                         {"max_length_ratio", r.max_length_ratio},
                         {"max_angle_error", r.max_angle_error},
                         {"min_area_ratio", r.min_area_ratio},
                         {"max_area_ratio", r.max_area_ratio}};
  }
  return out;
}

inline Json cmd_distort_map(double R, const std::vector<double>& sizes) {
  Json rows = Json::array();
  for (double s : sizes) {
    const charts::MapDistortion d = charts::map_distortion_report(R, s);
    rows.push_back(Json{{"size", d.size},
                        {"corner_angle_error", d.max_angle_error},
                        {"corner_angle_error_degrees", d.max_angle_error * 180 / kPi},
                        {"side_mismatch_ratio", d.side_mismatch_ratio}});
  }
  return Json{{"radius", R}, {"maps", rows}};
}

// ---------------------------------------------------------------------------

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Experiments in curved two-dimensional geometry"};
  app.require_subcommand(1);
  std::uint64_t seed = 1;
  app.add_option("--seed", seed, "seed for every stochastic estimate")->capture_default_str();

  Json result;
  std::function<void()> action;

  // triangle
  auto* tri = app.add_subcommand("triangle", "solve a spherical or hyperbolic triangle");
  bool tri_sphere = false, tri_hyper = false, tri_right = false;
  std::vector<std::string> tri_params;
  tri->add_flag("--sphere", tri_sphere, "unit sphere (default)");
  tri->add_flag("--hyperbolic", tri_hyper, "hyperbolic plane");
  tri->add_flag("--right", tri_right, "right angle between legs a and b");
  tri->add_option("params", tri_params, "key=value: a b c alpha beta gamma");
  tri->callback([&] {
    if (tri_sphere && tri_hyper) throw UsageError("choose one of --sphere and --hyperbolic");
    result = cmd_triangle(tri_hyper, tri_right, Params(tri_params));
  });

  auto* dual = app.add_subcommand("dual", "polar duality on the sphere");
  std::string dual_point;
  std::vector<std::string> dual_params;
  dual->add_option("--point", dual_point, "x,y,z");
  dual->add_option("params", dual_params, "a= b= c= sides of a triangle");
  dual->callback([&] { result = cmd_dual(dual_point, Params(dual_params)); });

  auto* circ = app.add_subcommand("circle", "circumference and area of a geodesic circle");
  bool circ_sphere = false, circ_hyper = false;
  std::uint64_t circ_samples = 0;
  std::vector<std::string> circ_params;
  circ->add_flag("--sphere", circ_sphere, "sphere (default), optional R=");
  circ->add_flag("--hyperbolic", circ_hyper, "hyperbolic plane");
  circ->add_option("--samples", circ_samples, "Monte Carlo samples for the area check (0 skips)");
  circ->add_option("params", circ_params, "r= [R=]");
  circ->callback([&] {
    if (circ_sphere && circ_hyper) throw UsageError("choose one of --sphere and --hyperbolic");
    result = cmd_circle(circ_hyper, Params(circ_params), circ_samples, seed);
  });

  auto* geo = app.add_subcommand("geodesic", "trace a geodesic in a chart (CSV)");
  ChartOptions geo_chart;
  std::string geo_from, geo_dir, geo_to;
  double geo_length = 0;
  int geo_steps = 1000;
  add_chart_options(geo, geo_chart);
  geo->add_option("--from", geo_from, "u,v")->required();
  geo->add_option("--dir", geo_dir, "du,dv (normalized in the metric)");
  geo->add_option("--to", geo_to, "u,v: solve the two-point problem instead");
  geo->add_option("--length", geo_length, "arclength");
  geo->add_option("--steps", geo_steps, "integration steps")->capture_default_str();
  geo->callback([&] {
    if (geo_steps < 1) throw UsageError("--steps must be positive");
    action = [&] { cmd_geodesic(out, make_chart(geo_chart), geo_from, geo_dir, geo_to, geo_length, geo_steps); };
  });

  auto* tr = app.add_subcommand("transport", "parallel transport around a geodesic polygon");
  ChartOptions tr_chart;
  std::vector<std::string> tr_vertices;
  std::string tr_vec;
  add_chart_options(tr, tr_chart);
  tr->add_option("--vertex", tr_vertices, "u,v (repeat, counterclockwise)")->required();
  tr->add_option("--vector", tr_vec, "initial vector (default: first edge direction)");
  tr->callback([&] { result = cmd_transport(make_chart(tr_chart), parse_points(tr_vertices, "--vertex"), tr_vec); });

  auto* def = app.add_subcommand("defect", "defect, turning deficit, holonomy and area of a polygon");
  ChartOptions def_chart;
  std::vector<std::string> def_vertices;
  std::uint64_t def_samples = 0;
  add_chart_options(def, def_chart);
  def->add_option("--vertex", def_vertices, "u,v (repeat, counterclockwise)")->required();
  def->add_option("--samples", def_samples, "Monte Carlo samples for the area (0 skips)");
  def->callback([&] {
    result = cmd_polygon(make_chart(def_chart), parse_points(def_vertices, "--vertex"), true, def_samples, seed);
  });

  auto* cur = app.add_subcommand("curvature", "curvature density sweep over shrinking squares");
  ChartOptions cur_chart;
  std::string cur_at;
  std::string cur_scales = "0.1,0.05,0.02,0.01";
  add_chart_options(cur, cur_chart);
  cur->add_option("--at", cur_at, "u,v")->required();
  cur->add_option("--scales", cur_scales, "comma-separated square sizes")->capture_default_str();
  cur->callback([&] { result = cmd_curvature(make_chart(cur_chart), cur_at, parse_list(cur_scales, "--scales")); });

  auto* gb = app.add_subcommand("gauss-bonnet", "total curvature of a triangulated closed surface");
  std::string gb_file, gb_builtin, gb_write;
  gb->add_option("file", gb_file, "surface file");
  gb->add_option("--builtin", gb_builtin, "icosahedron, torus or genus-two");
  gb->add_option("--write", gb_write, "also write the surface to this file");
  gb->callback([&] { result = cmd_gauss_bonnet(gb_file, gb_builtin, gb_write); });

  auto* walk = app.add_subcommand("walk", "turtle walks");
  bool walk_rect = false, walk_circle = false;
  std::string walk_program, walk_start = "1.5707963267948966,0", walk_heading = "0,1";
  double walk_fraction = 1e-3;
  ChartOptions walk_chart;
  std::vector<std::string> walk_params;
  walk->add_flag("--rectangle", walk_rect, "closed-form rectangle walk on the unit sphere: a= b=");
  walk->add_flag("--circle", walk_circle, "closed-form circle walk on the unit sphere: alpha=");
  walk->add_option("--program", walk_program, "program file to replay on --chart");
  walk->add_option("--start", walk_start, "u,v")->capture_default_str();
  walk->add_option("--heading", walk_heading, "du,dv")->capture_default_str();
  walk->add_option("--step-fraction", walk_fraction, "integrator step per move length")->capture_default_str();
  add_chart_options(walk, walk_chart);
  walk->add_option("params", walk_params, "key=value");
  walk->callback([&] {
    const Params P(walk_params);
    if (walk_rect + walk_circle + !walk_program.empty() != 1) {
      throw UsageError("walk needs exactly one of --rectangle, --circle, --program");
    }
    if (walk_rect) result = cmd_walk_rectangle(P.get("a"), P.get("b"));
    else if (walk_circle) result = cmd_walk_circle(P.get("alpha"));
    else result = cmd_walk_program(make_chart(walk_chart), walk_program, walk_start, walk_heading, walk_fraction);
  });

  auto* til = app.add_subcommand("tiling", "{p,q} tilings");
  TilingOptions tio;
  til->add_option("--p", tio.p, "sides per face")->required();
  til->add_option("--q", tio.q, "faces per vertex")->required();
  til->add_option("--layers", tio.layers, "layers to generate for open tilings")->capture_default_str();
  til->add_flag("--counts", tio.counts, "vertex, edge and face counts");
  til->add_option("--growth", tio.growth, "vertices at each distance up to N from vertex 0");
  til->add_option("--word", tio.word, "street choices, counted counterclockwise from the arrival street");
  til->add_option("--edge", tio.edge, "start edge a,b for --word")->capture_default_str();
  til->add_option("--area", tio.loop, "closed walk as comma-separated vertex ids");
  til->add_option("--svg", tio.svg, "write a picture to this file ('-' for stdout)");
  til->add_flag("--export", tio.exported, "adjacency text");
  til->callback([&] { action = [&] { cmd_tiling(out, tio); }; });

  auto* proj = app.add_subcommand("project", "map projections and distortion reports");
  std::string proj_map = "stereographic", proj_point;
  double proj_cap = 0.5;
  int proj_samples = 0;
  proj->add_option("--map", proj_map, "stereographic, gnomonic, cylindrical, poincare or klein")
      ->capture_default_str();
  proj->add_option("--point", proj_point, "x,y,z on the sphere or hyperboloid");
  proj->add_option("--cap", proj_cap, "radius of the sampled region")->capture_default_str();
  proj->add_option("--samples", proj_samples, "distortion samples (0 skips the report)");
  proj->callback([&] { result = cmd_project(proj_map, proj_point, proj_cap, proj_samples, seed); });

  auto* dm = app.add_subcommand("distort-map", "how wrong a flat map of the Earth is at various sizes");
  double dm_radius = 6371;
  std::string dm_sizes = "10,100,1000,10000";
  dm->add_option("--radius", dm_radius, "sphere radius")->capture_default_str();
  dm->add_option("--sizes", dm_sizes, "comma-separated map sizes")->capture_default_str();
  dm->callback([&] { result = cmd_distort_map(dm_radius, parse_list(dm_sizes, "--sizes")); });

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
    if (action) action();
    else emit(out, result);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DomainError& e) {
    err << "domain error: " << e.what() << "\n";
    return kExitDomain;
  } catch (const NumericFailure& e) {
    err << "numeric failure: " << e.what() << "\n";
    return kExitNumeric;
  }
  return kExitOk;
}

}  // namespace curved::cli
