#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "curved/core.hpp"
#include "curved/projections.hpp"
#include "curved/svg.hpp"
#include "curved/tilings.hpp"

// Pictures of tilings. Spherical tilings are drawn in stereographic
// projection (slightly tilted so no vertex sits at the pole of projection),
// Euclidean ones as they are, hyperbolic ones in the Poincare disk.

namespace curved::render {

inline Vec2 to_picture(tilings::Geometry geo, const Vector3& x) {
  switch (geo) {
    case tilings::Geometry::Euclidean: return {x.x, x.y};
    case tilings::Geometry::Spherical: {
      static const Mat3 tilt = axis_rotation({1, 0, 0}, 0.05);
      return projections::stereographic(sphere::SpherePoint::from(tilt * x));
    }
    case tilings::Geometry::Hyperbolic: return projections::poincare(hyperbolic::HPoint::from(x));
  }
  return {x.x, x.y};
}

/// Point on the geodesic segment from a to b at fraction t (not arclength).
inline Vector3 segment_point(tilings::Geometry geo, const Vector3& a, const Vector3& b, double t) {
  const Vector3 x = a * (1.0 - t) + b * t;
  switch (geo) {
    case tilings::Geometry::Euclidean: return x;
    case tilings::Geometry::Spherical: return normalize(x);
    case tilings::Geometry::Hyperbolic: return normalize(hyperbolic::kForm, x, -1);
  }
  return x;
}

/// SVG of every edge, each sampled at `samples` points. Edge pieces whose
/// image leaves the disk of radius `clip` are dropped.
inline std::string tiling_svg(const tilings::TilingGraph& g, int samples = 16, double clip = 6.0) {
  if (samples < 2) throw DomainError("tiling_svg: need at least two samples per edge");
  const tilings::Geometry geo = tilings::geometry_of(g.p, g.q);
  const std::vector<Vector3> pos = tilings::embed(g);
  double extent = geo == tilings::Geometry::Hyperbolic ? 1.0 : 0.0;
  std::vector<std::vector<Vec2>> lines;
  for (int a = 0; a < g.vertex_count(); ++a) {
    for (int b : g.rotation[static_cast<std::size_t>(a)]) {
      if (b < a) continue;
      std::vector<Vec2> line;
      for (int k = 0; k < samples; ++k) {
        const double t = static_cast<double>(k) / (samples - 1);
        const Vector3 x = segment_point(geo, pos[static_cast<std::size_t>(a)], pos[static_cast<std::size_t>(b)], t);
        Vec2 X;
        try {
          X = to_picture(geo, x);
        } catch (const DomainError&) {
          X = {clip * 2, clip * 2};
        }
        if (norm(X) > clip) {
          if (line.size() >= 2) lines.push_back(line);
          line.clear();
          continue;
        }
        extent = std::max(extent, std::max(std::abs(X.x), std::abs(X.y)));
        line.push_back(X);
      }
      if (line.size() >= 2) lines.push_back(line);
    }
  }
  extent *= 1.05;
  if (!(extent > 0.0)) extent = 1.0;
  svg::Document doc(-extent, -extent, extent, extent);
  if (geo == tilings::Geometry::Hyperbolic) {
    doc.begin_layer("boundary", {"gray", extent / 400, "none"});
    doc.circle({0, 0}, 1.0);
  }
  doc.begin_layer("edges", {"black", extent / 400, "none"});
  for (const auto& line : lines) doc.polyline(line);
  return doc.str();
}

}  // namespace curved::render
