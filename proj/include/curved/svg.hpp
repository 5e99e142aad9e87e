#pragma once

#include <cstdio>
#include <string>
#include <vector>

#include "curved/core.hpp"

// Deterministic SVG output: fixed number formatting, elements in insertion
// order. The view box is given in model coordinates with y pointing up.

namespace curved::svg {

struct Style {
  std::string stroke = "black";
  double width = 0.01;
  std::string fill = "none";
};

class Document {
 public:
  Document(double x_min, double y_min, double x_max, double y_max, int pixels = 800)
      : x_min_(x_min), y_min_(y_min), x_max_(x_max), y_max_(y_max), pixels_(pixels) {
    if (!(x_max > x_min && y_max > y_min)) throw DomainError("svg: empty view box");
  }

  void begin_layer(const std::string& id, const Style& style) {
    end_layer();
    body_ += "<g id=\"" + id + "\" stroke=\"" + style.stroke + "\" stroke-width=\"" + num(style.width) +
             "\" fill=\"" + style.fill + "\">\n";
    open_ = true;
  }

  void end_layer() {
    if (open_) body_ += "</g>\n";
    open_ = false;
  }

  void polyline(const std::vector<Vec2>& pts, bool closed = false) {
    if (pts.size() < 2) return;
    body_ += closed ? "<polygon points=\"" : "<polyline points=\"";
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (i) body_ += ' ';
      body_ += num(pts[i].x) + "," + num(-pts[i].y);
    }
    body_ += "\"/>\n";
  }

  void circle(const Vec2& c, double r) {
    body_ += "<circle cx=\"" + num(c.x) + "\" cy=\"" + num(-c.y) + "\" r=\"" + num(r) + "\"/>\n";
  }

  std::string str() {
    end_layer();
    const double w = x_max_ - x_min_, h = y_max_ - y_min_;
    const int px_h = static_cast<int>(pixels_ * h / w + 0.5);
    std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(pixels_) +
                      "\" height=\"" + std::to_string(px_h) + "\" viewBox=\"" + num(x_min_) + " " + num(-y_max_) +
                      " " + num(w) + " " + num(h) + "\">\n";
    return out + body_ + "</svg>\n";
  }

  static std::string num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", x);
    std::string s = buf;
    if (s == "-0.000000") s = "0.000000";
    return s;
  }

 private:
  double x_min_, y_min_, x_max_, y_max_;
  int pixels_;
  std::string body_;
  bool open_ = false;
};

}  // namespace curved::svg
