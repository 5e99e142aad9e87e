#pragma once

#include <array>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <functional>
#include <iostream>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace curved {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Error taxonomy shared by every module. The CLI maps these onto exit codes.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class DegenerateInput : public DomainError {
 public:
  using DomainError::DomainError;
};

class NumericFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Diagnostics sink for recoverable numerical oddities (e.g. an arccos argument
// that had to be clamped from well outside [-1, 1]).
class Diagnostics {
 public:
  using Sink = std::function<void(const std::string&)>;

  static Diagnostics& instance() {
    static Diagnostics d;
    return d;
  }

  void warn(const std::string& message) {
    warnings_.fetch_add(1, std::memory_order_relaxed);
    std::lock_guard lock(mutex_);
    if (sink_) sink_(message);
  }

  void set_sink(Sink sink) {
    std::lock_guard lock(mutex_);
    sink_ = std::move(sink);
  }

  std::uint64_t warning_count() const { return warnings_.load(std::memory_order_relaxed); }

 private:
  Diagnostics() : sink_([](const std::string& m) { std::clog << "curved: warning: " << m << '\n'; }) {}

  std::mutex mutex_;
  Sink sink_;
  std::atomic<std::uint64_t> warnings_{0};
};

/// Clamps an inverse-trig argument into [-1, 1]. Arguments further than 1e-9
/// outside the interval are reported through Diagnostics before clamping.
inline double clamp_unit(double x, const char* where = "clamp_unit") {
  if (x > 1.0 + 1e-9 || x < -1.0 - 1e-9) {
    Diagnostics::instance().warn(std::string(where) + ": argument " + std::to_string(x) +
                                 " clamped to [-1,1]");
  }
  return x > 1.0 ? 1.0 : (x < -1.0 ? -1.0 : x);
}

inline double safe_acos(double x, const char* where = "acos") { return std::acos(clamp_unit(x, where)); }
inline double safe_asin(double x, const char* where = "asin") { return std::asin(clamp_unit(x, where)); }

/// arcosh with the argument clamped to [1, inf).
inline double safe_acosh(double x) { return std::acosh(x < 1.0 ? 1.0 : x); }

/// Wraps an angle into (-pi, pi].
inline double wrap_angle(double a) {
  double r = std::remainder(a, kTwoPi);
  if (r <= -kPi) r += kTwoPi;
  return r;
}

struct Vector3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  constexpr Vector3() = default;
  constexpr Vector3(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {}

  constexpr Vector3 operator+(const Vector3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  constexpr Vector3 operator-(const Vector3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  constexpr Vector3 operator-() const { return {-x, -y, -z}; }
  constexpr Vector3 operator*(double s) const { return {x * s, y * s, z * s}; }
  constexpr Vector3 operator/(double s) const { return {x / s, y / s, z / s}; }
  constexpr Vector3& operator+=(const Vector3& o) {
    x += o.x;
    y += o.y;
    z += o.z;
    return *this;
  }
  constexpr bool operator==(const Vector3&) const = default;

  bool finite() const { return std::isfinite(x) && std::isfinite(y) && std::isfinite(z); }
};

constexpr Vector3 operator*(double s, const Vector3& v) { return v * s; }

enum class Signature { Euclidean, Lorentzian };

/// Symmetric bilinear form diag(1, 1, +1) or diag(1, 1, -1); the timelike axis is z.
struct BilinearForm {
  Signature signature = Signature::Euclidean;

  static constexpr BilinearForm euclidean() { return {Signature::Euclidean}; }
  static constexpr BilinearForm lorentzian() { return {Signature::Lorentzian}; }

  constexpr double z_sign() const { return signature == Signature::Euclidean ? 1.0 : -1.0; }
};

constexpr double inner(BilinearForm form, const Vector3& u, const Vector3& v) {
  return u.x * v.x + u.y * v.y + form.z_sign() * (u.z * v.z);
}

constexpr double dot(const Vector3& u, const Vector3& v) { return inner(BilinearForm::euclidean(), u, v); }

constexpr Vector3 cross(const Vector3& u, const Vector3& v) {
  return {u.y * v.z - u.z * v.y, u.z * v.x - u.x * v.z, u.x * v.y - u.y * v.x};
}

inline double norm(const Vector3& v) { return std::sqrt(dot(v, v)); }

/// Scales v so that inner(form, v, v) == target, where target is +1 or -1.
inline Vector3 normalize(BilinearForm form, const Vector3& v, int target = 1) {
  if (target != 1 && target != -1) throw DomainError("normalize: target must be +1 or -1");
  const double q = inner(form, v, v);
  if (q == 0.0 || !std::isfinite(q) || (q > 0.0) != (target > 0)) {
    throw DomainError("normalize: vector norm has zero or wrong sign for the requested target");
  }
  return v / std::sqrt(std::abs(q));
}

inline Vector3 normalize(const Vector3& v) { return normalize(BilinearForm::euclidean(), v, 1); }

/// Row-major 3x3 matrix.
struct Mat3 {
  std::array<std::array<double, 3>, 3> m{};

  static constexpr Mat3 identity() {
    Mat3 r;
    r.m[0][0] = r.m[1][1] = r.m[2][2] = 1.0;
    return r;
  }

  constexpr double operator()(int i, int j) const { return m[i][j]; }
  constexpr double& operator()(int i, int j) { return m[i][j]; }

  constexpr Mat3 operator*(const Mat3& o) const {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        double s = 0.0;
        for (int k = 0; k < 3; ++k) s += m[i][k] * o.m[k][j];
        r.m[i][j] = s;
      }
    return r;
  }

  constexpr Vector3 operator*(const Vector3& v) const {
    return {m[0][0] * v.x + m[0][1] * v.y + m[0][2] * v.z, m[1][0] * v.x + m[1][1] * v.y + m[1][2] * v.z,
            m[2][0] * v.x + m[2][1] * v.y + m[2][2] * v.z};
  }

  constexpr Mat3 transposed() const {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) r.m[i][j] = m[j][i];
    return r;
  }

  constexpr double determinant() const {
    return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
           m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
  }

  double max_abs_diff(const Mat3& o) const {
    double d = 0.0;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) d = std::max(d, std::abs(m[i][j] - o.m[i][j]));
    return d;
  }
};

/// Rotation about a unit axis by angle (right-hand rule).
inline Mat3 axis_rotation(const Vector3& axis, double angle) {
  const Vector3 k = normalize(axis);
  const double c = std::cos(angle), s = std::sin(angle), t = 1.0 - c;
  Mat3 r;
  r.m = {{{t * k.x * k.x + c, t * k.x * k.y - s * k.z, t * k.x * k.z + s * k.y},
          {t * k.x * k.y + s * k.z, t * k.y * k.y + c, t * k.y * k.z - s * k.x},
          {t * k.x * k.z - s * k.y, t * k.y * k.z + s * k.x, t * k.z * k.z + c}}};
  return r;
}

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  constexpr Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
  constexpr Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
  constexpr Vec2 operator*(double s) const { return {x * s, y * s}; }
  constexpr bool operator==(const Vec2&) const = default;
};

constexpr double dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(const Vec2& a, const Vec2& b) { return a.x * b.y - a.y * b.x; }
inline double norm(const Vec2& a) { return std::hypot(a.x, a.y); }

}  // namespace curved
