#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "curved/core.hpp"

namespace curved {

/// Seeded generator with portable uniform/normal draws. std::uniform_real_distribution
/// is implementation-defined, so draws are built directly from the 64-bit engine output.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  int uniform_int(int lo, int hi_inclusive) {
    const auto span = static_cast<std::uint64_t>(hi_inclusive - lo + 1);
    return lo + static_cast<int>(engine_() % span);
  }

  double normal() {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
  }

  /// Uniform point on the unit sphere (Archimedes: z uniform, longitude uniform).
  Vector3 unit_vector() {
    const double z = uniform(-1.0, 1.0);
    const double phi = uniform(0.0, kTwoPi);
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    return {r * std::cos(phi), r * std::sin(phi), z};
  }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

/// Running mean / standard error accumulator (Welford).
class MeanAccumulator {
 public:
  void add(double x) {
    ++n_;
    const double d = x - mean_;
    mean_ += d / static_cast<double>(n_);
    m2_ += d * (x - mean_);
  }

  std::uint64_t count() const { return n_; }
  double mean() const { return mean_; }
  double variance() const { return n_ > 1 ? m2_ / static_cast<double>(n_ - 1) : 0.0; }
  double standard_error() const { return n_ > 0 ? std::sqrt(variance() / static_cast<double>(n_)) : 0.0; }

 private:
  std::uint64_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

struct Estimate {
  double value = 0.0;
  double standard_error = 0.0;
  std::uint64_t samples = 0;
  bool degenerate = false;
};

/// Monte Carlo area of a region of the unit sphere given by a membership predicate.
template <class Predicate>
Estimate sphere_region_area(Predicate&& inside, std::uint64_t samples, std::uint64_t seed) {
  Rng rng(seed);
  std::uint64_t hits = 0;
  for (std::uint64_t i = 0; i < samples; ++i) {
    if (inside(rng.unit_vector())) ++hits;
  }
  const double n = static_cast<double>(samples);
  const double p = static_cast<double>(hits) / n;
  Estimate e;
  e.value = 4.0 * kPi * p;
  e.standard_error = 4.0 * kPi * std::sqrt(p * (1.0 - p) / n);
  e.samples = samples;
  e.degenerate = hits == 0;
  return e;
}

}  // namespace curved
