#pragma once

#include "bitime/types.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace bitime {

/// Seeded generator used everywhere randomness is needed. Distributions are
/// implemented here (not via <random> distributions) so that streams are
/// identical across standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double normal();

  /// Uniform point in the open ball B(center, radius).
  Vector in_ball(const Vector& center, double radius);
  /// Uniform unit vector in R^dim.
  Vector on_sphere(std::size_t dim);
  /// Uniform point in the box.
  Vector in_box(const Box& box);

  std::uint64_t next() { return engine_(); }

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// Quasi-uniform unit vectors: a randomly shifted Halton sequence pushed
/// through Box-Muller and normalized. Deterministic for a given seed.
std::vector<Vector> sphere_directions(std::size_t dim, std::size_t count, std::uint64_t seed);

/// Evenly spaced unit vectors. In 2D these are exact angles k*2pi/count;
/// in other dimensions a deterministic quasi-uniform set.
std::vector<Vector> even_directions(std::size_t dim, std::size_t count);

}  // namespace bitime
