#include "bitime/random.hpp"

#include <array>
#include <numbers>

namespace bitime {

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u = 0.0;
  while (u <= 0.0) u = uniform();
  const double v = uniform();
  const double r = std::sqrt(-2.0 * std::log(u));
  spare_ = r * std::sin(2.0 * std::numbers::pi * v);
  has_spare_ = true;
  return r * std::cos(2.0 * std::numbers::pi * v);
}

Vector Rng::on_sphere(std::size_t dim) {
  Vector v(dim);
  double n = 0.0;
  while (n < 1e-12) {
    for (std::size_t i = 0; i < dim; ++i) v[i] = normal();
    n = v.norm();
  }
  return v / n;
}

Vector Rng::in_ball(const Vector& center, double radius) {
  const auto dim = static_cast<std::size_t>(center.size());
  const double r = radius * std::pow(uniform(), 1.0 / static_cast<double>(dim));
  return center + r * on_sphere(dim);
}

Vector Rng::in_box(const Box& box) {
  Vector x(box.lower.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = uniform(box.lower[i], box.upper[i]);
  return x;
}

namespace {

constexpr std::array<int, 12> kPrimes = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};

double radical_inverse(std::uint64_t i, int base) {
  double inv = 1.0 / base;
  double f = inv;
  double out = 0.0;
  while (i > 0) {
    out += f * static_cast<double>(i % static_cast<std::uint64_t>(base));
    i /= static_cast<std::uint64_t>(base);
    f *= inv;
  }
  return out;
}

}  // namespace

std::vector<Vector> sphere_directions(std::size_t dim, std::size_t count, std::uint64_t seed) {
  if (dim == 0) throw InvalidArgument("sphere_directions: dimension must be positive");
  const std::size_t halton_dims = dim + (dim % 2);
  if (halton_dims > kPrimes.size()) throw InvalidArgument("sphere_directions: dimension too large");
  Rng rng(seed);
  std::vector<double> shift(halton_dims);
  for (auto& s : shift) s = rng.uniform();

  std::vector<Vector> out;
  out.reserve(count);
  std::vector<double> u(halton_dims);
  for (std::uint64_t i = 1; out.size() < count; ++i) {
    for (std::size_t k = 0; k < halton_dims; ++k) {
      double v = radical_inverse(i, kPrimes[k]) + shift[k];
      u[k] = v - std::floor(v);
    }
    Vector g(halton_dims);
    bool ok = true;
    for (std::size_t k = 0; k + 1 < halton_dims; k += 2) {
      if (u[k] <= 0.0) {
        ok = false;
        break;
      }
      const double r = std::sqrt(-2.0 * std::log(u[k]));
      g[k] = r * std::cos(2.0 * std::numbers::pi * u[k + 1]);
      g[k + 1] = r * std::sin(2.0 * std::numbers::pi * u[k + 1]);
    }
    if (!ok) continue;
    Vector d = g.head(dim);
    const double n = d.norm();
    if (n < 1e-9) continue;
    out.push_back(d / n);
  }
  return out;
}

std::vector<Vector> even_directions(std::size_t dim, std::size_t count) {
  std::vector<Vector> out;
  out.reserve(count);
  if (dim == 1) {
    for (std::size_t k = 0; k < count; ++k) {
      Vector v(1);
      v[0] = (k % 2 == 0) ? 1.0 : -1.0;
      out.push_back(v);
    }
    return out;
  }
  if (dim == 2) {
    for (std::size_t k = 0; k < count; ++k) {
      const double a = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(count);
      Vector v(2);
      v << std::cos(a), std::sin(a);
      out.push_back(v);
    }
    return out;
  }
  return sphere_directions(dim, count, 0x5eed);
}

}  // namespace bitime
