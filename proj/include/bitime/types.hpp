#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>

namespace bitime {

/// State points, velocities and covectors all live in R^n.
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Sentinel for unreachable pairs.
inline constexpr double kInf = std::numeric_limits<double>::infinity();

inline bool is_finite(double v) { return std::isfinite(v); }

/// Base of all recoverable errors thrown by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Expression text could not be parsed. `offset` is the 0-based byte offset.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : Error(what + " at offset " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

/// Division by zero, sqrt of a negative number, non-finite result.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Invalid argument or violated precondition.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A sampled test could not gather enough admissible samples.
class InsufficientSamples : public Error {
 public:
  InsufficientSamples(const std::string& what, std::size_t got, std::size_t needed)
      : Error(what + ": " + std::to_string(got) + " samples, need " +
              std::to_string(needed)),
        got_(got),
        needed_(needed) {}
  std::size_t got() const { return got_; }
  std::size_t needed() const { return needed_; }

 private:
  std::size_t got_;
  std::size_t needed_;
};

/// Axis-aligned compact box.
struct Box {
  Vector lower;
  Vector upper;

  std::size_t dim() const { return static_cast<std::size_t>(lower.size()); }
  bool contains(const Vector& x, double slack = 0.0) const {
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      if (x[i] < lower[i] - slack || x[i] > upper[i] + slack) return false;
    }
    return true;
  }
  double diameter() const { return (upper - lower).norm(); }
};

/// Concatenation (x, y) of two state points.
inline Vector join(const Vector& x, const Vector& y) {
  Vector out(x.size() + y.size());
  out << x, y;
  return out;
}

}  // namespace bitime
