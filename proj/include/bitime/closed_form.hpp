#pragma once

#include "bitime/multifunction.hpp"
#include "bitime/types.hpp"

#include <optional>
#include <string>

namespace bitime::minitime {

enum class SystemTag { Eikonal, Box, Drift, HalfBall };

std::string tag_name(SystemTag tag);
/// Throws InvalidArgument for unknown names.
SystemTag parse_tag(const std::string& name);

/// A benchmark system with an analytic minimal time.
///
/// eikonal: F = unit ball, T = |d|.
/// box: F = hull of the 2^n sign vectors, T = |d|_inf.
/// drift: F = {v}, T = s when d = s v with s >= 0, else +inf.
/// halfball: F = unit ball cut by {v[axis] >= 0}, T = |d| when d[axis] >= 0.
/// Here d = beta - alpha.
struct BenchmarkSystem {
  SystemTag tag = SystemTag::Eikonal;
  std::size_t dim = 2;
  Vector drift;          // drift only
  std::size_t axis = 0;  // halfball only, 0-based

  static BenchmarkSystem eikonal(std::size_t dim = 2);
  static BenchmarkSystem box(std::size_t dim = 2);
  static BenchmarkSystem drift_along(const Vector& v);
  static BenchmarkSystem halfball(std::size_t dim = 2, std::size_t axis = 0);

  vfield::Multifunction multifunction() const;
};

double closed_form_T(const BenchmarkSystem& sys, const Vector& alpha, const Vector& beta);

}  // namespace bitime::minitime
