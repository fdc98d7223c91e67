#pragma once

#include "bitime/trajectory.hpp"

#include <optional>

namespace bitime::trajectory {

struct OracleOptions {
  double horizon = 3.0;
  /// Number of piecewise-constant stages over the horizon.
  int stages = 2;
  /// Pattern-search rounds; the step halves each round starting from 0.5.
  int refine_rounds = 14;
  /// Radius of the terminal ball around beta.
  double terminal_tol = 0.01;
  /// Largest integration step; the actual step divides every stage evenly.
  double dt_max = 0.01;
  /// Letters per stage for Ball/HalfBall.
  std::size_t ball_directions = 16;
  /// Cap on the number of coarse words enumerated per level.
  std::size_t max_words = 4096;
  /// Best coarse words refined per level.
  std::size_t seeds = 2;
  /// Trajectories leaving this box are discarded.
  std::optional<Box> box;
};

struct OracleResult {
  Vector alpha;
  Vector beta;
  /// Least time found to enter the terminal ball; kInf when none.
  double minimal_time = kInf;
  /// Present iff minimal_time is finite; ends inside the terminal ball.
  std::optional<Trajectory> witness;
  std::optional<Selection> selection;
  /// Distance to beta at the witness endpoint, or the best distance
  /// achieved anywhere when infeasible.
  double terminal_error = kInf;
};

/// Discretized search for the minimal time from alpha to beta: coarse
/// enumeration of letter words per stage, then local pattern search over the
/// per-stage controls. Stage counts are searched coarse to fine along a chain
/// of divisors of `stages`, each level seeded with the previous incumbent.
///
/// `warm_start`, when given, is an earlier result for the same endpoints and
/// multifunction; its witness remains a valid incumbent, so nested runs never
/// report a larger time.
OracleResult brute_force_min_time(const Multifunction& f, const Vector& alpha, const Vector& beta,
                                  const OracleOptions& opts, const OracleResult* warm_start = nullptr);

}  // namespace bitime::trajectory
