#pragma once

#include "bitime/value_source.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace bitime::varcalc {

using minitime::ValueSource;

/// (zeta, theta), optionally with the vertical component lambda of an
/// epigraph normal.
struct CandidateCovector {
  Vector zeta;
  Vector theta;
  std::optional<double> lambda;

  /// (zeta, theta) or (zeta, theta, lambda) as one vector.
  Vector joined() const;
  static CandidateCovector split(const Vector& c, std::size_t n);
};

/// Outcome of a sampled epsilon-delta inequality. Violations are lhs - rhs,
/// so pass iff worst_violation <= 0.
struct MembershipVerdict {
  bool pass = true;
  double eps = 0.0;
  double delta = 0.0;
  std::size_t sample_count = 0;
  double worst_violation = -kInf;
  Vector worst_witness;
  /// Smallest eps at which every sample would pass.
  double required_eps = 0.0;
};

/// max over samples y of <c, y - x> - eps |y - x|.
/// Samples must lie within delta of x; at least 30 are required.
MembershipVerdict frechet_normal_test(const std::vector<Vector>& samples, const Vector& x, const Vector& c,
                                      double eps, double delta);

/// Fixed sample set for subgradient tests at one point: finite-T draws z
/// near z0 with their values.
struct ValueSamples {
  Vector base;
  double base_value = 0.0;
  double delta = 0.0;
  std::vector<Vector> points;
  std::vector<double> values;
};

/// `count` finite-T draws in B(z0, delta). Throws InvalidArgument when
/// T(z0) is infinite and InsufficientSamples when fewer than 30 are finite.
ValueSamples draw_value_samples(const ValueSource& T, const Vector& z0, double delta, std::size_t count,
                                std::uint64_t seed);

/// max over samples of <c, z - z0> - [T(z) - T(z0)] - eps |z - z0|.
/// Samples with T = +inf impose nothing and are never drawn.
MembershipVerdict frechet_subgrad_test(const ValueSamples& s, const Vector& c, double eps);
MembershipVerdict frechet_subgrad_test(const ValueSource& T, const Vector& z0, const Vector& c, double eps,
                                       double delta, std::size_t count, std::uint64_t seed);

/// Epigraph samples (z, lambda) near (z0, T(z0)).
struct EpigraphSamples {
  Vector base;  // (z0, T(z0))
  double delta = 0.0;
  std::vector<Vector> points;
};

EpigraphSamples draw_epigraph_samples(const ValueSource& T, const Vector& z0, double delta, std::size_t count,
                                      std::uint64_t seed);

/// max over epigraph samples of <c, z - z0> - eps (|z - z0| + |lambda - T(z0)|).
MembershipVerdict singular_subgrad_test(const EpigraphSamples& s, const Vector& c, double eps);
MembershipVerdict singular_subgrad_test(const ValueSource& T, const Vector& z0, const Vector& c, double eps,
                                        double delta, std::size_t count, std::uint64_t seed);

struct ConeOptions {
  std::size_t direction_count = 4096;
  double eps = 0.05;
  double delta = 0.1;
  /// Relative singular-value cutoff for the dimension.
  double rank_tol = 0.25;
  /// Scan directions with max <c,u> - eps below this start a refinement.
  double start_threshold = 0.35;
  /// Refined generators satisfy max <c,u> <= (1 - margin) eps.
  double margin = 0.8;
  int max_iters = 400;
  double dedup_angle = 1e-3;
  std::uint64_t seed = 7;
};

struct ConeEstimate {
  Vector base;
  std::vector<Vector> generators;  // unit
  int dimension = 0;
  double rank_tol = 0.0;
  std::size_t direction_count = 0;
  double eps = 0.0;
  double delta = 0.0;
  std::size_t sample_count = 0;
  /// Scan directions that passed the test without refinement.
  std::size_t scan_hits = 0;
};

/// Scans quasi-uniform unit covectors; directions close to passing are
/// driven into the sampled polar cone by cyclic projection (a direction that
/// collapses to the apex or does not settle is dropped). Survivors pass
/// frechet_normal_test at eps with room to spare, are deduplicated at
/// dedup_angle and ranked.
ConeEstimate estimate_normal_cone(const std::vector<Vector>& samples, const Vector& x, const ConeOptions& opts);

/// Generators projected onto the span of the leading `dimension` singular
/// directions and renormalized. Components cut by the rank estimate are
/// treated as sampling blur.
std::vector<Vector> principal_generators(const ConeEstimate& cone);

/// Numerical rank of the stacked generators with cutoff rank_tol * sigma_max.
int cone_dimension(const std::vector<Vector>& generators, double rank_tol);

struct FdGradient {
  Vector grad;
  std::vector<bool> one_sided;
  std::vector<bool> undefined;

  bool smooth() const;  // central differences on every coordinate
  bool defined() const;
};

/// Central differences where T is finite on both sides, one-sided otherwise.
/// Throws InvalidArgument when T(z) is infinite.
FdGradient gradient_fd(const ValueSource& T, const Vector& z, double h);

}  // namespace bitime::varcalc
