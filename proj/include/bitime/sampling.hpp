#pragma once

#include "bitime/oracle.hpp"
#include "bitime/value_source.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace bitime::minitime {

/// Points of R(r) = {T <= r} near a base point of R^{2n}.
struct SublevelSample {
  std::vector<Vector> points;
  std::size_t drawn = 0;
  /// Numeric membership slack used when keeping points.
  double membership_slack = 0.0;
  /// Accuracy bound of the T source.
  double source_slack = 0.0;
};

/// Draws `count` points of B(center, delta) (finite-T draws, see
/// ValueSource::draw_finite) and keeps those with T <= r + slack.
/// Throws InsufficientSamples when fewer than 10 are kept.
SublevelSample sample_sublevel(const ValueSource& T, double r, const Vector& center, double delta,
                               std::size_t count, std::uint64_t seed);

/// Points ((x,y), lambda) of epi T near ((alpha,beta), r), in R^{2n+1}.
struct EpigraphSample {
  std::vector<Vector> points;
  std::size_t graph_points = 0;
  double source_slack = 0.0;
};

/// Up to `count` epigraph points within delta of (center, level). Each
/// finite-T draw z contributes the graph point (z, T(z)) and one point with
/// lambda uniform in [max(T(z), level - delta), level + delta], when they
/// fall inside the ball.
/// Throws InsufficientSamples when fewer than 10 are produced.
EpigraphSample sample_epigraph(const ValueSource& T, const Vector& center, double level, double delta,
                               std::size_t count, std::uint64_t seed);

struct BasicPropertyOptions {
  std::size_t triples = 1000;
  std::size_t lsc_points = 100;
  double lsc_radius = 0.1;
  int lsc_levels = 5;
  std::size_t lsc_samples = 64;
  /// Allowed undercut per unit radius at the smallest lsc radius.
  double lsc_rate = 3.0;
  std::size_t attainment_pairs = 0;
  std::uint64_t seed = 1;
};

struct BasicPropertyReport {
  double slack = 0.0;

  std::size_t triples_checked = 0;
  std::size_t triples_constrained = 0;  // right-hand side finite
  double max_triangle_violation = 0.0;
  bool triangle_ok = true;

  std::size_t diagonal_checked = 0;
  double max_diagonal_value = 0.0;
  bool diagonal_ok = true;

  std::size_t lsc_checked = 0;
  /// Largest undercut at the smallest radius minus its allowance (<= 0 passes).
  double max_lsc_excess = -kInf;
  bool lsc_ok = true;

  std::size_t attainment_checked = 0;
  double max_attainment_gap = 0.0;
  bool attainment_ok = true;

  bool ok() const { return triangle_ok && diagonal_ok && lsc_ok && attainment_ok; }
};

/// Triangle inequality on triples drawn from `points`, T(p,p) = 0, an lsc
/// proxy (min of T over shrinking balls never undercuts T by more than the
/// slack plus lsc_rate * radius), and attainment through the oracle witness
/// when `f` is given.
///
/// For sources with fixed targets the triples and lsc centers use only the
/// pooled targets, and lsc balls perturb x alone.
BasicPropertyReport check_basic_properties(const ValueSource& T, const std::vector<Vector>& points,
                                           const BasicPropertyOptions& opts, const Multifunction* f = nullptr,
                                           const trajectory::OracleOptions* oracle = nullptr);

}  // namespace bitime::minitime
