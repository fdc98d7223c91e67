#include "bitime/sampling.hpp"

#include <algorithm>
#include <cmath>

namespace bitime::minitime {

SublevelSample sample_sublevel(const ValueSource& T, double r, const Vector& center, double delta,
                               std::size_t count, std::uint64_t seed) {
  if (!(r > 0.0)) throw InvalidArgument("sub-level: r must be positive");
  if (!(delta > 0.0)) throw InvalidArgument("sub-level: delta must be positive");
  SublevelSample out;
  out.membership_slack = 1e-9 * (1.0 + r);
  out.source_slack = T.slack();
  Rng rng(seed);
  for (std::size_t i = 0; i < count; ++i) {
    ++out.drawn;
    const auto z = T.draw_finite(center, delta, rng);
    if (!z) continue;
    if (T.value(*z) <= r + out.membership_slack) out.points.push_back(*z);
  }
  if (out.points.size() < 10) throw InsufficientSamples("sub-level sample", out.points.size(), 10);
  return out;
}

EpigraphSample sample_epigraph(const ValueSource& T, const Vector& center, double level, double delta,
                               std::size_t count, std::uint64_t seed) {
  if (!(delta > 0.0)) throw InvalidArgument("epigraph: delta must be positive");
  EpigraphSample out;
  out.source_slack = T.slack();
  Rng rng(seed);
  const Vector base = (Vector(center.size() + 1) << center, level).finished();
  const std::size_t attempts = 20 * count;
  for (std::size_t k = 0; k < attempts && out.points.size() < count; ++k) {
    const auto z = T.draw_finite(center, delta, rng);
    if (!z) continue;
    const double t = T.value(*z);
    Vector p(base.size());
    p << *z, t;
    if ((p - base).norm() <= delta) {
      out.points.push_back(p);
      ++out.graph_points;
    }
    const double lo = std::max(t, level - delta);
    if (lo > level + delta) continue;
    p[p.size() - 1] = rng.uniform(lo, level + delta);
    if (out.points.size() < count && (p - base).norm() <= delta) out.points.push_back(p);
  }
  if (out.points.size() < 10) throw InsufficientSamples("epigraph sample", out.points.size(), 10);
  return out;
}

BasicPropertyReport check_basic_properties(const ValueSource& T, const std::vector<Vector>& points,
                                           const BasicPropertyOptions& opts, const Multifunction* f,
                                           const trajectory::OracleOptions* oracle) {
  if (points.size() < 2) throw InvalidArgument("basic properties: need at least two points");
  BasicPropertyReport rep;
  rep.slack = T.slack();
  Rng rng(opts.seed);
  const auto pick = [&]() -> const Vector& {
    return points[static_cast<std::size_t>(rng.uniform() * static_cast<double>(points.size()))];
  };

  const double tri_tol = 2.0 * rep.slack + 1e-9;
  for (std::size_t k = 0; k < opts.triples; ++k) {
    const Vector& a = pick();
    const Vector& c = pick();
    const Vector& b = pick();
    ++rep.triples_checked;
    const double rhs = T.value(a, c) + T.value(c, b);
    if (!is_finite(rhs)) continue;
    ++rep.triples_constrained;
    const double lhs = T.value(a, b);
    const double v = is_finite(lhs) ? lhs - rhs : kInf;
    rep.max_triangle_violation = std::max(rep.max_triangle_violation, v);
  }
  rep.triangle_ok = rep.max_triangle_violation <= tri_tol;

  const double diag_tol = 0.5 * rep.slack + 1e-12;
  for (const auto& p : points) {
    ++rep.diagonal_checked;
    rep.max_diagonal_value = std::max(rep.max_diagonal_value, T.value(p, p));
  }
  rep.diagonal_ok = rep.max_diagonal_value <= diag_tol;

  const auto n = static_cast<Eigen::Index>(T.dim());
  std::size_t tries = 0;
  while (rep.lsc_checked < opts.lsc_points && tries < 20 * opts.lsc_points) {
    ++tries;
    const Vector x = pick();
    const Vector y = pick();
    const double t0 = T.value(x, y);
    if (!is_finite(t0)) continue;
    ++rep.lsc_checked;
    double radius = opts.lsc_radius;
    double undercut = 0.0;
    for (int level = 0; level < opts.lsc_levels; ++level) {
      undercut = 0.0;
      for (std::size_t s = 0; s < opts.lsc_samples; ++s) {
        double t;
        if (T.fixed_targets()) {
          t = T.value(rng.in_ball(x, radius), y);
        } else {
          const Vector z = rng.in_ball(join(x, y), radius);
          t = T.value(Vector(z.head(n)), Vector(z.tail(n)));
        }
        if (is_finite(t)) undercut = std::max(undercut, t0 - t);
      }
      if (level + 1 < opts.lsc_levels) radius *= 0.5;
    }
    const double excess = undercut - (rep.slack + opts.lsc_rate * radius + 1e-9);
    rep.max_lsc_excess = std::max(rep.max_lsc_excess, excess);
  }
  rep.lsc_ok = rep.max_lsc_excess <= 0.0;

  if (f != nullptr && opts.attainment_pairs > 0) {
    const trajectory::OracleOptions oo = oracle != nullptr ? *oracle : trajectory::OracleOptions{};
    tries = 0;
    while (rep.attainment_checked < opts.attainment_pairs && tries < 50 * opts.attainment_pairs) {
      ++tries;
      const Vector a = pick();
      const Vector b = pick();
      const double t = T.value(a, b);
      if (!is_finite(t) || t > oo.horizon - 0.1 || t < 4.0 * oo.terminal_tol) continue;
      ++rep.attainment_checked;
      const auto res = trajectory::brute_force_min_time(*f, a, b, oo);
      if (!res.witness || res.terminal_error > oo.terminal_tol * (1.0 + 1e-9)) {
        rep.attainment_ok = false;
        rep.max_attainment_gap = kInf;
        continue;
      }
      rep.max_attainment_gap = std::max(rep.max_attainment_gap, std::abs(res.minimal_time - t));
    }
    if (rep.max_attainment_gap > rep.slack + oo.terminal_tol + 0.05) rep.attainment_ok = false;
  }
  return rep;
}

}  // namespace bitime::minitime
