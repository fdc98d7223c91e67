#include "bitime/varcalc.hpp"

#include "bitime/sampling.hpp"

#include <algorithm>
#include <cmath>

namespace bitime::varcalc {

Vector CandidateCovector::joined() const {
  Vector out(zeta.size() + theta.size() + (lambda ? 1 : 0));
  out.head(zeta.size()) = zeta;
  out.segment(zeta.size(), theta.size()) = theta;
  if (lambda) out[out.size() - 1] = *lambda;
  return out;
}

CandidateCovector CandidateCovector::split(const Vector& c, std::size_t n) {
  const auto k = static_cast<Eigen::Index>(n);
  if (c.size() != 2 * k && c.size() != 2 * k + 1) throw InvalidArgument("candidate dimension mismatch");
  CandidateCovector out{c.head(k), c.segment(k, k), std::nullopt};
  if (c.size() == 2 * k + 1) out.lambda = c[2 * k];
  return out;
}

MembershipVerdict frechet_normal_test(const std::vector<Vector>& samples, const Vector& x, const Vector& c,
                                      double eps, double delta) {
  if (samples.size() < 30) throw InsufficientSamples("normal test", samples.size(), 30);
  MembershipVerdict v;
  v.eps = eps;
  v.delta = delta;
  v.sample_count = samples.size();
  for (const auto& y : samples) {
    const Vector d = y - x;
    const double dist = d.norm();
    if (dist > delta * (1.0 + 1e-12)) throw InvalidArgument("normal test: sample farther than delta");
    const double viol = c.dot(d) - eps * dist;
    if (dist > 0.0) v.required_eps = std::max(v.required_eps, c.dot(d) / dist);
    if (viol > v.worst_violation) {
      v.worst_violation = viol;
      v.worst_witness = y;
    }
  }
  v.pass = v.worst_violation <= 0.0;
  return v;
}

ValueSamples draw_value_samples(const ValueSource& T, const Vector& z0, double delta, std::size_t count,
                                std::uint64_t seed) {
  ValueSamples s;
  s.base = z0;
  s.base_value = T.value(z0);
  s.delta = delta;
  if (!is_finite(s.base_value)) throw InvalidArgument("subgradient test at a point with infinite T");
  Rng rng(seed);
  for (std::size_t i = 0; i < count; ++i) {
    const auto z = T.draw_finite(z0, delta, rng);
    if (!z) continue;
    s.points.push_back(*z);
    s.values.push_back(T.value(*z));
  }
  if (s.points.size() < 30) throw InsufficientSamples("subgradient test", s.points.size(), 30);
  return s;
}

MembershipVerdict frechet_subgrad_test(const ValueSamples& s, const Vector& c, double eps) {
  MembershipVerdict v;
  v.eps = eps;
  v.delta = s.delta;
  v.sample_count = s.points.size();
  for (std::size_t i = 0; i < s.points.size(); ++i) {
    const Vector d = s.points[i] - s.base;
    const double viol = c.dot(d) - (s.values[i] - s.base_value) - eps * d.norm();
    if (d.norm() > 0.0) v.required_eps = std::max(v.required_eps, (viol + eps * d.norm()) / d.norm());
    if (viol > v.worst_violation) {
      v.worst_violation = viol;
      v.worst_witness = s.points[i];
    }
  }
  v.pass = v.worst_violation <= 0.0;
  return v;
}

MembershipVerdict frechet_subgrad_test(const ValueSource& T, const Vector& z0, const Vector& c, double eps,
                                       double delta, std::size_t count, std::uint64_t seed) {
  return frechet_subgrad_test(draw_value_samples(T, z0, delta, count, seed), c, eps);
}

EpigraphSamples draw_epigraph_samples(const ValueSource& T, const Vector& z0, double delta, std::size_t count,
                                      std::uint64_t seed) {
  const double t0 = T.value(z0);
  if (!is_finite(t0)) throw InvalidArgument("singular test at a point with infinite T");
  const auto epi = minitime::sample_epigraph(T, z0, t0, delta, count, seed);
  if (epi.points.size() < 30) throw InsufficientSamples("singular test", epi.points.size(), 30);
  EpigraphSamples s;
  s.base = (Vector(z0.size() + 1) << z0, t0).finished();
  s.delta = delta;
  s.points = epi.points;
  return s;
}

MembershipVerdict singular_subgrad_test(const EpigraphSamples& s, const Vector& c, double eps) {
  MembershipVerdict v;
  v.eps = eps;
  v.delta = s.delta;
  v.sample_count = s.points.size();
  const Eigen::Index m = s.base.size() - 1;
  for (const auto& p : s.points) {
    const Vector dz = p.head(m) - s.base.head(m);
    const double dl = std::abs(p[m] - s.base[m]);
    const double viol = c.dot(dz) - eps * (dz.norm() + dl);
    if (dz.norm() + dl > 0.0) v.required_eps = std::max(v.required_eps, c.dot(dz) / (dz.norm() + dl));
    if (viol > v.worst_violation) {
      v.worst_violation = viol;
      v.worst_witness = p;
    }
  }
  v.pass = v.worst_violation <= 0.0;
  return v;
}

MembershipVerdict singular_subgrad_test(const ValueSource& T, const Vector& z0, const Vector& c, double eps,
                                        double delta, std::size_t count, std::uint64_t seed) {
  return singular_subgrad_test(draw_epigraph_samples(T, z0, delta, count, seed), c, eps);
}

int cone_dimension(const std::vector<Vector>& generators, double rank_tol) {
  if (generators.empty()) return 0;
  Matrix g(static_cast<Eigen::Index>(generators.size()), generators.front().size());
  for (std::size_t i = 0; i < generators.size(); ++i) g.row(static_cast<Eigen::Index>(i)) = generators[i].transpose();
  Eigen::JacobiSVD<Matrix> svd(g);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || !(sv[0] > 0.0)) return 0;
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv[i] > rank_tol * sv[0]) ++rank;
  }
  return rank;
}

std::vector<Vector> principal_generators(const ConeEstimate& cone) {
  const auto& gens = cone.generators;
  if (gens.empty() || cone.dimension <= 0) return {};
  Matrix g(static_cast<Eigen::Index>(gens.size()), gens.front().size());
  for (std::size_t i = 0; i < gens.size(); ++i) g.row(static_cast<Eigen::Index>(i)) = gens[i].transpose();
  Eigen::JacobiSVD<Matrix> svd(g, Eigen::ComputeThinV);
  const Matrix v = svd.matrixV().leftCols(cone.dimension);
  std::vector<Vector> out;
  out.reserve(gens.size());
  for (const auto& u : gens) {
    const Vector p = v * (v.transpose() * u);
    const double n = p.norm();
    out.push_back(n > 0.0 ? Vector(p / n) : u);
  }
  return out;
}

ConeEstimate estimate_normal_cone(const std::vector<Vector>& samples, const Vector& x, const ConeOptions& opts) {
  if (samples.size() < 30) throw InsufficientSamples("normal cone", samples.size(), 30);
  const Eigen::Index dim = x.size();
  ConeEstimate est;
  est.base = x;
  est.rank_tol = opts.rank_tol;
  est.direction_count = opts.direction_count;
  est.eps = opts.eps;
  est.delta = opts.delta;
  est.sample_count = samples.size();

  // Unit directions toward the samples.
  Matrix u(static_cast<Eigen::Index>(samples.size()), dim);
  Eigen::Index rows = 0;
  for (const auto& y : samples) {
    const Vector d = y - x;
    const double n = d.norm();
    if (n > opts.delta * (1.0 + 1e-12)) throw InvalidArgument("normal cone: sample farther than delta");
    if (n <= 1e-14) continue;
    u.row(rows++) = (d / n).transpose();
  }
  u.conservativeResize(rows, dim);

  const auto dirs = sphere_directions(static_cast<std::size_t>(dim), opts.direction_count, opts.seed);
  std::vector<std::pair<double, std::size_t>> scored;
  scored.reserve(dirs.size());
  for (std::size_t i = 0; i < dirs.size(); ++i) {
    const double v = rows > 0 ? (u * dirs[i]).maxCoeff() - opts.eps : -opts.eps;
    if (v <= 0.0) ++est.scan_hits;
    scored.emplace_back(v, i);
  }
  std::vector<std::size_t> starts;
  for (const auto& [v, i] : scored) {
    if (v <= opts.start_threshold) starts.push_back(i);
  }
  if (starts.empty()) {
    std::stable_sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    for (std::size_t k = 0; k < std::min<std::size_t>(16, scored.size()); ++k) starts.push_back(scored[k].second);
  }

  const double target = (1.0 - opts.margin) * opts.eps;
  std::vector<Vector> found;
  for (std::size_t i : starts) {
    Vector c = dirs[i];
    bool ok = false;
    for (int it = 0; it < opts.max_iters; ++it) {
      if (rows == 0) {
        ok = true;
        break;
      }
      Eigen::Index j = 0;
      const double s = (u * c).maxCoeff(&j);
      if (s <= target) {
        ok = true;
        break;
      }
      // Project past the half-space boundary to avoid crawling along it.
      c -= (s - 0.5 * target) * u.row(j).transpose();
      const double n = c.norm();
      if (n < 0.05) break;
      c /= n;
    }
    if (ok) found.push_back(c);
  }

  for (const auto& g : found) {
    bool dup = false;
    for (const auto& h : est.generators) {
      if (std::acos(std::clamp(g.dot(h), -1.0, 1.0)) < opts.dedup_angle) {
        dup = true;
        break;
      }
    }
    if (!dup) est.generators.push_back(g);
  }
  est.dimension = cone_dimension(est.generators, opts.rank_tol);
  return est;
}

bool FdGradient::smooth() const {
  for (std::size_t i = 0; i < one_sided.size(); ++i) {
    if (one_sided[i] || undefined[i]) return false;
  }
  return true;
}

bool FdGradient::defined() const {
  return std::none_of(undefined.begin(), undefined.end(), [](bool b) { return b; });
}

FdGradient gradient_fd(const ValueSource& T, const Vector& z, double h) {
  if (!(h > 0.0)) throw InvalidArgument("gradient: step must be positive");
  const double t0 = T.value(z);
  if (!is_finite(t0)) throw InvalidArgument("gradient at a point with infinite T");
  FdGradient g;
  g.grad = Vector::Zero(z.size());
  g.one_sided.assign(static_cast<std::size_t>(z.size()), false);
  g.undefined.assign(static_cast<std::size_t>(z.size()), false);
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    Vector zp = z;
    Vector zm = z;
    zp[i] += h;
    zm[i] -= h;
    const double tp = T.value(zp);
    const double tm = T.value(zm);
    const auto k = static_cast<std::size_t>(i);
    if (is_finite(tp) && is_finite(tm)) {
      g.grad[i] = (tp - tm) / (2.0 * h);
    } else if (is_finite(tp)) {
      g.grad[i] = (tp - t0) / h;
      g.one_sided[k] = true;
    } else if (is_finite(tm)) {
      g.grad[i] = (t0 - tm) / h;
      g.one_sided[k] = true;
    } else {
      g.undefined[k] = true;
    }
  }
  return g;
}

}  // namespace bitime::varcalc
