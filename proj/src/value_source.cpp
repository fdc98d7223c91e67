#include "bitime/value_source.hpp"

#include <cmath>

namespace bitime::minitime {

namespace {

constexpr int kAttempts = 64;

}  // namespace

double ValueSource::value(const Vector& z) const {
  const auto n = static_cast<Eigen::Index>(dim());
  if (z.size() != 2 * n) throw InvalidArgument("product point dimension mismatch");
  return value(Vector(z.head(n)), Vector(z.tail(n)));
}

std::optional<Vector> ValueSource::draw_finite(const Vector& center, double radius, Rng& rng) const {
  const auto n = static_cast<Eigen::Index>(dim());
  for (int k = 0; k < kAttempts; ++k) {
    Vector z;
    if (rng.uniform() < 0.25) {
      const Vector a = rng.in_ball(Vector::Zero(n), radius / std::sqrt(2.0));
      z = center + join(a, a);
    } else {
      z = rng.in_ball(center, radius);
    }
    if (is_finite(value(z))) return z;
  }
  return std::nullopt;
}

std::optional<Vector> ClosedFormSource::draw_finite(const Vector& center, double radius, Rng& rng) const {
  if (sys_.tag != SystemTag::Drift) return ValueSource::draw_finite(center, radius, rng);
  const auto n = static_cast<Eigen::Index>(sys_.dim);
  const Vector vhat = sys_.drift.normalized();
  const Vector cx = center.head(n);
  const Vector cy = center.tail(n);
  const double s0 = (cy - cx).dot(vhat);
  if (!is_finite(value(center))) return ValueSource::draw_finite(center, radius, rng);
  // Coordinates (a, t) of the reachable set near the center: (cx + a, cy + a + t vhat).
  for (int k = 0; k < kAttempts; ++k) {
    const Vector at = rng.in_ball(Vector::Zero(n + 1), radius);
    const Vector a = at.head(n);
    const double t = at[n];
    if (s0 + t < 0.0) continue;
    Vector z = join(cx + a, cy + a + t * vhat);
    if ((z - center).norm() > radius) continue;
    return z;
  }
  return std::nullopt;
}

PatchSource::PatchSource(ProductPatch patch) : patch_(std::move(patch)) {
  const auto& f = patch_.fields.front();
  slack_ = 2.0 * (patch_.solve_grid.max_spacing() + f.rho);
}

TargetPoolSource::TargetPoolSource(const Multifunction& f, const GridSpec& grid, const std::vector<Vector>& targets,
                                   const SolverOptions& opts)
    : grid_(grid), targets_(targets) {
  DepartureTable table(f, grid, opts);
  for (const auto& t : targets_) fields_.push_back(solve_unilateral(table, t, opts));
  slack_ = 2.0 * (grid.max_spacing() + opts.rho);
}

double TargetPoolSource::value(const Vector& x, const Vector& y) const {
  for (std::size_t i = 0; i < targets_.size(); ++i) {
    if ((targets_[i] - y).norm() <= 1e-12) return fields_[i].at(x);
  }
  throw InvalidArgument("target not in the solved pool");
}

bool TargetPoolSource::all_converged() const {
  for (const auto& f : fields_) {
    if (!f.converged) return false;
  }
  return true;
}

}  // namespace bitime::minitime
