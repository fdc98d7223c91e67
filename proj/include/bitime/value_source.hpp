#pragma once

#include "bitime/closed_form.hpp"
#include "bitime/random.hpp"
#include "bitime/solver.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace bitime::minitime {

/// Anything that evaluates T(x, y). Points of the product space are written
/// z = (x, y) in R^{2n}.
class ValueSource {
 public:
  virtual ~ValueSource() = default;

  /// State dimension n.
  virtual std::size_t dim() const = 0;
  virtual double value(const Vector& x, const Vector& y) const = 0;
  /// Accuracy bound on value(); 0 for exact sources.
  virtual double slack() const = 0;
  virtual bool backed_by_grid() const = 0;
  virtual std::string describe() const = 0;
  /// True when only a fixed set of targets y can be evaluated.
  virtual bool fixed_targets() const { return false; }

  double value(const Vector& z) const;

  /// A point of B(center, radius) in R^{2n} where T is finite, or nothing
  /// after a bounded number of attempts. The default mixes uniform ball
  /// draws with draws along the translation directions (a, a), on which T is
  /// often constant.
  virtual std::optional<Vector> draw_finite(const Vector& center, double radius, Rng& rng) const;
};

/// Exact T for a benchmark system.
class ClosedFormSource : public ValueSource {
 public:
  explicit ClosedFormSource(BenchmarkSystem sys) : sys_(std::move(sys)) {}

  std::size_t dim() const override { return sys_.dim; }
  double value(const Vector& x, const Vector& y) const override { return closed_form_T(sys_, x, y); }
  double slack() const override { return 0.0; }
  bool backed_by_grid() const override { return false; }
  std::string describe() const override { return "closed-form " + tag_name(sys_.tag); }
  using ValueSource::value;

  /// The drift system is finite only on {(a, a + s v) : s >= 0}; draws are
  /// made on that set directly.
  std::optional<Vector> draw_finite(const Vector& center, double radius, Rng& rng) const override;

  const BenchmarkSystem& system() const { return sys_; }

 private:
  BenchmarkSystem sys_;
};

/// T from a product patch of grid solves.
class PatchSource : public ValueSource {
 public:
  explicit PatchSource(ProductPatch patch);

  std::size_t dim() const override { return patch_.y_grid.dim(); }
  double value(const Vector& x, const Vector& y) const override { return patch_.value(x, y); }
  /// 2 (dx + rho).
  double slack() const override { return slack_; }
  bool backed_by_grid() const override { return true; }
  std::string describe() const override { return "grid product patch"; }
  using ValueSource::value;

  const ProductPatch& patch() const { return patch_; }

 private:
  ProductPatch patch_;
  double slack_;
};

/// T(., y) for a finite pool of targets y, one unilateral solve each.
class TargetPoolSource : public ValueSource {
 public:
  TargetPoolSource(const Multifunction& f, const GridSpec& grid, const std::vector<Vector>& targets,
                   const SolverOptions& opts);

  std::size_t dim() const override { return grid_.dim(); }
  /// Throws InvalidArgument when y is not one of the pooled targets.
  double value(const Vector& x, const Vector& y) const override;
  double slack() const override { return slack_; }
  bool backed_by_grid() const override { return true; }
  bool fixed_targets() const override { return true; }
  std::string describe() const override { return "grid target pool"; }
  using ValueSource::value;

  const std::vector<Vector>& targets() const { return targets_; }
  const ValueField& field(std::size_t i) const { return fields_[i]; }
  bool all_converged() const;

 private:
  GridSpec grid_;
  std::vector<Vector> targets_;
  std::vector<ValueField> fields_;
  double slack_;
};

}  // namespace bitime::minitime
