#pragma once

#include "bitime/expr.hpp"
#include "bitime/types.hpp"

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace bitime::vfield {

/// n expressions giving one vector field.
using FieldExpr = std::vector<Expr>;

Vector eval_field(const FieldExpr& f, const Vector& x);

/// F(x) = convex hull of the vertex fields evaluated at x.
struct Polytopic {
  std::vector<FieldExpr> vertices;
};

/// F(x) = closed ball of `radius` around center(x).
struct Ball {
  FieldExpr center;
  double radius = 1.0;
};

/// F(x) = closed ball of `radius` around the origin intersected with the
/// half-space {v : orientation * v[axis] >= 0}. `axis` is 0-based.
struct HalfBall {
  double radius = 1.0;
  std::size_t axis = 0;
  double orientation = 1.0;
};

/// F(x) = {f(x)}.
struct Singleton {
  FieldExpr field;
};

using MultifunctionKind = std::variant<Polytopic, Ball, HalfBall, Singleton>;

/// A multifunction with exact support minimization. Immutable after
/// construction; all queries are pure.
class Multifunction {
 public:
  Multifunction(std::size_t dim, MultifunctionKind kind);

  std::size_t dim() const { return dim_; }
  const MultifunctionKind& kind() const { return kind_; }
  std::string kind_name() const;

  bool is_polytopic() const { return std::holds_alternative<Polytopic>(kind_); }
  bool is_ball() const { return std::holds_alternative<Ball>(kind_); }
  bool is_halfball() const { return std::holds_alternative<HalfBall>(kind_); }
  bool is_singleton() const { return std::holds_alternative<Singleton>(kind_); }

  /// Velocities whose convex hull is F(x). Polytopic and Singleton only.
  std::vector<Vector> eval_vertices(const Vector& x) const;

  /// h(x,p) = min over v in F(x) of <v,p>, evaluated in closed form.
  double hamiltonian(const Vector& x, const Vector& p) const;

  /// A minimizer of <v,p> over F(x). Polytopic ties go to the lowest vertex.
  Vector argmin_velocity(const Vector& x, const Vector& p) const;

  /// Largest Euclidean norm of an element of F(x).
  double max_speed(const Vector& x) const;

  /// Distance from v to F(x) (0 inside). Exact for Ball, HalfBall and
  /// Singleton; for Polytopic solved by nonnegative least squares over the
  /// hull weights.
  double distance_to(const Vector& x, const Vector& v) const;

  /// The multifunction -F, whose trajectories are those of F reversed in time.
  Multifunction negated() const;

  /// Finite velocity alphabet in F(x): Polytopic vertices, the field for
  /// Singleton, and `directions` evenly spaced feasible unit directions
  /// (scaled by the radius, shifted by the center) for Ball and HalfBall.
  /// The planar HalfBall rounds `directions` up to an odd count so that the
  /// axis direction is a letter.
  std::vector<Vector> alphabet(const Vector& x, std::size_t directions) const;

  /// Upper bound on the Hausdorff distance between F(x) and F(y). Exact for
  /// Ball, HalfBall and Singleton; the vertexwise bound for Polytopic.
  double hausdorff_bound(const Vector& x, const Vector& y) const;

 private:
  void check_point(const Vector& x) const;

  std::size_t dim_;
  MultifunctionKind kind_;
};

/// Convex weights w (w >= 0, sum 1) minimizing ||sum_i w_i v_i - target||.
/// Among near-optimal solutions the minimum-norm weights are preferred, so
/// coincident vertices share weight evenly.
Vector hull_weights(const std::vector<Vector>& vertices, const Vector& target);

/// Empirical estimates of the Lipschitz and linear-growth constants over a
/// box. Suprema over a finite sample, hence lower bounds of the true values.
struct AssumptionReport {
  double lipschitz = 0.0;
  double growth_gamma = 0.0;
  double growth_c = 0.0;
  std::size_t sample_count = 0;
  Box box;
};

AssumptionReport check_assumptions(const Multifunction& f, const Box& box, std::size_t samples,
                                   std::uint64_t seed);

}  // namespace bitime::vfield
