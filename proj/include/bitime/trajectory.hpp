#pragma once

#include "bitime/multifunction.hpp"
#include "bitime/types.hpp"

#include <optional>
#include <vector>

namespace bitime::trajectory {

using vfield::Multifunction;

/// Control held on one interval of a selection.
///
/// Polytopic: convex weights over the vertex fields (size = vertex count).
/// Ball: u with |u| <= 1, velocity = center(x) + radius * u.
/// HalfBall: u with |u| <= 1 on the feasible side, velocity = radius * u.
/// Singleton: empty.
using Control = Vector;

/// Piecewise-constant selection. `controls[i]` is active on
/// [breakpoints[i], breakpoints[i+1]); the last control stays active forever.
/// `breakpoints[0]` must be 0.
struct Selection {
  std::vector<double> breakpoints;
  std::vector<Control> controls;

  static Selection constant(Control c) { return Selection{{0.0}, {std::move(c)}}; }
  const Control& at(double t) const;
};

/// Throws InvalidArgument unless `c` is an admissible control for `f`.
void validate_control(const Multifunction& f, const Control& c);

/// Realized velocity of control `c` at state `x`.
Vector velocity(const Multifunction& f, const Vector& x, const Control& c);

/// Control whose velocity at `x` equals `v`. Throws InvalidArgument when
/// v lies farther than `tol` from F(x).
Control control_for_velocity(const Multifunction& f, const Vector& x, const Vector& v, double tol = 1e-9);

/// Control realizing the i-th alphabet letter (see Multifunction::alphabet).
std::vector<Control> letter_controls(const Multifunction& f, std::size_t directions);

/// One classical fourth-order Runge-Kutta step. `max_speed`, when given, is
/// raised to the largest stage velocity norm seen.
Vector rk4_step(const Multifunction& f, const Vector& x, const Control& c, double h, double* max_speed = nullptr);

struct Trajectory {
  std::vector<double> times;
  std::vector<Vector> states;
  std::vector<Vector> velocities;  // realized velocity at each stored time
  /// Largest stage speed met during integration; |x(t)-x(0)| <= M t holds for it.
  double gronwall_m = 0.0;
  bool truncated = false;  // left the declared box; integration stopped there

  const Vector& start() const { return states.front(); }
  const Vector& end() const { return states.back(); }
  /// Largest violation of |x(t)-x(0)| <= M t over stored samples (<= 0 when it holds).
  double gronwall_violation() const;
};

/// Integrates x' = velocity(f, x, sel.at(t)) from x0 over [0, horizon] with
/// fixed step dt (steps are split at breakpoints). Stops with `truncated`
/// set when the state leaves `box`.
Trajectory integrate(const Multifunction& f, const Vector& x0, const Selection& sel, double horizon, double dt,
                     const std::optional<Box>& box = std::nullopt);

struct EmanatingTrajectory {
  Trajectory trajectory;
  Control control;
  /// Empirical constant with |x'(t) - v| <= K t on the stored samples.
  double k_constant = 0.0;
};

/// Trajectory leaving x with initial velocity v in F(x), holding the
/// realizing control fixed on [0, tau].
EmanatingTrajectory emanating_trajectory(const Multifunction& f, const Vector& x, const Vector& v, double tau,
                                         double dt = 1e-3);

}  // namespace bitime::trajectory
