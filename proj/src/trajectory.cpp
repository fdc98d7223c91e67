#include "bitime/trajectory.hpp"

#include "bitime/random.hpp"

#include <algorithm>
#include <cmath>

namespace bitime::trajectory {

using namespace vfield;

const Control& Selection::at(double t) const {
  std::size_t i = 0;
  while (i + 1 < breakpoints.size() && t >= breakpoints[i + 1]) ++i;
  return controls[i];
}

void validate_control(const Multifunction& f, const Control& c) {
  constexpr double tol = 1e-9;
  const auto& kind = f.kind();
  if (const auto* p = std::get_if<Polytopic>(&kind)) {
    if (static_cast<std::size_t>(c.size()) != p->vertices.size()) throw InvalidArgument("control weight count mismatch");
    if (c.minCoeff() < -tol) throw InvalidArgument("control weights must be nonnegative");
    if (std::abs(c.sum() - 1.0) > tol) throw InvalidArgument("control weights must sum to 1");
  } else if (const auto* h = std::get_if<HalfBall>(&kind)) {
    if (static_cast<std::size_t>(c.size()) != f.dim()) throw InvalidArgument("control dimension mismatch");
    if (c.norm() > 1.0 + tol) throw InvalidArgument("control magnitude exceeds the radius");
    if (h->orientation * c[static_cast<Eigen::Index>(h->axis)] < -tol) throw InvalidArgument("control outside the half-ball");
  } else if (std::holds_alternative<Ball>(kind)) {
    if (static_cast<std::size_t>(c.size()) != f.dim()) throw InvalidArgument("control dimension mismatch");
    if (c.norm() > 1.0 + tol) throw InvalidArgument("control magnitude exceeds the radius");
  }
}

Vector velocity(const Multifunction& f, const Vector& x, const Control& c) {
  const auto& kind = f.kind();
  if (const auto* p = std::get_if<Polytopic>(&kind)) {
    Vector v = Vector::Zero(x.size());
    for (std::size_t i = 0; i < p->vertices.size(); ++i) {
      const double w = c[static_cast<Eigen::Index>(i)];
      if (w != 0.0) v += w * eval_field(p->vertices[i], x);
    }
    return v;
  }
  if (const auto* b = std::get_if<Ball>(&kind)) return eval_field(b->center, x) + b->radius * c;
  if (const auto* h = std::get_if<HalfBall>(&kind)) return h->radius * c;
  return eval_field(std::get<Singleton>(kind).field, x);
}

Control control_for_velocity(const Multifunction& f, const Vector& x, const Vector& v, double tol) {
  const double dist = f.distance_to(x, v);
  if (dist > tol) {
    throw InvalidArgument("velocity is not in F(x): distance " + std::to_string(dist));
  }
  const auto& kind = f.kind();
  if (std::holds_alternative<Polytopic>(kind)) return hull_weights(f.eval_vertices(x), v);
  if (const auto* b = std::get_if<Ball>(&kind)) {
    Vector u = (v - eval_field(b->center, x)) / b->radius;
    if (u.norm() > 1.0) u.normalize();
    return u;
  }
  if (const auto* h = std::get_if<HalfBall>(&kind)) {
    Vector u = v / h->radius;
    const auto a = static_cast<Eigen::Index>(h->axis);
    if (h->orientation * u[a] < 0.0) u[a] = 0.0;
    if (u.norm() > 1.0) u.normalize();
    return u;
  }
  return Vector(0);
}

std::vector<Control> letter_controls(const Multifunction& f, std::size_t directions) {
  const auto& kind = f.kind();
  std::vector<Control> out;
  if (const auto* p = std::get_if<Polytopic>(&kind)) {
    const auto m = static_cast<Eigen::Index>(p->vertices.size());
    for (Eigen::Index i = 0; i < m; ++i) out.push_back(Vector::Unit(m, i));
    return out;
  }
  if (std::holds_alternative<Singleton>(kind)) return {Vector(0)};
  // Ball and half-ball alphabets do not depend on x for the control part.
  const Vector origin = Vector::Zero(static_cast<Eigen::Index>(f.dim()));
  if (const auto* b = std::get_if<Ball>(&kind)) {
    const Vector c = eval_field(b->center, origin);
    for (const auto& v : f.alphabet(origin, directions)) out.push_back((v - c) / b->radius);
    return out;
  }
  const auto& h = std::get<HalfBall>(kind);
  for (const auto& v : f.alphabet(origin, directions)) out.push_back(v / h.radius);
  return out;
}

Vector rk4_step(const Multifunction& f, const Vector& x, const Control& c, double h, double* max_speed) {
  const Vector k1 = velocity(f, x, c);
  const Vector k2 = velocity(f, x + 0.5 * h * k1, c);
  const Vector k3 = velocity(f, x + 0.5 * h * k2, c);
  const Vector k4 = velocity(f, x + h * k3, c);
  if (max_speed != nullptr) {
    *max_speed = std::max({*max_speed, k1.norm(), k2.norm(), k3.norm(), k4.norm()});
  }
  return x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

double Trajectory::gronwall_violation() const {
  double worst = -kInf;
  for (std::size_t i = 0; i < states.size(); ++i) {
    const double lhs = (states[i] - states.front()).norm();
    const double rhs = gronwall_m * times[i];
    // Rounding in the RK4 update is the only slack allowed.
    worst = std::max(worst, lhs - rhs - 1e-12 * (1.0 + rhs));
  }
  return worst;
}

Trajectory integrate(const Multifunction& f, const Vector& x0, const Selection& sel, double horizon, double dt,
                     const std::optional<Box>& box) {
  if (!(dt > 0.0)) throw InvalidArgument("integrate: dt must be positive");
  if (!(horizon >= dt)) throw InvalidArgument("integrate: horizon must be at least dt");
  if (sel.breakpoints.empty() || sel.breakpoints.size() != sel.controls.size() || sel.breakpoints.front() != 0.0) {
    throw InvalidArgument("integrate: malformed selection");
  }
  for (std::size_t i = 1; i < sel.breakpoints.size(); ++i) {
    if (!(sel.breakpoints[i] > sel.breakpoints[i - 1])) throw InvalidArgument("integrate: breakpoints must increase");
  }
  for (const auto& c : sel.controls) validate_control(f, c);
  if (static_cast<std::size_t>(x0.size()) != f.dim()) throw InvalidArgument("integrate: start point dimension mismatch");

  // Step grid: multiples of dt, plus every breakpoint, plus the horizon.
  std::vector<double> grid;
  const auto full = static_cast<long>(std::floor(horizon / dt + 1e-9));
  for (long k = 0; k <= full; ++k) grid.push_back(std::min(horizon, static_cast<double>(k) * dt));
  for (double b : sel.breakpoints) {
    if (b > 0.0 && b < horizon) grid.push_back(b);
  }
  grid.push_back(horizon);
  std::sort(grid.begin(), grid.end());
  std::vector<double> times;
  for (double t : grid) {
    if (times.empty() || t - times.back() > 1e-12 * std::max(1.0, horizon)) times.push_back(t);
  }

  Trajectory tr;
  Vector x = x0;
  tr.times.push_back(0.0);
  tr.states.push_back(x);
  tr.velocities.push_back(velocity(f, x, sel.at(0.0)));
  tr.gronwall_m = tr.velocities.back().norm();
  for (std::size_t k = 0; k + 1 < times.size(); ++k) {
    const double t = times[k];
    const double h = times[k + 1] - t;
    const Control& c = sel.at(t + 0.5 * h);
    x = rk4_step(f, x, c, h, &tr.gronwall_m);
    tr.times.push_back(times[k + 1]);
    tr.states.push_back(x);
    tr.velocities.push_back(velocity(f, x, sel.at(times[k + 1])));
    if (box && !box->contains(x, 1e-12)) {
      tr.truncated = true;
      break;
    }
  }
  return tr;
}

EmanatingTrajectory emanating_trajectory(const Multifunction& f, const Vector& x, const Vector& v, double tau,
                                         double dt) {
  if (!(tau > 0.0)) throw InvalidArgument("emanating_trajectory: tau must be positive");
  EmanatingTrajectory out;
  out.control = control_for_velocity(f, x, v);
  out.trajectory = integrate(f, x, Selection::constant(out.control), tau, std::min(dt, tau));
  const auto& tr = out.trajectory;
  for (std::size_t i = 1; i < tr.times.size(); ++i) {
    out.k_constant = std::max(out.k_constant, (tr.velocities[i] - v).norm() / tr.times[i]);
  }
  return out;
}

}  // namespace bitime::trajectory
