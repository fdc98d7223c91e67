#include "bitime/multifunction.hpp"

#include "bitime/random.hpp"

#include <algorithm>
#include <numbers>

namespace bitime::vfield {

Vector eval_field(const FieldExpr& f, const Vector& x) {
  Vector v(static_cast<Eigen::Index>(f.size()));
  for (std::size_t i = 0; i < f.size(); ++i) v[static_cast<Eigen::Index>(i)] = f[i].eval(x);
  return v;
}

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void check_field(const FieldExpr& f, std::size_t dim, const char* what) {
  if (f.size() != dim) {
    throw InvalidArgument(std::string(what) + " has " + std::to_string(f.size()) +
                          " components, expected " + std::to_string(dim));
  }
  for (const auto& e : f) {
    if (e.dimension() != dim) throw InvalidArgument(std::string(what) + " parsed for the wrong dimension");
  }
}

FieldExpr negate_field(const FieldExpr& f) {
  FieldExpr out;
  out.reserve(f.size());
  for (const auto& e : f) out.push_back(Expr::negate(e));
  return out;
}

// Lawson-Hanson nonnegative least squares: min ||A w - b|| s.t. w >= 0.
Vector nnls(const Matrix& a, const Vector& b) {
  const Eigen::Index n = a.cols();
  Vector w = Vector::Zero(n);
  std::vector<bool> passive(static_cast<std::size_t>(n), false);
  const double tol = 1e-12 * std::max(1.0, a.cwiseAbs().maxCoeff());
  for (int outer = 0; outer < 3 * static_cast<int>(n) + 10; ++outer) {
    Vector grad = a.transpose() * (b - a * w);
    Eigen::Index best = -1;
    double best_val = tol;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (!passive[static_cast<std::size_t>(j)] && grad[j] > best_val) {
        best_val = grad[j];
        best = j;
      }
    }
    if (best < 0) break;
    passive[static_cast<std::size_t>(best)] = true;
    for (int inner = 0; inner < 3 * static_cast<int>(n) + 10; ++inner) {
      std::vector<Eigen::Index> idx;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (passive[static_cast<std::size_t>(j)]) idx.push_back(j);
      }
      Matrix ap(a.rows(), static_cast<Eigen::Index>(idx.size()));
      for (std::size_t k = 0; k < idx.size(); ++k) ap.col(static_cast<Eigen::Index>(k)) = a.col(idx[k]);
      Vector zp = ap.colPivHouseholderQr().solve(b);
      Vector z = Vector::Zero(n);
      for (std::size_t k = 0; k < idx.size(); ++k) z[idx[k]] = zp[static_cast<Eigen::Index>(k)];
      bool feasible = true;
      for (Eigen::Index j : idx) {
        if (z[j] <= 0.0) feasible = false;
      }
      if (feasible) {
        w = z;
        break;
      }
      double alpha = 1.0;
      for (Eigen::Index j : idx) {
        if (z[j] <= 0.0) alpha = std::min(alpha, w[j] / (w[j] - z[j]));
      }
      w += alpha * (z - w);
      for (Eigen::Index j : idx) {
        if (w[j] <= tol) {
          w[j] = 0.0;
          passive[static_cast<std::size_t>(j)] = false;
        }
      }
    }
  }
  return w;
}

}  // namespace

Vector hull_weights(const std::vector<Vector>& vertices, const Vector& target) {
  if (vertices.empty()) throw InvalidArgument("hull_weights: no vertices");
  const auto m = static_cast<Eigen::Index>(vertices.size());
  const Eigen::Index n = target.size();
  double scale = target.norm();
  for (const auto& v : vertices) scale = std::max(scale, v.norm());
  scale = std::max(scale, 1.0);
  const double mu = 1e4 * scale;
  const double reg = 1e-7 * scale;
  Matrix a = Matrix::Zero(n + 1 + m, m);
  Vector b = Vector::Zero(n + 1 + m);
  for (Eigen::Index j = 0; j < m; ++j) {
    a.block(0, j, n, 1) = vertices[static_cast<std::size_t>(j)];
    a(n, j) = mu;
    a(n + 1 + j, j) = reg;
  }
  b.head(n) = target;
  b[n] = mu;
  Vector w = nnls(a, b);
  const double s = w.sum();
  if (s <= 0.0) {
    w.setZero();
    w[0] = 1.0;
    return w;
  }
  return w / s;
}

Multifunction::Multifunction(std::size_t dim, MultifunctionKind kind) : dim_(dim), kind_(std::move(kind)) {
  if (dim_ == 0) throw InvalidArgument("multifunction dimension must be at least 1");
  std::visit(overloaded{
                 [&](const Polytopic& p) {
                   if (p.vertices.empty()) throw InvalidArgument("polytopic multifunction needs at least one vertex");
                   for (const auto& v : p.vertices) check_field(v, dim_, "vertex field");
                 },
                 [&](const Ball& b) {
                   check_field(b.center, dim_, "ball center");
                   if (!(b.radius > 0.0) || !std::isfinite(b.radius)) throw InvalidArgument("ball radius must be positive");
                 },
                 [&](const HalfBall& h) {
                   if (!(h.radius > 0.0) || !std::isfinite(h.radius)) throw InvalidArgument("half-ball radius must be positive");
                   if (h.axis >= dim_) throw InvalidArgument("half-ball axis out of range");
                   if (h.orientation != 1.0 && h.orientation != -1.0) throw InvalidArgument("half-ball orientation must be +1 or -1");
                 },
                 [&](const Singleton& s) { check_field(s.field, dim_, "singleton field"); },
             },
             kind_);
}

std::string Multifunction::kind_name() const {
  return std::visit(overloaded{[](const Polytopic&) { return std::string("polytopic"); },
                               [](const Ball&) { return std::string("ball"); },
                               [](const HalfBall&) { return std::string("halfball"); },
                               [](const Singleton&) { return std::string("singleton"); }},
                    kind_);
}

void Multifunction::check_point(const Vector& x) const {
  if (static_cast<std::size_t>(x.size()) != dim_) {
    throw InvalidArgument("point has dimension " + std::to_string(x.size()) + ", expected " + std::to_string(dim_));
  }
}

std::vector<Vector> Multifunction::eval_vertices(const Vector& x) const {
  check_point(x);
  if (const auto* p = std::get_if<Polytopic>(&kind_)) {
    std::vector<Vector> out;
    out.reserve(p->vertices.size());
    for (const auto& v : p->vertices) out.push_back(eval_field(v, x));
    return out;
  }
  if (const auto* s = std::get_if<Singleton>(&kind_)) return {eval_field(s->field, x)};
  throw InvalidArgument("eval_vertices requires a polytopic or singleton multifunction");
}

Vector Multifunction::argmin_velocity(const Vector& x, const Vector& p) const {
  check_point(x);
  check_point(p);
  if (!p.allFinite()) throw InvalidArgument("covector must be finite");
  return std::visit(
      overloaded{
          [&](const Polytopic& poly) -> Vector {
            Vector best;
            double best_val = kInf;
            for (const auto& vf : poly.vertices) {
              Vector v = eval_field(vf, x);
              const double val = v.dot(p);
              if (val < best_val) {
                best_val = val;
                best = std::move(v);
              }
            }
            return best;
          },
          [&](const Ball& b) -> Vector {
            Vector c = eval_field(b.center, x);
            const double n = p.norm();
            if (n == 0.0) return c;
            return c - b.radius * p / n;
          },
          [&](const HalfBall& h) -> Vector {
            const auto a = static_cast<Eigen::Index>(h.axis);
            Vector q = p;
            if (h.orientation * p[a] > 0.0) q[a] = 0.0;
            const double n = q.norm();
            if (n == 0.0) return Vector::Zero(static_cast<Eigen::Index>(dim_));
            return -h.radius * q / n;
          },
          [&](const Singleton& s) -> Vector { return eval_field(s.field, x); },
      },
      kind_);
}

double Multifunction::hamiltonian(const Vector& x, const Vector& p) const {
  check_point(x);
  check_point(p);
  if (!p.allFinite()) throw InvalidArgument("covector must be finite");
  return std::visit(
      overloaded{
          [&](const Polytopic& poly) {
            double best = kInf;
            for (const auto& vf : poly.vertices) best = std::min(best, eval_field(vf, x).dot(p));
            return best;
          },
          [&](const Ball& b) { return eval_field(b.center, x).dot(p) - b.radius * p.norm(); },
          [&](const HalfBall& h) {
            const auto a = static_cast<Eigen::Index>(h.axis);
            if (h.orientation * p[a] <= 0.0) return -h.radius * p.norm();
            Vector q = p;
            q[a] = 0.0;
            return -h.radius * q.norm();
          },
          [&](const Singleton& s) { return eval_field(s.field, x).dot(p); },
      },
      kind_);
}

double Multifunction::max_speed(const Vector& x) const {
  check_point(x);
  return std::visit(overloaded{
                        [&](const Polytopic& poly) {
                          double m = 0.0;
                          for (const auto& vf : poly.vertices) m = std::max(m, eval_field(vf, x).norm());
                          return m;
                        },
                        [&](const Ball& b) { return eval_field(b.center, x).norm() + b.radius; },
                        [&](const HalfBall& h) { return h.radius; },
                        [&](const Singleton& s) { return eval_field(s.field, x).norm(); },
                    },
                    kind_);
}

double Multifunction::distance_to(const Vector& x, const Vector& v) const {
  check_point(x);
  check_point(v);
  return std::visit(overloaded{
                        [&](const Polytopic&) {
                          const auto verts = eval_vertices(x);
                          const Vector w = hull_weights(verts, v);
                          Vector hull = Vector::Zero(v.size());
                          for (std::size_t i = 0; i < verts.size(); ++i) hull += w[static_cast<Eigen::Index>(i)] * verts[i];
                          return (hull - v).norm();
                        },
                        [&](const Ball& b) {
                          return std::max(0.0, (v - eval_field(b.center, x)).norm() - b.radius);
                        },
                        [&](const HalfBall& h) {
                          const auto a = static_cast<Eigen::Index>(h.axis);
                          Vector q = v;
                          if (h.orientation * q[a] < 0.0) q[a] = 0.0;
                          const double n = q.norm();
                          if (n > h.radius) q *= h.radius / n;
                          return (q - v).norm();
                        },
                        [&](const Singleton& s) { return (eval_field(s.field, x) - v).norm(); },
                    },
                    kind_);
}

Multifunction Multifunction::negated() const {
  MultifunctionKind k = std::visit(
      overloaded{
          [](const Polytopic& p) -> MultifunctionKind {
            Polytopic out;
            for (const auto& v : p.vertices) out.vertices.push_back(negate_field(v));
            return out;
          },
          [](const Ball& b) -> MultifunctionKind { return Ball{negate_field(b.center), b.radius}; },
          [](const HalfBall& h) -> MultifunctionKind { return HalfBall{h.radius, h.axis, -h.orientation}; },
          [](const Singleton& s) -> MultifunctionKind { return Singleton{negate_field(s.field)}; },
      },
      kind_);
  return Multifunction(dim_, std::move(k));
}

std::vector<Vector> Multifunction::alphabet(const Vector& x, std::size_t directions) const {
  check_point(x);
  return std::visit(
      overloaded{
          [&](const Polytopic&) { return eval_vertices(x); },
          [&](const Singleton&) { return eval_vertices(x); },
          [&](const Ball& b) {
            const Vector c = eval_field(b.center, x);
            std::vector<Vector> out;
            for (const auto& d : even_directions(dim_, directions)) out.push_back(c + b.radius * d);
            return out;
          },
          [&](const HalfBall& h) {
            const auto a = static_cast<Eigen::Index>(h.axis);
            std::vector<Vector> out;
            if (dim_ == 1) {
              Vector v(1);
              v[0] = h.orientation * h.radius;
              out.push_back(v);
              out.push_back(Vector::Zero(1));
              return out;
            }
            if (dim_ == 2) {
              // Closed half circle, endpoints included. An odd count puts a
              // letter on the axis itself.
              const Eigen::Index other = 1 - a;
              std::size_t count = std::max<std::size_t>(directions, 3);
              if (count % 2 == 0) ++count;
              for (std::size_t k = 0; k < count; ++k) {
                const double ang = -std::numbers::pi / 2 +
                                   std::numbers::pi * static_cast<double>(k) / static_cast<double>(count - 1);
                Vector v(2);
                v[a] = h.orientation * h.radius * std::cos(ang);
                v[other] = h.radius * std::sin(ang);
                if (std::abs(v[a]) < 1e-15) v[a] = 0.0;
                out.push_back(v);
              }
              return out;
            }
            for (const auto& d : even_directions(dim_, 2 * directions)) {
              Vector v = h.radius * d;
              v[a] = h.orientation * std::abs(v[a]);
              out.push_back(v);
              if (out.size() == directions) break;
            }
            return out;
          },
      },
      kind_);
}

double Multifunction::hausdorff_bound(const Vector& x, const Vector& y) const {
  return std::visit(overloaded{
                        [&](const Polytopic& p) {
                          double m = 0.0;
                          for (const auto& vf : p.vertices) m = std::max(m, (eval_field(vf, x) - eval_field(vf, y)).norm());
                          return m;
                        },
                        [&](const Ball& b) { return (eval_field(b.center, x) - eval_field(b.center, y)).norm(); },
                        [&](const HalfBall&) { return 0.0; },
                        [&](const Singleton& s) { return (eval_field(s.field, x) - eval_field(s.field, y)).norm(); },
                    },
                    kind_);
}

AssumptionReport check_assumptions(const Multifunction& f, const Box& box, std::size_t samples, std::uint64_t seed) {
  if (samples < 2) throw InvalidArgument("check_assumptions needs at least 2 samples");
  if (box.dim() != f.dim()) throw InvalidArgument("box dimension does not match the multifunction");
  for (std::size_t i = 0; i < box.dim(); ++i) {
    if (!(box.lower[static_cast<Eigen::Index>(i)] <= box.upper[static_cast<Eigen::Index>(i)])) {
      throw InvalidArgument("box is empty");
    }
  }
  Rng rng(seed);
  std::vector<Vector> xs;
  xs.reserve(samples);
  for (std::size_t i = 0; i < samples; ++i) xs.push_back(rng.in_box(box));

  AssumptionReport rep;
  rep.sample_count = samples;
  rep.box = box;
  for (std::size_t i = 0; i < samples; ++i) {
    for (std::size_t j = i + 1; j < samples; ++j) {
      const double d = (xs[i] - xs[j]).norm();
      if (d < 1e-12) continue;
      rep.lipschitz = std::max(rep.lipschitz, f.hausdorff_bound(xs[i], xs[j]) / d);
    }
  }

  // Smallest (gamma, c) >= 0 with speed_i <= gamma*|x_i| + c, minimizing the
  // mean bound. The optimum of this two-variable LP sits at gamma = 0 or at a
  // slope through two samples.
  std::vector<double> r(samples), m(samples);
  double mean_r = 0.0;
  for (std::size_t i = 0; i < samples; ++i) {
    r[i] = xs[i].norm();
    m[i] = f.max_speed(xs[i]);
    mean_r += r[i];
  }
  mean_r /= static_cast<double>(samples);
  auto c_for = [&](double g) {
    double c = 0.0;
    for (std::size_t i = 0; i < samples; ++i) c = std::max(c, m[i] - g * r[i]);
    return c;
  };
  double best_g = 0.0;
  double best_c = c_for(0.0);
  double best_obj = best_c;
  for (std::size_t i = 0; i < samples; ++i) {
    for (std::size_t j = i + 1; j < samples; ++j) {
      if (std::abs(r[i] - r[j]) < 1e-12) continue;
      const double g = (m[i] - m[j]) / (r[i] - r[j]);
      if (g <= 0.0) continue;
      const double c = c_for(g);
      const double obj = c + g * mean_r;
      if (obj < best_obj - 1e-12) {
        best_obj = obj;
        best_g = g;
        best_c = c;
      }
    }
  }
  rep.growth_gamma = best_g;
  rep.growth_c = best_c;
  return rep;
}

}  // namespace bitime::vfield
