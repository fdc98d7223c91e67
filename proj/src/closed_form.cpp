#include "bitime/closed_form.hpp"

#include <cmath>

namespace bitime::minitime {

using namespace vfield;

std::string tag_name(SystemTag tag) {
  switch (tag) {
    case SystemTag::Eikonal: return "eikonal";
    case SystemTag::Box: return "box";
    case SystemTag::Drift: return "drift";
    case SystemTag::HalfBall: return "halfball";
  }
  return "eikonal";
}

SystemTag parse_tag(const std::string& name) {
  if (name == "eikonal") return SystemTag::Eikonal;
  if (name == "box") return SystemTag::Box;
  if (name == "drift") return SystemTag::Drift;
  if (name == "halfball") return SystemTag::HalfBall;
  throw InvalidArgument("unknown system tag '" + name + "'");
}

BenchmarkSystem BenchmarkSystem::eikonal(std::size_t dim) { return {SystemTag::Eikonal, dim, {}, 0}; }
BenchmarkSystem BenchmarkSystem::box(std::size_t dim) { return {SystemTag::Box, dim, {}, 0}; }

BenchmarkSystem BenchmarkSystem::drift_along(const Vector& v) {
  if (v.size() == 0 || !(v.norm() > 0.0)) throw InvalidArgument("drift velocity must be nonzero");
  return {SystemTag::Drift, static_cast<std::size_t>(v.size()), v, 0};
}

BenchmarkSystem BenchmarkSystem::halfball(std::size_t dim, std::size_t axis) {
  if (axis >= dim) throw InvalidArgument("halfball axis out of range");
  return {SystemTag::HalfBall, dim, {}, axis};
}

Multifunction BenchmarkSystem::multifunction() const {
  const auto n = dim;
  switch (tag) {
    case SystemTag::Eikonal: {
      FieldExpr c;
      for (std::size_t i = 0; i < n; ++i) c.push_back(Expr::constant(0.0, n));
      return Multifunction(n, Ball{c, 1.0});
    }
    case SystemTag::Box: {
      Polytopic p;
      for (std::size_t m = 0; m < (std::size_t{1} << n); ++m) {
        FieldExpr v;
        for (std::size_t i = 0; i < n; ++i) v.push_back(Expr::constant(((m >> i) & 1U) ? -1.0 : 1.0, n));
        p.vertices.push_back(std::move(v));
      }
      return Multifunction(n, p);
    }
    case SystemTag::Drift: {
      FieldExpr f;
      for (std::size_t i = 0; i < n; ++i) f.push_back(Expr::constant(drift[static_cast<Eigen::Index>(i)], n));
      return Multifunction(n, Singleton{f});
    }
    case SystemTag::HalfBall:
      return Multifunction(n, HalfBall{1.0, axis, 1.0});
  }
  throw InvalidArgument("unknown system tag");
}

double closed_form_T(const BenchmarkSystem& sys, const Vector& alpha, const Vector& beta) {
  if (static_cast<std::size_t>(alpha.size()) != sys.dim || static_cast<std::size_t>(beta.size()) != sys.dim) {
    throw InvalidArgument("closed form: dimension mismatch");
  }
  const Vector d = beta - alpha;
  switch (sys.tag) {
    case SystemTag::Eikonal: return d.norm();
    case SystemTag::Box: return d.lpNorm<Eigen::Infinity>();
    case SystemTag::Drift: {
      const double vv = sys.drift.squaredNorm();
      const double s = d.dot(sys.drift) / vv;
      if (s < 0.0) return kInf;
      if ((d - s * sys.drift).norm() > 1e-12 * (1.0 + d.norm())) return kInf;
      return s;
    }
    case SystemTag::HalfBall:
      return d[static_cast<Eigen::Index>(sys.axis)] >= 0.0 ? d.norm() : kInf;
  }
  return kInf;
}

}  // namespace bitime::minitime
