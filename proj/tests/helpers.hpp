#pragma once

#include "bitime/multifunction.hpp"

#include <initializer_list>
#include <string>
#include <vector>

namespace testing {

using bitime::Box;
using bitime::Vector;
using namespace bitime::vfield;

inline Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

inline FieldExpr field(std::initializer_list<const char*> exprs) {
  FieldExpr f;
  for (const char* e : exprs) f.push_back(parse_expr(e, exprs.size()));
  return f;
}

inline Multifunction polytope(std::initializer_list<std::initializer_list<const char*>> verts) {
  Polytopic p;
  std::size_t dim = 0;
  for (const auto& v : verts) {
    p.vertices.push_back(field(v));
    dim = v.size();
  }
  return Multifunction(dim, p);
}

inline Multifunction unit_ball(std::size_t dim) {
  Ball b;
  for (std::size_t i = 0; i < dim; ++i) b.center.push_back(Expr::constant(0.0, dim));
  b.radius = 1.0;
  return Multifunction(dim, b);
}

}  // namespace testing
