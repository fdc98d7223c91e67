#pragma once

#include "bitime/types.hpp"

#include <string>
#include <vector>

namespace bitime::minitime {

/// Uniform tensor grid over an axis-aligned box.
struct GridSpec {
  Vector lower;
  Vector upper;
  std::vector<std::size_t> nodes;  // per axis, >= 3

  /// Throws InvalidArgument unless bounds are finite, lower < upper, nodes >= 3.
  void validate() const;

  std::size_t dim() const { return nodes.size(); }
  std::size_t size() const;
  double spacing(std::size_t axis) const;
  double min_spacing() const;
  double max_spacing() const;
  Box box() const { return Box{lower, upper}; }

  /// Per-axis indices of a flat (row-major, last axis fastest) index.
  std::vector<std::size_t> unflatten(std::size_t flat) const;
  std::size_t stride(std::size_t axis) const;
  Vector node(std::size_t flat) const;

  /// Uniform grid with `per_axis` nodes on the box.
  static GridSpec uniform(const Box& box, std::size_t per_axis);
};

/// Multilinear interpolation of `values` on `grid` at `x`. Corners with
/// zero weight are ignored; any positive-weight corner at +inf gives +inf.
/// Points outside the grid give +inf.
double interpolate(const GridSpec& grid, const std::vector<double>& values, const Vector& x);

/// Minimal-time values to a fixed target on a grid (+inf = unreached).
struct ValueField {
  GridSpec grid;
  std::vector<double> values;
  Vector target;
  double rho = 0.0;
  double dt = 0.0;
  int iterations = 0;
  bool converged = false;
  /// "F" for times to the target under F; "-F" when solved for the reversed dynamics.
  std::string dynamics = "F";
  /// Nodes where some alphabet velocity left the box. Their values are
  /// box-restricted: trajectories leaving the box are not represented.
  std::size_t box_limited_nodes = 0;

  double at(const Vector& x) const { return interpolate(grid, values, x); }
};

}  // namespace bitime::minitime
