#pragma once

#include "bitime/grid.hpp"
#include "bitime/multifunction.hpp"

#include <functional>
#include <vector>

namespace bitime::minitime {

using vfield::Multifunction;

struct SolverOptions {
  /// Target ball radius; must be at least the largest grid spacing.
  double rho = 0.04;
  /// Time step. Non-positive selects min spacing / max |v|_inf over the alphabet.
  double dt = 0.0;
  /// Sup-norm change below which a sweep counts as converged.
  double tol = 1e-9;
  int max_iters = 1000;
  /// Directions used for Ball/HalfBall alphabets.
  std::size_t directions = 32;
  /// Called after each sweep with the current values (monitoring and tests).
  std::function<void(int, const std::vector<double>&)> on_sweep;
};

/// Precomputed departure stencils x + dt*v for every node and alphabet
/// velocity. Depends only on the dynamics and grid, so one table serves
/// every target.
class DepartureTable {
 public:
  DepartureTable(const Multifunction& f, const GridSpec& grid, const SolverOptions& opts);

  const GridSpec& grid() const { return grid_; }
  double dt() const { return dt_; }
  std::size_t letters() const { return letters_; }
  std::size_t box_limited_nodes() const { return box_limited_; }

  /// Interpolated value at the departure point of (node, letter); +inf when
  /// the departure leaves the grid or touches an unreached node.
  double departure_value(std::size_t node, std::size_t letter, const std::vector<double>& values) const;

 private:
  GridSpec grid_;
  double dt_ = 0.0;
  std::size_t letters_ = 0;
  std::size_t box_limited_ = 0;
  std::vector<std::size_t> strides_;
  std::vector<long> base_;     // -1 = outside the grid
  std::vector<double> frac_;   // dim entries per (node, letter)
};

/// Semi-Lagrangian value iteration for the time to reach B(beta, rho):
/// T(x) <- min over the alphabet of dt + T(x + dt v), with Gauss-Seidel
/// sweeps cycling through all 2^n axis orderings.
///
/// Throws InvalidArgument when beta lies outside the grid, rho is below the
/// grid spacing, or dt * max|v| exceeds 2 * min spacing (the message carries
/// the admissible bound).
ValueField solve_unilateral(const Multifunction& f, const Vector& beta, const GridSpec& grid, const SolverOptions& opts);

/// Same, reusing a precomputed table.
ValueField solve_unilateral(const DepartureTable& table, const Vector& beta, const SolverOptions& opts);

/// Largest admissible dt for the grid (dt * max|v| <= 2 * min spacing).
double cfl_bound(const Multifunction& f, const GridSpec& grid, std::size_t directions);

/// T(x, y) for x anywhere on the solve grid and y on a small grid around
/// beta, built from one unilateral solve per y node.
struct ProductPatch {
  Vector alpha;
  Vector beta;
  double delta = 0.0;
  GridSpec solve_grid;
  GridSpec y_grid;
  std::vector<ValueField> fields;  // one per y_grid node, flat order

  /// Multilinear in y across the per-node fields; +inf when any
  /// positive-weight field is +inf at x or y leaves the patch.
  double value(const Vector& x, const Vector& y) const;
  /// Box around alpha of half-width delta.
  Box x_patch() const;
};

struct PatchOptions {
  double delta = 0.3;
  std::size_t per_axis_nodes = 5;
  SolverOptions solver;
};

/// Requires both patch boxes inside the solve grid.
ProductPatch solve_bilateral_patch(const Multifunction& f, const Vector& alpha, const Vector& beta,
                                   const GridSpec& solve_grid, const PatchOptions& opts);

}  // namespace bitime::minitime
