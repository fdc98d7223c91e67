#include "bitime/solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace bitime::minitime {

namespace {

void check_point_in_grid(const GridSpec& grid, const Vector& p, const char* what) {
  if (static_cast<std::size_t>(p.size()) != grid.dim()) throw InvalidArgument(std::string(what) + " dimension mismatch");
  if (!grid.box().contains(p, 1e-12)) throw InvalidArgument(std::string(what) + " lies outside the grid");
}

}  // namespace

double cfl_bound(const Multifunction& f, const GridSpec& grid, std::size_t directions) {
  grid.validate();
  double max2 = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    for (const auto& v : f.alphabet(grid.node(i), directions)) max2 = std::max(max2, v.norm());
  }
  return max2 > 0.0 ? 2.0 * grid.min_spacing() / max2 : kInf;
}

DepartureTable::DepartureTable(const Multifunction& f, const GridSpec& grid, const SolverOptions& opts) : grid_(grid) {
  grid_.validate();
  if (grid_.dim() != f.dim()) throw InvalidArgument("grid dimension does not match the multifunction");
  const std::size_t n = grid_.dim();
  const std::size_t nodes = grid_.size();
  for (std::size_t i = 0; i < n; ++i) strides_.push_back(grid_.stride(i));

  std::vector<std::vector<Vector>> alph(nodes);
  double max_inf = 0.0;
  double max2 = 0.0;
  for (std::size_t i = 0; i < nodes; ++i) {
    alph[i] = f.alphabet(grid_.node(i), opts.directions);
    for (const auto& v : alph[i]) {
      max_inf = std::max(max_inf, v.lpNorm<Eigen::Infinity>());
      max2 = std::max(max2, v.norm());
    }
  }
  letters_ = alph.front().size();
  const double h = grid_.min_spacing();
  dt_ = opts.dt > 0.0 ? opts.dt : (max_inf > 0.0 ? h / max_inf : h);
  if (dt_ * max2 > 2.0 * h * (1.0 + 1e-12)) {
    std::ostringstream os;
    os << "CFL violation: dt = " << dt_ << " exceeds the bound 2*dx/max|v| = " << 2.0 * h / max2;
    throw InvalidArgument(os.str());
  }

  base_.assign(nodes * letters_, -1);
  frac_.assign(nodes * letters_ * n, 0.0);
  for (std::size_t i = 0; i < nodes; ++i) {
    const Vector x = grid_.node(i);
    bool limited = false;
    for (std::size_t l = 0; l < letters_; ++l) {
      const Vector p = x + dt_ * alph[i][l];
      long flat = 0;
      bool inside = true;
      for (std::size_t a = 0; a < n && inside; ++a) {
        const auto k = static_cast<Eigen::Index>(a);
        double s = (p[k] - grid_.lower[k]) / grid_.spacing(a);
        const double top = static_cast<double>(grid_.nodes[a] - 1);
        if (s < -1e-9 || s > top + 1e-9) {
          inside = false;
          break;
        }
        s = std::clamp(s, 0.0, top);
        double fl = std::floor(s);
        if (fl >= top) fl = top - 1.0;
        double fr = s - fl;
        if (fr < 1e-12) fr = 0.0;
        if (fr > 1.0 - 1e-12) {
          fr = 0.0;
          fl += 1.0;
        }
        flat += static_cast<long>(fl) * static_cast<long>(strides_[a]);
        frac_[(i * letters_ + l) * n + a] = fr;
      }
      if (inside) {
        base_[i * letters_ + l] = flat;
      } else {
        limited = true;
      }
    }
    if (limited) ++box_limited_;
  }
}

double DepartureTable::departure_value(std::size_t node, std::size_t letter, const std::vector<double>& values) const {
  const std::size_t e = node * letters_ + letter;
  const long base = base_[e];
  if (base < 0) return kInf;
  const std::size_t n = strides_.size();
  const double* fr = &frac_[e * n];
  const std::size_t corners = std::size_t{1} << n;
  double acc = 0.0;
  for (std::size_t c = 0; c < corners; ++c) {
    double w = 1.0;
    std::size_t flat = static_cast<std::size_t>(base);
    for (std::size_t a = 0; a < n; ++a) {
      if ((c >> a) & 1U) {
        w *= fr[a];
        flat += strides_[a];
      } else {
        w *= 1.0 - fr[a];
      }
      if (w == 0.0) break;
    }
    if (w == 0.0) continue;
    const double v = values[flat];
    if (v == kInf) return kInf;
    acc += w * v;
  }
  return acc;
}

ValueField solve_unilateral(const Multifunction& f, const Vector& beta, const GridSpec& grid, const SolverOptions& opts) {
  grid.validate();
  check_point_in_grid(grid, beta, "target");
  if (!(opts.rho >= grid.max_spacing() * (1.0 - 1e-12))) {
    throw InvalidArgument("target radius rho must be at least the grid spacing " + std::to_string(grid.max_spacing()));
  }
  DepartureTable table(f, grid, opts);
  return solve_unilateral(table, beta, opts);
}

ValueField solve_unilateral(const DepartureTable& table, const Vector& beta, const SolverOptions& opts) {
  const GridSpec& grid = table.grid();
  check_point_in_grid(grid, beta, "target");
  if (!(opts.rho >= grid.max_spacing() * (1.0 - 1e-12))) {
    throw InvalidArgument("target radius rho must be at least the grid spacing " + std::to_string(grid.max_spacing()));
  }
  const std::size_t n = grid.dim();
  const std::size_t nodes = grid.size();

  ValueField out;
  out.grid = grid;
  out.target = beta;
  out.rho = opts.rho;
  out.dt = table.dt();
  out.box_limited_nodes = table.box_limited_nodes();
  out.values.assign(nodes, kInf);
  std::vector<char> fixed(nodes, 0);
  for (std::size_t i = 0; i < nodes; ++i) {
    if ((grid.node(i) - beta).norm() <= opts.rho) {
      out.values[i] = 0.0;
      fixed[i] = 1;
    }
  }

  const std::size_t orders = std::size_t{1} << n;
  const double dt = table.dt();
  std::vector<std::size_t> idx(n);
  for (int sweep = 0; sweep < opts.max_iters; ++sweep) {
    const std::size_t mask = static_cast<std::size_t>(sweep) % orders;
    double change = 0.0;
    // Odometer over the grid; axis a runs backwards when bit a of mask is set.
    for (std::size_t a = 0; a < n; ++a) idx[a] = ((mask >> a) & 1U) ? grid.nodes[a] - 1 : 0;
    for (std::size_t count = 0; count < nodes; ++count) {
      std::size_t flat = 0;
      for (std::size_t a = 0; a < n; ++a) flat += idx[a] * grid.stride(a);
      if (!fixed[flat]) {
        double best = out.values[flat];
        for (std::size_t l = 0; l < table.letters(); ++l) {
          const double v = dt + table.departure_value(flat, l, out.values);
          if (v < best) best = v;
        }
        const double old = out.values[flat];
        if (best < old) {
          change = std::max(change, old == kInf ? kInf : old - best);
          out.values[flat] = best;
        }
      }
      for (std::size_t a = n; a-- > 0;) {
        const bool back = ((mask >> a) & 1U) != 0U;
        if (back) {
          if (idx[a] > 0) {
            --idx[a];
            break;
          }
          idx[a] = grid.nodes[a] - 1;
        } else {
          if (idx[a] + 1 < grid.nodes[a]) {
            ++idx[a];
            break;
          }
          idx[a] = 0;
        }
      }
    }
    out.iterations = sweep + 1;
    if (opts.on_sweep) opts.on_sweep(out.iterations, out.values);
    if (change < opts.tol) {
      out.converged = true;
      break;
    }
  }
  return out;
}

double ProductPatch::value(const Vector& x, const Vector& y) const {
  const std::size_t n = y_grid.dim();
  std::vector<std::size_t> base(n);
  std::vector<double> frac(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto k = static_cast<Eigen::Index>(i);
    double s = (y[k] - y_grid.lower[k]) / y_grid.spacing(i);
    const double top = static_cast<double>(y_grid.nodes[i] - 1);
    if (s < -1e-9 || s > top + 1e-9) return kInf;
    s = std::clamp(s, 0.0, top);
    double fl = std::floor(s);
    if (fl >= top) fl = top - 1.0;
    double f = s - fl;
    if (f < 1e-12) f = 0.0;
    if (f > 1.0 - 1e-12) {
      f = 0.0;
      fl += 1.0;
    }
    base[i] = static_cast<std::size_t>(fl);
    frac[i] = f;
  }
  double acc = 0.0;
  for (std::size_t c = 0; c < (std::size_t{1} << n); ++c) {
    double w = 1.0;
    std::size_t flat = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const bool up = ((c >> i) & 1U) != 0U;
      w *= up ? frac[i] : 1.0 - frac[i];
      if (w == 0.0) break;
      flat += (base[i] + (up ? 1 : 0)) * y_grid.stride(i);
    }
    if (w == 0.0) continue;
    const double v = fields[flat].at(x);
    if (!std::isfinite(v)) return kInf;
    acc += w * v;
  }
  return acc;
}

Box ProductPatch::x_patch() const {
  const Vector d = Vector::Constant(alpha.size(), delta);
  return Box{alpha - d, alpha + d};
}

ProductPatch solve_bilateral_patch(const Multifunction& f, const Vector& alpha, const Vector& beta,
                                   const GridSpec& solve_grid, const PatchOptions& opts) {
  solve_grid.validate();
  if (!(opts.delta > 0.0)) throw InvalidArgument("patch radius must be positive");
  const Vector d = Vector::Constant(beta.size(), opts.delta);
  const Box region = solve_grid.box();
  for (const Vector& corner : {Vector(alpha - d), Vector(alpha + d), Vector(beta - d), Vector(beta + d)}) {
    if (!region.contains(corner, 1e-12)) throw InvalidArgument("patch boxes must lie inside the solve region");
  }
  ProductPatch patch;
  patch.alpha = alpha;
  patch.beta = beta;
  patch.delta = opts.delta;
  patch.solve_grid = solve_grid;
  patch.y_grid = GridSpec{beta - d, beta + d, std::vector<std::size_t>(beta.size(), opts.per_axis_nodes)};
  patch.y_grid.validate();
  DepartureTable table(f, solve_grid, opts.solver);
  for (std::size_t j = 0; j < patch.y_grid.size(); ++j) {
    patch.fields.push_back(solve_unilateral(table, patch.y_grid.node(j), opts.solver));
  }
  return patch;
}

}  // namespace bitime::minitime
