#include "bitime/grid.hpp"

#include <algorithm>
#include <cmath>

namespace bitime::minitime {

void GridSpec::validate() const {
  if (nodes.empty()) throw InvalidArgument("grid: no axes");
  if (static_cast<std::size_t>(lower.size()) != nodes.size() || static_cast<std::size_t>(upper.size()) != nodes.size()) {
    throw InvalidArgument("grid: bounds and node counts disagree in dimension");
  }
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const auto k = static_cast<Eigen::Index>(i);
    if (!std::isfinite(lower[k]) || !std::isfinite(upper[k])) throw InvalidArgument("grid: bounds must be finite");
    if (!(lower[k] < upper[k])) throw InvalidArgument("grid: lower bound must be below upper bound on axis " + std::to_string(i + 1));
    if (nodes[i] < 3) throw InvalidArgument("grid: at least 3 nodes per axis required");
  }
}

std::size_t GridSpec::size() const {
  std::size_t n = 1;
  for (auto c : nodes) n *= c;
  return n;
}

double GridSpec::spacing(std::size_t axis) const {
  const auto k = static_cast<Eigen::Index>(axis);
  return (upper[k] - lower[k]) / static_cast<double>(nodes[axis] - 1);
}

double GridSpec::min_spacing() const {
  double m = kInf;
  for (std::size_t i = 0; i < dim(); ++i) m = std::min(m, spacing(i));
  return m;
}

double GridSpec::max_spacing() const {
  double m = 0.0;
  for (std::size_t i = 0; i < dim(); ++i) m = std::max(m, spacing(i));
  return m;
}

std::size_t GridSpec::stride(std::size_t axis) const {
  std::size_t s = 1;
  for (std::size_t i = axis + 1; i < dim(); ++i) s *= nodes[i];
  return s;
}

std::vector<std::size_t> GridSpec::unflatten(std::size_t flat) const {
  std::vector<std::size_t> idx(dim());
  for (std::size_t i = dim(); i-- > 0;) {
    idx[i] = flat % nodes[i];
    flat /= nodes[i];
  }
  return idx;
}

Vector GridSpec::node(std::size_t flat) const {
  const auto idx = unflatten(flat);
  Vector x(static_cast<Eigen::Index>(dim()));
  for (std::size_t i = 0; i < dim(); ++i) {
    const auto k = static_cast<Eigen::Index>(i);
    x[k] = idx[i] + 1 == nodes[i] ? upper[k] : lower[k] + static_cast<double>(idx[i]) * spacing(i);
  }
  return x;
}

GridSpec GridSpec::uniform(const Box& box, std::size_t per_axis) {
  GridSpec g{box.lower, box.upper, std::vector<std::size_t>(box.dim(), per_axis)};
  g.validate();
  return g;
}

double interpolate(const GridSpec& grid, const std::vector<double>& values, const Vector& x) {
  const std::size_t n = grid.dim();
  std::vector<std::size_t> base(n);
  std::vector<double> frac(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto k = static_cast<Eigen::Index>(i);
    const double h = grid.spacing(i);
    double s = (x[k] - grid.lower[k]) / h;
    const double top = static_cast<double>(grid.nodes[i] - 1);
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
  const std::size_t corners = std::size_t{1} << n;
  for (std::size_t c = 0; c < corners; ++c) {
    double w = 1.0;
    std::size_t flat = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const bool up = ((c >> i) & 1U) != 0U;
      w *= up ? frac[i] : 1.0 - frac[i];
      if (w == 0.0) break;
      flat += (base[i] + (up ? 1 : 0)) * grid.stride(i);
    }
    if (w == 0.0) continue;
    const double v = values[flat];
    if (!std::isfinite(v)) return kInf;
    acc += w * v;
  }
  return acc;
}

}  // namespace bitime::minitime
