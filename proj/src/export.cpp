#include "bitime/export.hpp"

#include "bitime/theorems.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace bitime::io {

using theorems::number_json;
using theorems::vector_json;

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void write_field_csv(std::ostream& os, const minitime::ValueField& f) {
  const std::size_t n = f.grid.dim();
  for (std::size_t i = 0; i < n; ++i) os << "x" << i + 1 << ",";
  os << "value\n";
  for (std::size_t k = 0; k < f.grid.size(); ++k) {
    const Vector x = f.grid.node(k);
    for (Eigen::Index i = 0; i < x.size(); ++i) os << format_number(x[i]) << ",";
    os << format_number(f.values[k]) << "\n";
  }
}

nlohmann::json field_header(const minitime::ValueField& f) {
  nlohmann::json nodes = nlohmann::json::array();
  for (auto c : f.grid.nodes) nodes.push_back(c);
  return {{"grid", {{"lower", vector_json(f.grid.lower)}, {"upper", vector_json(f.grid.upper)}, {"nodes", nodes}}},
          {"target", vector_json(f.target)},
          {"rho", f.rho},
          {"dt", f.dt},
          {"iterations", f.iterations},
          {"converged", f.converged},
          {"dynamics", f.dynamics},
          {"boxLimitedNodes", f.box_limited_nodes}};
}

nlohmann::json oracle_json(const trajectory::OracleResult& r) {
  return {{"alpha", vector_json(r.alpha)},
          {"beta", vector_json(r.beta)},
          {"minimalTime", number_json(r.minimal_time)},
          {"terminalError", number_json(r.terminal_error)}};
}

void write_trajectory_csv(std::ostream& os, const trajectory::Trajectory& tr) {
  const auto n = tr.states.empty() ? 0 : tr.states.front().size();
  os << "t";
  for (Eigen::Index i = 0; i < n; ++i) os << ",x" << i + 1;
  os << "\n";
  for (std::size_t k = 0; k < tr.times.size(); ++k) {
    os << format_number(tr.times[k]);
    for (Eigen::Index i = 0; i < n; ++i) os << "," << format_number(tr.states[k][i]);
    os << "\n";
  }
}

nlohmann::json verdict_json(const varcalc::MembershipVerdict& v, const Vector& point, const Vector& candidate) {
  return {{"point", vector_json(point)},
          {"candidate", vector_json(candidate)},
          {"eps", v.eps},
          {"delta", v.delta},
          {"pass", v.pass},
          {"sampleCount", v.sample_count},
          {"worstViolation", number_json(v.worst_violation)},
          {"witness", vector_json(v.worst_witness)}};
}

nlohmann::json cone_json(const varcalc::ConeEstimate& c) {
  nlohmann::json gens = nlohmann::json::array();
  for (const auto& g : c.generators) gens.push_back(vector_json(g));
  return {{"basePoint", vector_json(c.base)},
          {"generators", gens},
          {"dimension", c.dimension},
          {"rankTol", c.rank_tol},
          {"directionCount", c.direction_count},
          {"eps", c.eps},
          {"delta", c.delta},
          {"sampleCount", c.sample_count}};
}

void write_generators_csv(std::ostream& os, const std::vector<Vector>& generators) {
  if (generators.empty()) return;
  for (Eigen::Index i = 0; i < generators.front().size(); ++i) os << (i ? "," : "") << "c" << i + 1;
  os << "\n";
  for (const auto& g : generators) {
    for (Eigen::Index i = 0; i < g.size(); ++i) os << (i ? "," : "") << format_number(g[i]);
    os << "\n";
  }
}

void write_file(const std::string& path, const std::string& text) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out << text;
  if (!out) throw Error("write failed for " + path);
}

}  // namespace bitime::io
