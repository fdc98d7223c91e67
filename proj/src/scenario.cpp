#include "bitime/scenario.hpp"

#include "bitime/export.hpp"

#include <fstream>
#include <sstream>

namespace bitime::scenario {

using nlohmann::json;
using namespace vfield;

namespace {

const json& require(const json& j, const std::string& key, const std::string& path) {
  if (!j.is_object()) throw ConfigError(path, "expected an object");
  const auto it = j.find(key);
  if (it == j.end()) throw ConfigError(path + "/" + key, "missing required field");
  return *it;
}

double number(const json& j, const std::string& path) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return kInf;
  }
  throw ConfigError(path, "expected a number");
}

double positive(const json& j, const std::string& path) {
  const double v = number(j, path);
  if (!(v > 0.0) || !is_finite(v)) throw ConfigError(path, "must be a positive finite number");
  return v;
}

std::size_t count(const json& j, const std::string& path, std::size_t min) {
  if (!j.is_number_integer() || j.get<long long>() < static_cast<long long>(min)) {
    throw ConfigError(path, "expected an integer >= " + std::to_string(min));
  }
  return static_cast<std::size_t>(j.get<long long>());
}

Vector vec(const json& j, const std::string& path, std::optional<std::size_t> dim = std::nullopt) {
  if (!j.is_array() || j.empty()) throw ConfigError(path, "expected a nonempty array of numbers");
  if (dim && j.size() != *dim) throw ConfigError(path, "expected " + std::to_string(*dim) + " entries");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    v[static_cast<Eigen::Index>(i)] = number(j[i], path + "/" + std::to_string(i));
    if (!is_finite(v[static_cast<Eigen::Index>(i)])) throw ConfigError(path + "/" + std::to_string(i), "must be finite");
  }
  return v;
}

Expr expr(const json& j, std::size_t dim, const std::string& path) {
  std::string text;
  if (j.is_string()) {
    text = j.get<std::string>();
  } else if (j.is_number()) {
    text = io::format_number(j.get<double>());
  } else {
    throw ConfigError(path, "expected an expression string");
  }
  try {
    return parse_expr(text, dim);
  } catch (const ParseError& e) {
    throw ConfigError(path, e.what());
  }
}

FieldExpr field(const json& j, std::size_t dim, const std::string& path) {
  if (!j.is_array() || j.size() != dim) throw ConfigError(path, "expected " + std::to_string(dim) + " expressions");
  FieldExpr f;
  for (std::size_t i = 0; i < dim; ++i) f.push_back(expr(j[i], dim, path + "/" + std::to_string(i)));
  return f;
}

SystemSpec parse_system(const json& j, const std::string& path) {
  if (!j.is_object()) throw ConfigError(path, "expected an object");
  SystemSpec s;
  s.source = j;
  if (j.contains("builtin")) {
    const auto& b = j["builtin"];
    if (!b.is_string()) throw ConfigError(path + "/builtin", "expected a string");
    minitime::SystemTag tag;
    try {
      tag = minitime::parse_tag(b.get<std::string>());
    } catch (const InvalidArgument& e) {
      throw ConfigError(path + "/builtin", e.what());
    }
    const std::size_t dim = j.contains("dimension") ? count(j["dimension"], path + "/dimension", 1) : 2;
    switch (tag) {
      case minitime::SystemTag::Eikonal: s.builtin = minitime::BenchmarkSystem::eikonal(dim); break;
      case minitime::SystemTag::Box: s.builtin = minitime::BenchmarkSystem::box(dim); break;
      case minitime::SystemTag::Drift: {
        Vector v = Vector::Zero(static_cast<Eigen::Index>(dim));
        v[0] = 1.0;
        if (j.contains("velocity")) v = vec(j["velocity"], path + "/velocity", dim);
        if (!(v.norm() > 0.0)) throw ConfigError(path + "/velocity", "must be nonzero");
        s.builtin = minitime::BenchmarkSystem::drift_along(v);
        break;
      }
      case minitime::SystemTag::HalfBall: {
        const std::size_t axis = j.contains("axis") ? count(j["axis"], path + "/axis", 1) : 1;
        if (axis > dim) throw ConfigError(path + "/axis", "axis out of range (1-based)");
        s.builtin = minitime::BenchmarkSystem::halfball(dim, axis - 1);
        break;
      }
    }
    s.dim = dim;
    return s;
  }
  const auto& kind = require(j, "kind", path);
  if (!kind.is_string()) throw ConfigError(path + "/kind", "expected a string");
  s.dim = count(require(j, "dimension", path), path + "/dimension", 1);
  const auto k = kind.get<std::string>();
  if (k != "polytopic" && k != "ball" && k != "halfball" && k != "singleton") {
    throw ConfigError(path + "/kind", "unknown kind '" + k + "' (polytopic, ball, halfball, singleton)");
  }
  // Validate eagerly so errors carry the field path.
  (void)s.multifunction();
  return s;
}

json system_json(const SystemSpec& s) { return s.source; }

}  // namespace

Multifunction SystemSpec::multifunction() const {
  if (builtin) return builtin->multifunction();
  const std::string path = "/system";
  const auto k = source.at("kind").get<std::string>();
  if (k == "polytopic") {
    const auto& v = require(source, "vertices", path);
    if (!v.is_array() || v.empty()) throw ConfigError(path + "/vertices", "expected a nonempty array of fields");
    Polytopic p;
    for (std::size_t i = 0; i < v.size(); ++i) p.vertices.push_back(field(v[i], dim, path + "/vertices/" + std::to_string(i)));
    return Multifunction(dim, p);
  }
  if (k == "ball") {
    Ball b;
    b.center = field(require(source, "center", path), dim, path + "/center");
    b.radius = source.contains("radius") ? positive(source["radius"], path + "/radius") : 1.0;
    return Multifunction(dim, b);
  }
  if (k == "halfball") {
    HalfBall h;
    h.radius = source.contains("radius") ? positive(source["radius"], path + "/radius") : 1.0;
    const std::size_t axis = source.contains("axis") ? count(source["axis"], path + "/axis", 1) : 1;
    if (axis > dim) throw ConfigError(path + "/axis", "axis out of range (1-based)");
    h.axis = axis - 1;
    return Multifunction(dim, h);
  }
  return Multifunction(dim, Singleton{field(require(source, "field", path), dim, path + "/field")});
}

minitime::GridSpec Scenario::grid() const { return minitime::GridSpec{box.lower, box.upper, nodes}; }

std::string Scenario::name() const {
  return system.builtin ? minitime::tag_name(system.builtin->tag) : system.source.value("kind", std::string("custom"));
}

Scenario from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("", "scenario must be a JSON object");
  const auto& ver = require(j, "schemaVersion", "");
  if (!ver.is_number_integer() || ver.get<int>() != kSchemaVersion) {
    throw ConfigError("/schemaVersion", "unsupported schema version (expected " + std::to_string(kSchemaVersion) + ")");
  }
  Scenario s;
  const auto& id = require(j, "id", "");
  if (!id.is_string() || id.get<std::string>().empty()) throw ConfigError("/id", "expected a nonempty string");
  s.id = id.get<std::string>();
  s.system = parse_system(require(j, "system", ""), "/system");
  const std::size_t n = s.system.dim;

  const auto& box = require(j, "box", "");
  s.box.lower = vec(require(box, "lower", "/box"), "/box/lower", n);
  s.box.upper = vec(require(box, "upper", "/box"), "/box/upper", n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto k = static_cast<Eigen::Index>(i);
    if (!(s.box.lower[k] < s.box.upper[k])) throw ConfigError("/box", "lower must be below upper on every axis");
  }

  const auto& grid = require(j, "grid", "");
  const auto& nodes = require(grid, "nodes", "/grid");
  if (nodes.is_array()) {
    if (nodes.size() != n) throw ConfigError("/grid/nodes", "expected " + std::to_string(n) + " entries");
    for (std::size_t i = 0; i < n; ++i) s.nodes.push_back(count(nodes[i], "/grid/nodes/" + std::to_string(i), 3));
  } else {
    s.nodes.assign(n, count(nodes, "/grid/nodes", 3));
  }

  if (j.contains("solver")) {
    const auto& sv = j["solver"];
    if (sv.contains("rho")) s.solver.rho = positive(sv["rho"], "/solver/rho");
    if (sv.contains("dt")) {
      s.solver.dt = number(sv["dt"], "/solver/dt");
      if (s.solver.dt < 0.0) throw ConfigError("/solver/dt", "must be >= 0 (0 selects automatically)");
    }
    if (sv.contains("tol")) s.solver.tol = positive(sv["tol"], "/solver/tol");
    if (sv.contains("maxIters")) s.solver.max_iters = static_cast<int>(count(sv["maxIters"], "/solver/maxIters", 1));
    if (sv.contains("directions")) s.solver.directions = count(sv["directions"], "/solver/directions", 2);
  }
  s.patch.solver = s.solver;
  if (j.contains("patch")) {
    const auto& p = j["patch"];
    if (p.contains("delta")) s.patch.delta = positive(p["delta"], "/patch/delta");
    if (p.contains("perAxisNodes")) s.patch.per_axis_nodes = count(p["perAxisNodes"], "/patch/perAxisNodes", 3);
  }

  if (j.contains("backend")) {
    if (!j["backend"].is_string()) throw ConfigError("/backend", "expected a string");
    s.backend = j["backend"].get<std::string>();
    if (s.backend != "closed_form" && s.backend != "grid") {
      throw ConfigError("/backend", "expected \"closed_form\" or \"grid\"");
    }
  } else {
    s.backend = s.system.builtin ? "closed_form" : "grid";
  }
  if (s.backend == "closed_form" && !s.system.builtin) {
    throw ConfigError("/backend", "closed_form requires a builtin system");
  }

  const auto& pts = require(j, "points", "");
  if (!pts.is_array()) throw ConfigError("/points", "expected an array");
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const std::string p = "/points/" + std::to_string(i);
    TestPoint tp{vec(require(pts[i], "alpha", p), p + "/alpha", n), vec(require(pts[i], "beta", p), p + "/beta", n)};
    if (!s.box.contains(tp.alpha, 1e-12)) throw ConfigError(p + "/alpha", "outside the box");
    if (!s.box.contains(tp.beta, 1e-12)) throw ConfigError(p + "/beta", "outside the box");
    s.points.push_back(tp);
  }

  s.tolerances.tol_h = s.backend == "grid" ? 0.1 : 0.02;
  s.tolerances.delta = 0.1 * s.box.diameter();
  if (j.contains("tolerances")) {
    const auto& t = j["tolerances"];
    if (t.contains("eps")) s.tolerances.eps = positive(t["eps"], "/tolerances/eps");
    if (t.contains("delta")) s.tolerances.delta = positive(t["delta"], "/tolerances/delta");
    if (t.contains("tolH")) s.tolerances.tol_h = positive(t["tolH"], "/tolerances/tolH");
    if (t.contains("rankTol")) s.tolerances.rank_tol = positive(t["rankTol"], "/tolerances/rankTol");
    if (t.contains("samples")) s.tolerances.samples = count(t["samples"], "/tolerances/samples", 30);
    if (t.contains("directions")) s.tolerances.directions = count(t["directions"], "/tolerances/directions", 1);
    if (t.contains("fdStep")) s.tolerances.fd_step = positive(t["fdStep"], "/tolerances/fdStep");
    if (t.contains("seed")) s.tolerances.seed = count(t["seed"], "/tolerances/seed", 0);
  }

  if (j.contains("oracle")) {
    const auto& o = j["oracle"];
    if (o.contains("horizon")) s.oracle.horizon = positive(o["horizon"], "/oracle/horizon");
    if (o.contains("stages")) s.oracle.stages = static_cast<int>(count(o["stages"], "/oracle/stages", 1));
    if (o.contains("refineRounds")) s.oracle.refine_rounds = static_cast<int>(count(o["refineRounds"], "/oracle/refineRounds", 0));
    if (o.contains("terminalTol")) s.oracle.terminal_tol = positive(o["terminalTol"], "/oracle/terminalTol");
    if (o.contains("dtMax")) s.oracle.dt_max = positive(o["dtMax"], "/oracle/dtMax");
  }

  if (j.contains("output")) {
    if (!j["output"].is_string()) throw ConfigError("/output", "expected a string");
    s.output = j["output"].get<std::string>();
  }
  return s;
}

json to_json(const Scenario& s) {
  json pts = json::array();
  for (const auto& p : s.points) pts.push_back({{"alpha", theorems::vector_json(p.alpha)}, {"beta", theorems::vector_json(p.beta)}});
  json nodes = json::array();
  for (auto c : s.nodes) nodes.push_back(c);
  return {{"schemaVersion", kSchemaVersion},
          {"id", s.id},
          {"system", system_json(s.system)},
          {"box", {{"lower", theorems::vector_json(s.box.lower)}, {"upper", theorems::vector_json(s.box.upper)}}},
          {"grid", {{"nodes", nodes}}},
          {"solver",
           {{"rho", s.solver.rho},
            {"dt", s.solver.dt},
            {"tol", s.solver.tol},
            {"maxIters", s.solver.max_iters},
            {"directions", s.solver.directions}}},
          {"patch", {{"delta", s.patch.delta}, {"perAxisNodes", s.patch.per_axis_nodes}}},
          {"backend", s.backend},
          {"points", pts},
          {"tolerances",
           {{"eps", s.tolerances.eps},
            {"delta", s.tolerances.delta},
            {"tolH", s.tolerances.tol_h},
            {"rankTol", s.tolerances.rank_tol},
            {"samples", s.tolerances.samples},
            {"directions", s.tolerances.directions},
            {"fdStep", s.tolerances.fd_step},
            {"seed", s.tolerances.seed}}},
          {"oracle",
           {{"horizon", s.oracle.horizon},
            {"stages", s.oracle.stages},
            {"refineRounds", s.oracle.refine_rounds},
            {"terminalTol", s.oracle.terminal_tol},
            {"dtMax", s.oracle.dt_max}}},
          {"output", s.output}};
}

Scenario load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path, "cannot open scenario file");
  std::stringstream ss;
  ss << in.rdbuf();
  const std::string text = ss.str();
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    // Translate the byte offset into line and column.
    std::size_t line = 1;
    std::size_t col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ConfigError(path, "JSON syntax error at line " + std::to_string(line) + ", column " + std::to_string(col));
  }
  return from_json(j);
}

const std::vector<std::string>& template_names() {
  static const std::vector<std::string> names = {"eikonal", "box", "drift", "halfball"};
  return names;
}

Scenario make_template(const std::string& name) {
  json sys;
  json points = json::array();
  if (name == "eikonal") {
    sys = {{"builtin", "eikonal"}};
    points = json::parse(R"([{"alpha":[0,0],"beta":[1,0]},{"alpha":[-0.3,0.2],"beta":[0.3,-0.4]}])");
  } else if (name == "box") {
    sys = {{"builtin", "box"}};
    points = json::parse(R"([{"alpha":[0,0],"beta":[1,1]},{"alpha":[0,0],"beta":[1,0.2]}])");
  } else if (name == "drift") {
    sys = {{"builtin", "drift"}, {"velocity", {1, 0}}};
    points = json::parse(R"([{"alpha":[-0.5,0],"beta":[0.5,0]},{"alpha":[0,0.3],"beta":[0.6,0.3]}])");
  } else if (name == "halfball") {
    sys = {{"builtin", "halfball"}, {"axis", 1}};
    points = json::parse(R"([{"alpha":[0,0],"beta":[0,0.8]},{"alpha":[-0.2,-0.3],"beta":[0.4,0.2]}])");
  } else {
    throw InvalidArgument("unknown template '" + name + "'");
  }
  const json j = {{"schemaVersion", kSchemaVersion},
                  {"id", name},
                  {"system", sys},
                  {"box", {{"lower", {-1, -1}}, {"upper", {1, 1}}}},
                  {"grid", {{"nodes", 101}}},
                  {"points", points},
                  {"tolerances", {{"delta", 0.1}, {"tolH", 0.1}}},
                  {"output", "out/" + name}};
  return from_json(j);
}

}  // namespace bitime::scenario
