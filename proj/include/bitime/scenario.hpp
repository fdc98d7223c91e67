#pragma once

#include "bitime/closed_form.hpp"
#include "bitime/oracle.hpp"
#include "bitime/solver.hpp"
#include "bitime/theorems.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace bitime::scenario {

inline constexpr int kSchemaVersion = 1;

/// Invalid scenario content. `field` is a JSON pointer to the culprit.
class ConfigError : public InvalidArgument {
 public:
  ConfigError(const std::string& field, const std::string& what)
      : InvalidArgument(field + ": " + what), field_(field) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

struct TestPoint {
  Vector alpha;
  Vector beta;
};

/// The "system" block: a builtin tag or an explicit multifunction. The JSON
/// source is kept so the scenario round-trips unchanged.
struct SystemSpec {
  nlohmann::json source;
  std::optional<minitime::BenchmarkSystem> builtin;
  std::size_t dim = 0;

  vfield::Multifunction multifunction() const;
};

struct Scenario {
  std::string id;
  SystemSpec system;
  Box box;
  std::vector<std::size_t> nodes;
  minitime::SolverOptions solver;
  minitime::PatchOptions patch;
  /// "closed_form" (builtins only) or "grid".
  std::string backend = "closed_form";
  std::vector<TestPoint> points;
  theorems::Tolerances tolerances;
  trajectory::OracleOptions oracle;
  std::string output = "out";

  minitime::GridSpec grid() const;
  std::string name() const;
};

/// Throws ConfigError naming the offending field.
Scenario from_json(const nlohmann::json& j);
nlohmann::json to_json(const Scenario& s);

/// Parses a file; JSON syntax errors are reported with line and column.
Scenario load(const std::string& path);

/// Ready-made scenarios: eikonal, box, drift, halfball.
const std::vector<std::string>& template_names();
Scenario make_template(const std::string& name);

}  // namespace bitime::scenario
