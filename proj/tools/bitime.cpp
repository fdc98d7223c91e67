// bitime: scenario-driven front end for the minimal time toolkit.
#include "bitime/closed_form.hpp"
#include "bitime/export.hpp"
#include "bitime/oracle.hpp"
#include "bitime/scenario.hpp"
#include "bitime/solver.hpp"
#include "bitime/theorems.hpp"
#include "bitime/value_source.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

namespace fs = std::filesystem;
using namespace bitime;
using nlohmann::json;

namespace {

enum Exit { kOk = 0, kConfig = 1, kNonConvergence = 2, kTheoremFailure = 3 };

enum class Level { Error = 0, Info = 1, Debug = 2 };

Level log_level() {
  const char* env = std::getenv("BITIME_LOG");
  if (env == nullptr) return Level::Info;
  const std::string v(env);
  if (v == "error") return Level::Error;
  if (v == "debug") return Level::Debug;
  return Level::Info;
}

void log(Level lvl, const std::string& msg) {
  static const Level threshold = log_level();
  static std::mutex mu;
  if (lvl > threshold) return;
  static const char* names[] = {"error", "info", "debug"};
  std::lock_guard<std::mutex> lock(mu);
  std::cerr << "[" << names[static_cast<int>(lvl)] << "] " << msg << "\n";
}

// Runs fn(i) for i in [0, n) on `jobs` threads.
template <class Fn>
void parallel_for(std::size_t n, unsigned jobs, Fn fn) {
  jobs = std::max(1U, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
  std::atomic<std::size_t> next{0};
  std::exception_ptr err;
  std::mutex err_mu;
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mu);
        if (!err) err = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < jobs; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (err) std::rethrow_exception(err);
}

struct Common {
  std::string scenario;
  unsigned jobs = std::max(1U, std::thread::hardware_concurrency());
  std::optional<std::uint64_t> seed;
  std::string out;
};

scenario::Scenario load(const Common& c) {
  auto s = scenario::load(c.scenario);
  if (c.seed) s.tolerances.seed = *c.seed;
  if (!c.out.empty()) s.output = c.out;
  return s;
}

std::string point_text(const Vector& a, const Vector& b) {
  std::ostringstream os;
  for (Eigen::Index i = 0; i < a.size(); ++i) os << (i ? ";" : "") << io::format_number(a[i]);
  os << "|";
  for (Eigen::Index i = 0; i < b.size(); ++i) os << (i ? ";" : "") << io::format_number(b[i]);
  return os.str();
}

// ---------------------------------------------------------------- init

int cmd_init(const std::string& name, const std::string& out) {
  const auto s = scenario::make_template(name);
  const std::string text = scenario::to_json(s).dump(2) + "\n";
  if (out.empty()) {
    std::cout << text;
  } else {
    io::write_file(out, text);
    log(Level::Info, "wrote " + out);
  }
  return kOk;
}

// ---------------------------------------------------------------- solve

int cmd_solve(const Common& c) {
  const auto s = load(c);
  const auto f = s.system.multifunction();
  const auto grid = s.grid();
  grid.validate();
  std::vector<minitime::ProductPatch> patches(s.points.size());
  parallel_for(s.points.size(), c.jobs, [&](std::size_t i) {
    log(Level::Debug, "solving patch for point " + std::to_string(i));
    patches[i] = minitime::solve_bilateral_patch(f, s.points[i].alpha, s.points[i].beta, grid, s.patch);
  });
  bool converged = true;
  json summary = json::array();
  for (std::size_t i = 0; i < patches.size(); ++i) {
    const auto& p = patches[i];
    const std::size_t center = p.fields.size() / 2;  // the y node at beta (odd node counts)
    const auto& field = p.fields[center];
    bool all = true;
    for (const auto& fl : p.fields) all = all && fl.converged;
    converged = converged && all;
    const std::string stem = s.output + "/point" + std::to_string(i);
    std::ostringstream csv;
    io::write_field_csv(csv, field);
    io::write_file(stem + "_field.csv", csv.str());
    json header = io::field_header(field);
    header["patch"] = {{"delta", p.delta},
                       {"yNodes", p.fields.size()},
                       {"allConverged", all},
                       {"valueAtBase", theorems::number_json(p.value(p.alpha, p.beta))}};
    io::write_file(stem + "_field.json", header.dump(2) + "\n");
    summary.push_back({{"point", i}, {"converged", all}, {"valueAtBase", theorems::number_json(p.value(p.alpha, p.beta))}});
    if (!all) log(Level::Error, "point " + std::to_string(i) + ": value iteration did not converge");
  }
  io::write_file(s.output + "/solve.json", summary.dump(2) + "\n");
  log(Level::Info, "solve wrote " + std::to_string(patches.size()) + " field(s) to " + s.output);
  return converged ? kOk : kNonConvergence;
}

// ---------------------------------------------------------------- verify

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<varcalc::CandidateCovector> load_candidates(const std::string& path, std::size_t n) {
  std::ifstream in(path);
  if (!in) throw scenario::ConfigError(path, "cannot open candidate file");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw scenario::ConfigError(path, std::string("JSON syntax error: ") + e.what());
  }
  if (!j.is_array()) throw scenario::ConfigError(path, "expected an array of {zeta, theta}");
  std::vector<varcalc::CandidateCovector> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const auto& e = j[i];
    if (!e.contains("zeta") || !e.contains("theta") || e["zeta"].size() != n || e["theta"].size() != n) {
      throw scenario::ConfigError(path + "/" + std::to_string(i), "expected zeta and theta with " + std::to_string(n) + " entries");
    }
    varcalc::CandidateCovector c{Vector(static_cast<Eigen::Index>(n)), Vector(static_cast<Eigen::Index>(n)), std::nullopt};
    for (std::size_t k = 0; k < n; ++k) {
      c.zeta[static_cast<Eigen::Index>(k)] = e["zeta"][k].get<double>();
      c.theta[static_cast<Eigen::Index>(k)] = e["theta"][k].get<double>();
    }
    out.push_back(c);
  }
  return out;
}

theorems::System make_system(const scenario::Scenario& s, const Vector& alpha, const Vector& beta) {
  theorems::System sys{s.name(), s.system.multifunction(), nullptr};
  if (s.backend == "closed_form") {
    sys.T = std::make_shared<minitime::ClosedFormSource>(*s.system.builtin);
  } else {
    sys.T = std::make_shared<minitime::PatchSource>(
        minitime::solve_bilateral_patch(sys.F, alpha, beta, s.grid(), s.patch));
  }
  return sys;
}

theorems::TheoremReport precondition_report(const std::string& id, const theorems::System& sys, const Vector& a,
                                            const Vector& b, const theorems::Tolerances& tol, const std::string& why) {
  theorems::TheoremReport r;
  r.theorem_id = id;
  r.system = sys.name;
  r.alpha = a;
  r.beta = b;
  r.tol = tol;
  r.panel = "none";
  r.vacuous = true;
  r.subchecks.push_back({"precondition", true, true, why});
  return r;
}

int cmd_verify(const Common& c, const std::string& theorem_list, const std::string& point_list,
               const std::string& candidates_path) {
  auto s = load(c);
  std::vector<std::string> ids = theorem_list.empty() ? theorems::theorem_ids() : split_list(theorem_list);
  std::vector<std::string> expanded;
  for (const auto& id : ids) {
    if (id == "RE") {
      expanded.push_back("RE_i");
      expanded.push_back("RE_ii");
    } else if (!theorems::is_theorem_id(id)) {
      throw scenario::ConfigError("--theorems", "unknown theorem id '" + id + "'");
    } else {
      expanded.push_back(id);
    }
  }
  std::vector<std::size_t> points;
  if (point_list.empty()) {
    for (std::size_t i = 0; i < s.points.size(); ++i) points.push_back(i);
  } else {
    for (const auto& p : split_list(point_list)) {
      std::size_t idx = 0;
      try {
        idx = static_cast<std::size_t>(std::stoul(p));
      } catch (const std::exception&) {
        throw scenario::ConfigError("--points", "not an index: '" + p + "'");
      }
      if (idx >= s.points.size()) throw scenario::ConfigError("--points", "index out of range: " + p);
      points.push_back(idx);
    }
  }
  if (s.backend == "grid" && s.tolerances.delta > s.patch.delta) {
    throw scenario::ConfigError("/tolerances/delta", "must not exceed /patch/delta for the grid backend");
  }
  const std::size_t n = s.system.dim;
  std::vector<varcalc::CandidateCovector> analytic;
  if (!candidates_path.empty()) {
    analytic = load_candidates(candidates_path, n);
  }
  // The half-ball candidate (e_axis, -e_axis) applies where beta - alpha has a zero axis component.
  auto analytic_for = [&](const scenario::TestPoint& tp) {
    if (!candidates_path.empty()) return analytic;
    std::vector<varcalc::CandidateCovector> out;
    if (s.system.builtin && s.system.builtin->tag == minitime::SystemTag::HalfBall) {
      const auto k = static_cast<Eigen::Index>(s.system.builtin->axis);
      if (std::abs(tp.beta[k] - tp.alpha[k]) <= 1e-12) {
        Vector e = Vector::Zero(static_cast<Eigen::Index>(n));
        e[k] = 1.0;
        out.push_back({e, Vector(-e), std::nullopt});
      }
    }
    return out;
  };

  const bool needs_diag = std::any_of(expanded.begin(), expanded.end(),
                                      [](const std::string& id) { return id.rfind("diagonal", 0) == 0; });
  const bool needs_pair = std::any_of(expanded.begin(), expanded.end(),
                                      [](const std::string& id) { return id.rfind("diagonal", 0) != 0; });

  // Systems per base: diagonal (alpha, alpha) and pair (alpha, beta).
  std::vector<std::optional<theorems::System>> diag_sys(points.size()), pair_sys(points.size());
  parallel_for(points.size(), c.jobs, [&](std::size_t k) {
    const auto& tp = s.points[points[k]];
    if (needs_diag) diag_sys[k] = make_system(s, tp.alpha, tp.alpha);
    if (needs_pair) pair_sys[k] = make_system(s, tp.alpha, tp.beta);
  });

  struct Task {
    std::size_t k;
    std::string id;
  };
  std::vector<Task> tasks;
  for (std::size_t k = 0; k < points.size(); ++k) {
    for (const auto& id : expanded) {
      if (id == "RE_ii" && std::find(expanded.begin(), expanded.end(), "RE_i") != expanded.end()) continue;
      if (id == "ZN" && std::find(expanded.begin(), expanded.end(), "RE1") != expanded.end()) continue;
      tasks.push_back({k, id});
    }
  }
  std::vector<std::vector<theorems::TheoremReport>> results(tasks.size());
  parallel_for(tasks.size(), c.jobs, [&](std::size_t t) {
    const auto& task = tasks[t];
    const auto& tp = s.points[points[task.k]];
    theorems::Tolerances tol = s.tolerances;
    tol.seed = s.tolerances.seed + 1000 * points[task.k];
    log(Level::Debug, "point " + std::to_string(points[task.k]) + ": " + task.id);
    auto has = [&](const std::string& id) { return std::find(expanded.begin(), expanded.end(), id) != expanded.end(); };
    if (task.id == "diagonal_sub") {
      results[t].push_back(theorems::verify_diagonal_sub(*diag_sys[task.k], tp.alpha,
                                                         theorems::default_diagonal_panel(n, tol.tol_h), tol));
      return;
    }
    if (task.id == "diagonal_singular") {
      auto panel = theorems::unit_panel(n, 20);
      panel.insert(panel.begin(), Vector::Zero(static_cast<Eigen::Index>(n)));
      results[t].push_back(theorems::verify_diagonal_singular(*diag_sys[task.k], tp.alpha, panel, tol));
      return;
    }
    const auto& sys = *pair_sys[task.k];
    try {
      if (task.id == "eqH") {
        results[t].push_back(theorems::verify_eqH(sys, tp.alpha, tp.beta, tol));
      } else if (task.id == "PN") {
        results[t].push_back(theorems::verify_PN(sys, tp.alpha, tp.beta, tol));
      } else if (task.id == "HPN") {
        results[t].push_back(theorems::verify_HPN(sys, tp.alpha, tp.beta, analytic_for(tp), tol));
      } else if (task.id == "RE_i" || task.id == "RE_ii") {
        for (auto& r : theorems::verify_RE(sys, tp.alpha, tp.beta, tol)) {
          if (has(r.theorem_id)) results[t].push_back(std::move(r));
        }
      } else if (task.id == "RE1" || task.id == "ZN") {
        for (auto& r : theorems::verify_RE1_ZN(sys, tp.alpha, tp.beta, tol)) {
          if (has(r.theorem_id)) results[t].push_back(std::move(r));
        }
      } else if (task.id == "dim") {
        results[t].push_back(theorems::verify_dim(sys, tp.alpha, tp.beta, tol));
      }
    } catch (const InvalidArgument& e) {
      std::vector<std::string> which{task.id};
      if (task.id == "RE_i" && has("RE_ii")) which.push_back("RE_ii");
      if (task.id == "RE1" && has("ZN")) which.push_back("ZN");
      for (const auto& w : which) results[t].push_back(precondition_report(w, sys, tp.alpha, tp.beta, tol, e.what()));
    }
  });

  std::map<std::string, json> by_id;
  std::vector<theorems::TheoremReport> all;
  for (auto& group : results) {
    for (auto& r : group) {
      json j = theorems::to_json(r);
      auto& arr = by_id[r.theorem_id];
      if (arr.is_null()) arr = json::array();
      arr.push_back(j);
      all.push_back(std::move(r));
    }
  }
  std::stable_sort(all.begin(), all.end(), [&](const auto& a, const auto& b) {
    const auto& ids_ = theorems::theorem_ids();
    return std::find(ids_.begin(), ids_.end(), a.theorem_id) < std::find(ids_.begin(), ids_.end(), b.theorem_id);
  });
  bool ok = true;
  for (const auto& r : all) {
    if (!r.overall()) {
      ok = false;
      for (const auto& sc : r.subchecks) {
        if (!sc.pass) log(Level::Error, r.theorem_id + " failed subcheck '" + sc.name + "': " + sc.detail);
      }
    }
  }
  for (const auto& [id, arr] : by_id) io::write_file(s.output + "/report_" + id + ".json", arr.dump(2) + "\n");
  const std::string table = theorems::summary_table(all);
  io::write_file(s.output + "/summary.txt", table);
  std::cout << table;
  log(Level::Info, "verify wrote " + std::to_string(by_id.size()) + " report file(s) to " + s.output);
  return ok ? kOk : kTheoremFailure;
}

// ---------------------------------------------------------------- oracle

int cmd_oracle(const Common& c, std::size_t pairs) {
  const auto s = load(c);
  const auto f = s.system.multifunction();
  const auto grid = s.grid();
  std::ostringstream csv;
  csv << "pair,alpha,beta,Tgrid,Toracle,Tclosed,absdiff\n";
  if (pairs > 0) {
    minitime::DepartureTable table(f, grid, s.solver);
    Rng rng(s.tolerances.seed);
    std::vector<std::pair<Vector, Vector>> ab;
    for (std::size_t k = 0; k < pairs; ++k) {
      Vector a = rng.in_box(s.box);
      Vector b = rng.in_box(s.box);
      ab.emplace_back(a, b);
    }
    std::vector<std::string> rows(pairs);
    trajectory::OracleOptions oo = s.oracle;
    oo.box = s.box;
    parallel_for(pairs, c.jobs, [&](std::size_t k) {
      const auto& [a, b] = ab[k];
      const auto field = minitime::solve_unilateral(table, b, s.solver);
      const double tg = field.at(a);
      const double to = trajectory::brute_force_min_time(f, a, b, oo).minimal_time;
      const double tc = s.system.builtin ? minitime::closed_form_T(*s.system.builtin, a, b) : kInf;
      const double ref = s.system.builtin ? tc : to;
      const double diff = (std::isinf(tg) && std::isinf(ref)) ? 0.0 : std::abs(tg - ref);
      std::ostringstream row;
      row << k << "," << point_text(a, b) << "," << io::format_number(tg) << "," << io::format_number(to) << ","
          << (s.system.builtin ? io::format_number(tc) : std::string("")) << "," << io::format_number(diff) << "\n";
      rows[k] = row.str();
    });
    for (const auto& r : rows) csv << r;
  }
  // point_text uses '|' between alpha and beta; make the header match.
  std::string text = csv.str();
  text.replace(text.find("alpha,beta"), 10, "alpha|beta");
  io::write_file(s.output + "/oracle.csv", text);
  std::cout << text;
  return kOk;
}

// ---------------------------------------------------------------- report

int cmd_report(const std::string& dir) {
  if (!fs::is_directory(dir)) throw scenario::ConfigError(dir, "not a directory");
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    const auto name = e.path().filename().string();
    if (name.rfind("report_", 0) == 0 && e.path().extension() == ".json") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<theorems::TheoremReport> reports;
  for (const auto& p : files) {
    std::ifstream in(p);
    const json arr = json::parse(in);
    for (const auto& j : arr) {
      theorems::TheoremReport r;
      r.theorem_id = j.at("theorem").get<std::string>();
      r.system = j.at("system").get<std::string>();
      auto vec = [](const json& a) {
        Vector v(static_cast<Eigen::Index>(a.size()));
        for (std::size_t i = 0; i < a.size(); ++i) {
          v[static_cast<Eigen::Index>(i)] = a[i].is_string() ? kInf : a[i].get<double>();
        }
        return v;
      };
      r.alpha = vec(j.at("alpha"));
      r.beta = vec(j.at("beta"));
      r.vacuous = j.at("vacuous").get<bool>();
      r.inconsistencies = j.at("inconsistencies").get<std::size_t>();
      for (const auto& sc : j.at("subchecks")) {
        r.subchecks.push_back({sc.at("name").get<std::string>(), sc.at("pass").get<bool>(),
                               sc.at("vacuous").get<bool>(), sc.at("detail").get<std::string>()});
      }
      reports.push_back(std::move(r));
    }
  }
  std::cout << theorems::summary_table(reports);
  const bool ok = std::all_of(reports.begin(), reports.end(), [](const auto& r) { return r.overall(); });
  return ok ? kOk : kTheoremFailure;
}

void add_common(CLI::App* app, Common& c) {
  app->add_option("scenario", c.scenario, "Scenario JSON file")->required();
  app->add_option("--jobs", c.jobs, "Worker threads")->check(CLI::PositiveNumber);
  app->add_option("--seed", c.seed, "Override the scenario seed");
  app->add_option("--out", c.out, "Output directory (overrides the scenario)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"bitime: bilateral minimal time toolkit"};
  app.require_subcommand(1);

  std::string tmpl = "eikonal";
  std::string init_out;
  auto* init = app.add_subcommand("init", "Write a scenario template");
  init->add_option("--template", tmpl, "eikonal, box, drift or halfball");
  init->add_option("--out", init_out, "Output file (default: stdout)");

  Common solve_c;
  auto* solve = app.add_subcommand("solve", "Grid solves around every test point");
  add_common(solve, solve_c);

  Common verify_c;
  std::string theorem_list;
  std::string point_list;
  std::string candidates;
  auto* verify = app.add_subcommand("verify", "Run theorem checks");
  add_common(verify, verify_c);
  verify->add_option("--theorems", theorem_list, "Comma-separated theorem ids");
  verify->add_option("--points", point_list, "Comma-separated point indices");
  verify->add_option("--candidates", candidates, "JSON file of {zeta, theta} candidates for HPN");

  Common oracle_c;
  std::size_t pairs = 20;
  auto* oracle = app.add_subcommand("oracle", "Compare grid, oracle and closed-form times");
  add_common(oracle, oracle_c);
  oracle->add_option("--pairs", pairs, "Number of random pairs");

  std::string report_dir;
  auto* report = app.add_subcommand("report", "Summarize report files in a directory");
  report->add_option("dir", report_dir, "Directory holding report_*.json")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  try {
    if (*init) return cmd_init(tmpl, init_out);
    if (*solve) return cmd_solve(solve_c);
    if (*verify) return cmd_verify(verify_c, theorem_list, point_list, candidates);
    if (*oracle) return cmd_oracle(oracle_c, pairs);
    if (*report) return cmd_report(report_dir);
  } catch (const InvalidArgument& e) {
    log(Level::Error, e.what());
    return kConfig;
  } catch (const ParseError& e) {
    log(Level::Error, e.what());
    return kConfig;
  } catch (const nlohmann::json::exception& e) {
    log(Level::Error, std::string("malformed JSON: ") + e.what());
    return kConfig;
  } catch (const std::exception& e) {
    log(Level::Error, e.what());
    return kConfig;
  }
  return kOk;
}
