#include "helpers.hpp"

#include "bitime/theorems.hpp"
#include "bitime/value_source.hpp"

#include <doctest.h>

using namespace testing;
using namespace bitime::theorems;
using bitime::minitime::BenchmarkSystem;
using bitime::minitime::ClosedFormSource;

namespace {

System make(const BenchmarkSystem& b) {
  return System{bitime::minitime::tag_name(b.tag), b.multifunction(), std::make_shared<ClosedFormSource>(b)};
}

Tolerances loose() {
  Tolerances t;
  t.tol_h = 0.1;
  return t;
}

}  // namespace

TEST_SUITE("theorems") {

TEST_CASE("theorem ids") {
  CHECK(is_theorem_id("PN"));
  CHECK(is_theorem_id("RE_ii"));
  CHECK_FALSE(is_theorem_id("RE"));
  CHECK_FALSE(is_theorem_id("XYZ"));
  CHECK(theorem_ids().size() >= 10);
}

TEST_CASE("diagonal subgradients on the eikonal system") {
  const auto sys = make(BenchmarkSystem::eikonal());
  Tolerances t;
  const auto r = verify_diagonal_sub(sys, vec({0.2, -0.1}), default_diagonal_panel(2, t.tol_h), t);
  CHECK(r.overall());
  CHECK(r.failures() == 0);
  CHECK(r.inconsistencies == 0);
  CHECK_FALSE(r.subchecks.empty());
}

TEST_CASE("equal Hamiltonians on sub-level normals") {
  for (const auto& b : {BenchmarkSystem::eikonal(), BenchmarkSystem::box()}) {
    CAPTURE(bitime::minitime::tag_name(b.tag));
    const auto r = verify_eqH(make(b), vec({0, 0}), vec({0.6, 0.3}), loose());
    CHECK(r.overall());
    CHECK_FALSE(r.vacuous);
  }
}

TEST_CASE("proximal normal characterization") {
  for (const auto& b : {BenchmarkSystem::eikonal(), BenchmarkSystem::box(),
                        BenchmarkSystem::drift_along(vec({1, 0}))}) {
    CAPTURE(bitime::minitime::tag_name(b.tag));
    const auto r = verify_PN(make(b), vec({-0.3, 0.1}), vec({0.4, 0.1}), loose());
    CHECK(r.overall());
    CHECK(r.inconsistencies == 0);
  }
}

TEST_CASE("diagonal singular subgradients") {
  Tolerances t;
  const auto drift = verify_diagonal_singular(make(BenchmarkSystem::drift_along(vec({1, 0}))), vec({0, 0}),
                                              unit_panel(2, 20), t);
  CHECK(drift.overall());
  CHECK(drift.inconsistencies == 0);
  const auto eik = verify_diagonal_singular(make(BenchmarkSystem::eikonal()), vec({0, 0}), unit_panel(2, 20), t);
  CHECK(eik.overall());
}

TEST_CASE("horizontal singular normals on the half-ball") {
  const CandidateCovector c{vec({1, 0}), vec({-1, 0}), std::nullopt};
  const auto r = verify_HPN(make(BenchmarkSystem::halfball(2, 0)), vec({0, 0}), vec({0, 0.8}), {c}, loose());
  CHECK(r.overall());
  CHECK_FALSE(r.vacuous);

  const auto e = verify_HPN(make(BenchmarkSystem::eikonal()), vec({0, 0}), vec({0.8, 0}), {}, loose());
  CHECK(e.overall());
  CHECK(e.vacuous);
}

TEST_CASE("reachable set and zero-normal statements") {
  const auto sys = make(BenchmarkSystem::eikonal());
  for (const auto& r : verify_RE(sys, vec({0, 0}), vec({0.5, 0}), loose())) CHECK(r.overall());
  const auto bnd = verify_RE1_ZN(sys, vec({0, 0}), vec({0.5, 0}), loose());
  REQUIRE(bnd.size() == 2);
  CHECK(bnd[0].theorem_id == "RE1");
  CHECK(bnd[1].theorem_id == "ZN");
  for (const auto& r : bnd) CHECK(r.overall());
  for (const auto& r : verify_RE1_ZN(sys, vec({0, 0}), vec({0.5, 0}), loose(), 0.8)) CHECK(r.overall());
}

TEST_CASE("cone dimensions") {
  const auto e = verify_dim(make(BenchmarkSystem::eikonal()), vec({0, 0}), vec({0.5, 0.2}), loose());
  REQUIRE(e.kappa);
  REQUIRE(e.ell);
  CHECK(*e.kappa == 1);
  CHECK(*e.ell == 1);
  const auto b = verify_dim(make(BenchmarkSystem::box()), vec({0, 0}), vec({0.5, 0.5}), loose());
  CHECK(b.kappa.value_or(-1) == 2);
  CHECK(b.ell.value_or(-1) == 2);
  CHECK_THROWS_AS(verify_dim(make(BenchmarkSystem::box()), vec({0, 0}), vec({0, 0}), loose()),
                  bitime::InvalidArgument);
}

TEST_CASE("reports are deterministic and serialize") {
  const auto sys = make(BenchmarkSystem::box());
  const auto a = verify_PN(sys, vec({0, 0}), vec({0.5, 0.2}), loose());
  const auto b = verify_PN(sys, vec({0, 0}), vec({0.5, 0.2}), loose());
  CHECK(to_json(a).dump() == to_json(b).dump());
  const auto j = to_json(a);
  CHECK(j.at("theorem") == "PN");
  CHECK(j.contains("subchecks"));
  CHECK(number_json(bitime::kInf) == "inf");
  CHECK(number_json(1.5) == 1.5);
  const std::string table = summary_table({a, b});
  CHECK(table.find("PN") != std::string::npos);
}

}  // TEST_SUITE
