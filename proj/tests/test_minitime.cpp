#include "helpers.hpp"

#include "bitime/closed_form.hpp"
#include "bitime/oracle.hpp"
#include "bitime/random.hpp"
#include "bitime/sampling.hpp"
#include "bitime/solver.hpp"
#include "bitime/value_source.hpp"

#include <doctest.h>

#include <cmath>

using namespace testing;
using namespace bitime::minitime;
using bitime::kInf;

namespace {

GridSpec square(std::size_t nodes) { return GridSpec{vec({-1, -1}), vec({1, 1}), {nodes, nodes}}; }

double sup_error(const BenchmarkSystem& sys, std::size_t nodes, double rho) {
  SolverOptions o;
  o.rho = rho;
  const Vector beta = vec({0.1, -0.2});
  const auto field = solve_unilateral(sys.multifunction(), beta, square(nodes), o);
  bitime::Rng rng(8);
  double worst = 0.0;
  for (int k = 0; k < 200; ++k) {
    Vector x = rng.in_box(bitime::Box{vec({-0.9, -0.9}), vec({0.9, 0.9})});
    // Drift is finite only on the line through beta.
    if (sys.tag == SystemTag::Drift) x[1] = beta[1];
    const double exact = closed_form_T(sys, x, beta);
    const double grid = field.at(x);
    if (std::isinf(exact) || std::isinf(grid)) continue;
    worst = std::max(worst, std::abs(grid - exact));
  }
  return worst;
}

}  // namespace

TEST_SUITE("minitime") {

TEST_CASE("closed forms") {
  CHECK(closed_form_T(BenchmarkSystem::eikonal(), vec({0, 0}), vec({3, 4})) == doctest::Approx(5));
  CHECK(closed_form_T(BenchmarkSystem::box(), vec({0, 0}), vec({1, 3})) == doctest::Approx(3));
  const auto drift = BenchmarkSystem::drift_along(vec({1, 0}));
  CHECK(closed_form_T(drift, vec({0, 0}), vec({-1, 0})) == kInf);
  CHECK(closed_form_T(drift, vec({0, 0}), vec({0.5, 0})) == doctest::Approx(0.5));
  CHECK(closed_form_T(drift, vec({0, 0}), vec({0.5, 0.01})) == kInf);
  const auto half = BenchmarkSystem::halfball(2, 0);
  CHECK(closed_form_T(half, vec({0, 0}), vec({0, 1})) == doctest::Approx(1));
  CHECK(closed_form_T(half, vec({0, 0}), vec({-0.1, 1})) == kInf);
}

TEST_CASE("unilateral solve examples") {
  SolverOptions o;
  const auto ball = solve_unilateral(unit_ball(2), vec({0, 0}), square(101), o);
  CHECK(ball.converged);
  CHECK(ball.at(vec({1, 0})) >= 0.9);
  CHECK(ball.at(vec({1, 0})) <= 1.1);

  const Multifunction drift(2, Singleton{field({"1", "0"})});
  const auto d = solve_unilateral(drift, vec({0, 0}), square(101), o);
  CHECK(d.at(vec({-0.5, 0})) >= 0.4);
  CHECK(d.at(vec({-0.5, 0})) <= 0.6);
  CHECK(d.at(vec({0.5, 0})) == kInf);

  for (std::size_t i = 0; i < ball.grid.size(); ++i) {
    const Vector x = ball.grid.node(i);
    if ((x - vec({0, 0})).norm() <= o.rho) CHECK(ball.values[i] == 0.0);
    CHECK(ball.values[i] >= 0.0);
  }
}

TEST_CASE("solver input validation") {
  SolverOptions o;
  CHECK_THROWS_AS(solve_unilateral(unit_ball(2), vec({2, 0}), square(101), o), bitime::InvalidArgument);
  o.rho = 0.001;
  CHECK_THROWS_AS(solve_unilateral(unit_ball(2), vec({0, 0}), square(101), o), bitime::InvalidArgument);
  o = SolverOptions{};
  o.dt = 0.1;
  try {
    solve_unilateral(unit_ball(2), vec({0, 0}), square(101), o);
    FAIL("expected a CFL violation");
  } catch (const bitime::InvalidArgument& e) {
    CHECK(std::string(e.what()).find("CFL") != std::string::npos);
    CHECK(std::string(e.what()).find("0.04") != std::string::npos);
  }
  CHECK(cfl_bound(unit_ball(2), square(101), 32) == doctest::Approx(0.04));
}

TEST_CASE("value iteration is monotone per sweep") {
  SolverOptions o;
  std::vector<double> prev;
  bool monotone = true;
  int sweeps = 0;
  o.on_sweep = [&](int, const std::vector<double>& v) {
    if (!prev.empty()) {
      for (std::size_t i = 0; i < v.size(); ++i) monotone = monotone && v[i] <= prev[i];
    }
    prev = v;
    ++sweeps;
  };
  const auto f = solve_unilateral(BenchmarkSystem::box().multifunction(), vec({0.3, 0.1}), square(61), o);
  CHECK(f.converged);
  CHECK(sweeps > 1);
  CHECK(monotone);
}

TEST_CASE("grid refinement reduces the error against closed forms") {
  for (const auto& sys : {BenchmarkSystem::eikonal(), BenchmarkSystem::box(),
                          BenchmarkSystem::drift_along(vec({1, 0}))}) {
    CAPTURE(tag_name(sys.tag));
    const double coarse = sup_error(sys, 51, 0.08);
    const double fine = sup_error(sys, 101, 0.04);
    CHECK(fine < coarse);
    CHECK(fine <= 2 * (0.02 + 0.04));
  }
}

TEST_CASE("bilateral patch examples") {
  PatchOptions o;
  const auto ball = solve_bilateral_patch(unit_ball(2), vec({0, 0}), vec({0.6, 0}), square(101), o);
  const double t = ball.value(vec({0, 0}), vec({0.6, 0}));
  CHECK(t >= 0.5);
  CHECK(t <= 0.7);
  CHECK(ball.value(vec({0.6, 0}), vec({0.6, 0})) == 0.0);

  const auto box = solve_bilateral_patch(BenchmarkSystem::box().multifunction(), vec({-0.3, -0.3}), vec({0.6, 0.6}),
                                         square(101), o);
  const double tb = box.value(vec({-0.3, -0.3}), vec({0.6, 0.6}));
  CHECK(tb >= 0.8);
  CHECK(tb <= 1.0);
  CHECK_THROWS_AS(solve_bilateral_patch(unit_ball(2), vec({0, 0}), vec({0.9, 0}), square(101), o),
                  bitime::InvalidArgument);
}

TEST_CASE("patch values vanish exactly near the diagonal") {
  PatchOptions o;
  o.delta = 0.2;
  const auto p = solve_bilateral_patch(unit_ball(2), vec({0.1, 0.1}), vec({0.1, 0.1}), square(101), o);
  bitime::Rng rng(2);
  for (int k = 0; k < 200; ++k) {
    const Vector y = rng.in_box(p.y_grid.box());
    const Vector x = rng.in_box(p.x_patch());
    const double v = p.value(x, y);
    if ((x - y).norm() <= o.solver.rho - 2 * 0.02 * std::sqrt(2.0)) CHECK(v == 0.0);
    if ((x - y).norm() > o.solver.rho + 0.05) CHECK(v > 0.0);
  }
}

TEST_CASE("sub-level sampling") {
  const ClosedFormSource eik(BenchmarkSystem::eikonal());
  const Vector c = vec({0, 0, 1, 0});
  const auto s = sample_sublevel(eik, 1.0, c, 0.2, 500, 3);
  CHECK(s.points.size() >= 100);
  for (const auto& z : s.points) {
    CHECK((z.tail(2) - z.head(2)).norm() <= 1.0 + s.membership_slack);
    CHECK((z - c).norm() <= 0.2 + 1e-12);
  }
  const ClosedFormSource drift(BenchmarkSystem::drift_along(vec({1, 0})));
  const auto d = sample_sublevel(drift, 1.0, vec({0, 0, 0.8, 0}), 0.2, 300, 4);
  for (const auto& z : d.points) CHECK(std::abs(z[3] - z[1]) <= 1e-9);

  const auto all = sample_sublevel(eik, 10.0, c, 0.2, 300, 5);
  CHECK(all.points.size() == 300);
}

TEST_CASE("epigraph sampling") {
  const ClosedFormSource eik(BenchmarkSystem::eikonal());
  const Vector c = vec({0, 0, 1, 0});
  const auto e = sample_epigraph(eik, c, 1.0, 0.2, 400, 6);
  CHECK(e.graph_points > 0);
  for (const auto& p : e.points) {
    const double t = eik.value(Vector(p.head(4)));
    CHECK(std::isfinite(t));
    CHECK(p[4] >= t - 1e-12);
  }
  const ClosedFormSource half(BenchmarkSystem::halfball(2, 0));
  const auto h = sample_epigraph(half, vec({0, 0, 0, 0.8}), 0.8, 0.2, 400, 7);
  for (const auto& p : h.points) CHECK(std::isfinite(half.value(Vector(p.head(4)))));
}

TEST_CASE("basic properties of closed-form T") {
  bitime::Rng rng(9);
  for (const auto& sys : {BenchmarkSystem::eikonal(), BenchmarkSystem::box(), BenchmarkSystem::halfball(2, 0)}) {
    CAPTURE(tag_name(sys.tag));
    const ClosedFormSource src(sys);
    std::vector<Vector> pts;
    for (int k = 0; k < 60; ++k) pts.push_back(rng.in_ball(vec({0, 0}), 0.8));
    BasicPropertyOptions o;
    o.triples = 300;
    o.lsc_points = 30;
    const auto rep = check_basic_properties(src, pts, o);
    CHECK(rep.triangle_ok);
    CHECK(rep.max_triangle_violation <= 1e-9);
    CHECK(rep.diagonal_ok);
    CHECK(rep.lsc_ok);
  }
  // Collinear drift triples are additive.
  const auto drift = BenchmarkSystem::drift_along(vec({1, 0}));
  const double ab = closed_form_T(drift, vec({-0.5, 0.2}), vec({0.4, 0.2}));
  CHECK(ab == doctest::Approx(closed_form_T(drift, vec({-0.5, 0.2}), vec({0.1, 0.2})) +
                              closed_form_T(drift, vec({0.1, 0.2}), vec({0.4, 0.2}))));
}

TEST_CASE("grid and oracle agree on a few pairs") {
  const auto sys = BenchmarkSystem::box();
  const auto f = sys.multifunction();
  SolverOptions o;
  DepartureTable table(f, square(101), o);
  bitime::trajectory::OracleOptions oo;
  bitime::Rng rng(12);
  for (int k = 0; k < 3; ++k) {
    const Vector a = rng.in_ball(vec({0, 0}), 0.7);
    const Vector b = rng.in_ball(vec({0, 0}), 0.7);
    const double grid = solve_unilateral(table, b, o).at(a);
    const double oracle = bitime::trajectory::brute_force_min_time(f, a, b, oo).minimal_time;
    CHECK(std::abs(grid - oracle) <= 2 * (0.02 + 0.04) + oo.terminal_tol);
  }
}

}  // TEST_SUITE
