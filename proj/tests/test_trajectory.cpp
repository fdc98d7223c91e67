#include "helpers.hpp"

#include "bitime/oracle.hpp"
#include "bitime/random.hpp"

#include <doctest.h>

#include <cmath>

using namespace testing;
using namespace bitime::trajectory;
using bitime::kInf;

namespace {

Multifunction box_system() { return polytope({{"1", "1"}, {"1", "-1"}, {"-1", "1"}, {"-1", "-1"}}); }

}  // namespace

TEST_SUITE("trajectory") {

TEST_CASE("integration of constant and linear fields") {
  const Multifunction drift(2, Singleton{field({"1", "0"})});
  const auto t1 = integrate(drift, vec({0, 0}), Selection::constant(Control()), 1.0, 0.01);
  CHECK(t1.start().isApprox(vec({0, 0})));
  CHECK((t1.end() - vec({1, 0})).norm() <= 1e-12);

  const auto t2 = integrate(unit_ball(2), vec({0, 0}), Selection::constant(vec({0, 1})), 2.0, 0.01);
  CHECK((t2.end() - vec({0, 2})).norm() <= 1e-9);

  const Multifunction growth(1, Singleton{field({"x1"})});
  const auto t3 = integrate(growth, vec({1}), Selection::constant(Control()), 1.0, 1e-3);
  CHECK(std::abs(t3.end()[0] - std::exp(1.0)) <= 1e-6);
}

TEST_CASE("stored velocities lie in F and the Gronwall bound holds") {
  const auto f = polytope({{"x2", "1"}, {"-x2", "1"}, {"0.5", "-x1"}});
  const Selection sel{{0.0, 0.4, 0.9}, {vec({1, 0, 0}), vec({0.2, 0.3, 0.5}), vec({0, 0, 1})}};
  const auto t = integrate(f, vec({0.1, -0.2}), sel, 1.5, 0.01);
  REQUIRE(t.states.size() == t.velocities.size());
  for (std::size_t i = 0; i < t.states.size(); ++i) CHECK(f.distance_to(t.states[i], t.velocities[i]) <= 1e-9);
  CHECK(t.gronwall_violation() <= 0.0);
}

TEST_CASE("integration stops when leaving the box") {
  const Multifunction drift(2, Singleton{field({"1", "0"})});
  const Box box{vec({-1, -1}), vec({1, 1})};
  const auto t = integrate(drift, vec({0, 0}), Selection::constant(Control()), 3.0, 0.01, box);
  CHECK(t.truncated);
  CHECK(t.end()[0] <= 1.0 + 0.011);
}

TEST_CASE("controls are validated") {
  CHECK_THROWS_AS(validate_control(unit_ball(2), vec({2, 0})), bitime::InvalidArgument);
  CHECK_THROWS_AS(validate_control(box_system(), vec({0.5, 0.6, 0, 0})), bitime::InvalidArgument);
  CHECK_NOTHROW(validate_control(box_system(), vec({0.25, 0.25, 0.25, 0.25})));
  CHECK_THROWS_AS(control_for_velocity(unit_ball(2), vec({0, 0}), vec({2, 0})), bitime::InvalidArgument);
}

TEST_CASE("emanating trajectories leave with the requested velocity") {
  const auto e1 = emanating_trajectory(unit_ball(2), vec({0, 0}), vec({1, 0}), 0.5);
  CHECK(e1.k_constant == doctest::Approx(0).epsilon(1e-9));
  CHECK((e1.trajectory.end() - vec({0.5, 0})).norm() <= 1e-9);

  const auto f = polytope({{"x2", "1"}, {"-x2", "1"}});
  const auto e2 = emanating_trajectory(f, vec({0, 0}), vec({0, 1}), 0.5);
  const auto& tr = e2.trajectory;
  for (std::size_t i = 1; i < tr.times.size(); ++i) {
    CHECK((tr.velocities[i] - vec({0, 1})).norm() <= e2.k_constant * tr.times[i] + 1e-12);
  }

  const Multifunction rot(2, Singleton{field({"-x2", "x1"})});
  const auto e3 = emanating_trajectory(rot, vec({1, 0}), vec({0, 1}), 0.3);
  const auto t3 = integrate(rot, vec({1, 0}), Selection::constant(Control()), 0.3, 1e-3);
  CHECK((e3.trajectory.end() - t3.end()).norm() <= 1e-9);
}

TEST_CASE("oracle examples") {
  OracleOptions o;
  o.horizon = 2.0;
  const auto ball = brute_force_min_time(unit_ball(2), vec({0, 0}), vec({0.6, 0.8}), o);
  CHECK(ball.minimal_time >= 0.95);
  CHECK(ball.minimal_time <= 1.05);
  REQUIRE(ball.witness);
  CHECK((ball.witness->end() - vec({0.6, 0.8})).norm() <= o.terminal_tol + 1e-12);

  const Multifunction drift(2, Singleton{field({"1", "0"})});
  CHECK(brute_force_min_time(drift, vec({0, 0}), vec({-1, 0}), o).minimal_time == kInf);

  const auto box = brute_force_min_time(box_system(), vec({0, 0}), vec({1, 0.5}), o);
  CHECK(box.minimal_time >= 0.95);
  CHECK(box.minimal_time <= 1.05);
}

TEST_CASE("oracle finds mixed vertex controls on the box") {
  OracleOptions o;
  o.box = Box{vec({-1, -1}), vec({1, 1})};
  // The optimum needs a constant mixture of two vertices, not a pure letter.
  const std::vector<std::pair<Vector, Vector>> pairs = {{vec({0.35, 0.33}), vec({-0.24, 0.46})},
                                                        {vec({-0.55, -0.53}), vec({0.58, 0.17})},
                                                        {vec({-0.15, 0.66}), vec({0.44, -0.22})}};
  for (const auto& [a, b] : pairs) {
    const double exact = (b - a).lpNorm<Eigen::Infinity>();
    const auto r = brute_force_min_time(box_system(), a, b, o);
    CHECK(r.minimal_time <= exact);
    CHECK(r.minimal_time >= exact - o.terminal_tol - 1e-9);
  }
}

TEST_CASE("oracle is monotone in horizon and stages") {
  const auto f = polytope({{"1", "0.3"}, {"-0.2", "1"}, {"-1", "-1"}});
  const Vector a = vec({0, 0});
  const Vector b = vec({0.4, 0.7});
  OracleOptions small;
  small.horizon = 1.5;
  small.stages = 1;
  OracleOptions big = small;
  big.horizon = 3.0;
  OracleOptions more = big;
  more.stages = 2;
  const auto r1 = brute_force_min_time(f, a, b, small);
  const auto r2 = brute_force_min_time(f, a, b, big, &r1);
  const auto r3 = brute_force_min_time(f, a, b, more, &r2);
  CHECK(r2.minimal_time <= r1.minimal_time);
  CHECK(r3.minimal_time <= r2.minimal_time);
}

TEST_CASE("oracle reversal duality and triangle inequality") {
  const auto f = box_system();
  OracleOptions o;
  bitime::Rng rng(4);
  for (int k = 0; k < 3; ++k) {
    const Vector a = rng.in_ball(vec({0, 0}), 0.6);
    const Vector b = rng.in_ball(vec({0, 0}), 0.6);
    const Vector c = rng.in_ball(vec({0, 0}), 0.6);
    const double ab = brute_force_min_time(f, a, b, o).minimal_time;
    const double ba_rev = brute_force_min_time(f.negated(), b, a, o).minimal_time;
    CHECK(std::abs(ab - ba_rev) <= 2 * o.terminal_tol);
    const double ac = brute_force_min_time(f, a, c, o).minimal_time;
    const double cb = brute_force_min_time(f, c, b, o).minimal_time;
    CHECK(ab <= ac + cb + 3 * o.terminal_tol);
  }
}

TEST_CASE("oracle witnesses satisfy the Gronwall bound") {
  const auto f = polytope({{"x2", "1"}, {"-x2", "1"}, {"1", "0"}});
  const auto r = brute_force_min_time(f, vec({0, 0}), vec({0.3, 0.6}), OracleOptions{});
  REQUIRE(r.witness);
  CHECK(r.witness->gronwall_violation() <= 0.0);
}

}  // TEST_SUITE
