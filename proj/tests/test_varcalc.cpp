#include "helpers.hpp"

#include "bitime/sampling.hpp"
#include "bitime/value_source.hpp"
#include "bitime/varcalc.hpp"

#include <doctest.h>

#include <cmath>

using namespace testing;
using namespace bitime::varcalc;
using bitime::minitime::BenchmarkSystem;
using bitime::minitime::ClosedFormSource;
using bitime::minitime::sample_sublevel;

namespace {

std::vector<Vector> sublevel(const ClosedFormSource& src, const Vector& z, double r, double delta, std::uint64_t seed) {
  return sample_sublevel(src, r, z, delta, 2000, seed).points;
}

}  // namespace

TEST_SUITE("varcalc") {

TEST_CASE("normal test on the eikonal sub-level set") {
  const ClosedFormSource eik(BenchmarkSystem::eikonal());
  const Vector z = vec({0, 0, 1, 0});
  const auto pts = sublevel(eik, z, 1.0, 0.1, 1);
  const Vector n = vec({-1, 0, 1, 0}) / std::sqrt(2.0);
  const auto good = frechet_normal_test(pts, z, n, 0.05, 0.1);
  CHECK(good.pass);
  CHECK(good.sample_count == pts.size());
  CHECK(good.required_eps <= 0.05);

  const auto bad = frechet_normal_test(pts, z, -n, 0.05, 0.1);
  CHECK_FALSE(bad.pass);
  CHECK(bad.worst_violation > 0.0);
  CHECK(bad.required_eps > 0.05);

  const auto tangent = frechet_normal_test(pts, z, vec({0, 1, 0, 0}), 0.05, 0.1);
  CHECK_FALSE(tangent.pass);
}

TEST_CASE("normal test is homogeneous and monotone in eps") {
  const ClosedFormSource box(BenchmarkSystem::box());
  const Vector z = vec({0, 0, 1, 0.2});
  const auto pts = sublevel(box, z, 1.0, 0.1, 2);
  bitime::Rng rng(3);
  for (int k = 0; k < 20; ++k) {
    Vector c = rng.in_ball(Vector::Zero(4), 1.0);
    const double eps = 0.05 + 0.5 * rng.uniform();
    const auto v = frechet_normal_test(pts, z, c, eps, 0.1);
    const auto half = frechet_normal_test(pts, z, 0.5 * c, 0.5 * eps, 0.1);
    CHECK(v.pass == half.pass);
    CHECK(half.worst_violation == doctest::Approx(0.5 * v.worst_violation).epsilon(1e-9));
    if (v.pass) CHECK(frechet_normal_test(pts, z, c, 2 * eps, 0.1).pass);
  }
}

TEST_CASE("normal test input checks") {
  std::vector<Vector> few(10, vec({0, 0}));
  CHECK_THROWS_AS(frechet_normal_test(few, vec({0, 0}), vec({1, 0}), 0.1, 0.1), bitime::InsufficientSamples);
}

TEST_CASE("subgradient test") {
  const ClosedFormSource eik(BenchmarkSystem::eikonal());
  const Vector z = vec({0, 0, 1, 0});
  const auto s = draw_value_samples(eik, z, 0.1, 500, 4);
  CHECK(s.points.size() == 500);
  CHECK(s.base_value == doctest::Approx(1.0));
  const Vector grad = vec({-1, 0, 1, 0});
  CHECK(frechet_subgrad_test(s, grad, 0.05).pass);
  CHECK_FALSE(frechet_subgrad_test(s, 2 * grad, 0.05).pass);
  CHECK_FALSE(frechet_subgrad_test(s, -grad, 0.05).pass);
  // Doubling the gradient needs eps of about |grad|.
  const auto doubled = frechet_subgrad_test(s, 2 * grad, 0.05);
  CHECK(doubled.required_eps == doctest::Approx(std::sqrt(2.0)).epsilon(0.1));

  CHECK_THROWS_AS(draw_value_samples(ClosedFormSource(BenchmarkSystem::drift_along(vec({1, 0}))),
                                     vec({0, 0, -1, 0}), 0.1, 100, 1),
                  bitime::InvalidArgument);
}

TEST_CASE("subgradient test on a kink") {
  const ClosedFormSource box(BenchmarkSystem::box());
  const Vector z = vec({0, 0, 1, 1});
  // Any convex combination of the two active gradients is a subgradient.
  for (double w : {0.0, 0.3, 0.5, 1.0}) {
    const Vector c = w * vec({-1, 0, 1, 0}) + (1 - w) * vec({0, -1, 0, 1});
    CHECK(frechet_subgrad_test(box, z, c, 0.05, 0.1, 500, 5).pass);
  }
  CHECK_FALSE(frechet_subgrad_test(box, z, vec({-1, -1, 1, 1}), 0.05, 0.1, 500, 5).pass);
}

TEST_CASE("singular test") {
  const ClosedFormSource drift(BenchmarkSystem::drift_along(vec({1, 0})));
  const Vector z = vec({0, 0, 0.5, 0});
  const auto epi = draw_epigraph_samples(drift, z, 0.1, 500, 6);
  CHECK(epi.points.size() >= 30);
  // Directions orthogonal to the drift line are singular.
  CHECK(singular_subgrad_test(epi, vec({0, 1, 0, -1}), 0.05).pass);
  CHECK(singular_subgrad_test(epi, vec({0, -1, 0, 1}), 0.05).pass);
  CHECK_FALSE(singular_subgrad_test(epi, vec({1, 0, -1, 0}), 0.05).pass);

  const ClosedFormSource eik(BenchmarkSystem::eikonal());
  CHECK_FALSE(singular_subgrad_test(eik, z, vec({-1, 0, 1, 0}), 0.05, 0.1, 500, 7).pass);
  CHECK(singular_subgrad_test(eik, z, Vector::Zero(4), 0.05, 0.1, 500, 7).pass);
}

TEST_CASE("normal cone dimension") {
  ConeOptions o;
  o.direction_count = 1024;

  const ClosedFormSource eik(BenchmarkSystem::eikonal());
  const Vector ze = vec({0, 0, 1, 0});
  const auto ce = estimate_normal_cone(sublevel(eik, ze, 1.0, 0.1, 8), ze, o);
  CHECK(ce.dimension == 1);
  REQUIRE_FALSE(ce.generators.empty());
  const Vector n = vec({-1, 0, 1, 0}) / std::sqrt(2.0);
  for (const auto& g : ce.generators) CHECK(g.dot(n) >= 0.9);

  const ClosedFormSource box(BenchmarkSystem::box());
  const Vector zb = vec({0, 0, 1, 1});
  const auto cb = estimate_normal_cone(sublevel(box, zb, 1.0, 0.1, 9), zb, o);
  CHECK(cb.dimension == 2);

  const auto ci = estimate_normal_cone(sublevel(eik, ze, 2.0, 0.1, 10), ze, o);
  CHECK(ci.dimension == 0);
  CHECK(ci.generators.empty());
}

TEST_CASE("cone_dimension") {
  CHECK(cone_dimension({}, 0.25) == 0);
  CHECK(cone_dimension({vec({1, 0, 0})}, 0.25) == 1);
  CHECK(cone_dimension({vec({1, 0, 0}), vec({0.99, 0.01, 0})}, 0.25) == 1);
  CHECK(cone_dimension({vec({1, 0, 0}), vec({0, 1, 0})}, 0.25) == 2);
  CHECK(cone_dimension({vec({1, 0, 0}), vec({0, 1, 0}), vec({0, 0, 1})}, 0.25) == 3);
  CHECK(cone_dimension({vec({1, 0, 0}), vec({0, 0.1, 0})}, 0.25) == 1);
}

TEST_CASE("principal generators drop off-span blur") {
  ConeEstimate c;
  c.generators = {vec({1, 0.1, 0}).normalized(), vec({1, -0.1, 0}).normalized()};
  c.dimension = 1;
  for (const auto& g : principal_generators(c)) CHECK((g - vec({1, 0, 0})).norm() <= 1e-12);
  c.generators = {vec({1, 0, 0}), vec({0, 1, 0})};
  c.dimension = 2;
  const auto p = principal_generators(c);
  REQUIRE(p.size() == 2);
  CHECK((p[0] - vec({1, 0, 0})).norm() <= 1e-12);
  CHECK((p[1] - vec({0, 1, 0})).norm() <= 1e-12);
  c.dimension = 0;
  CHECK(principal_generators(c).empty());
}

TEST_CASE("finite-difference gradient") {
  const ClosedFormSource eik(BenchmarkSystem::eikonal());
  const auto g = gradient_fd(eik, vec({0, 0, 3, 4}), 1e-5);
  CHECK(g.smooth());
  CHECK((g.grad - vec({-0.6, -0.8, 0.6, 0.8})).norm() <= 1e-6);

  const ClosedFormSource half(BenchmarkSystem::halfball(2, 0));
  const auto h = gradient_fd(half, vec({0, 0, 0, 0.8}), 1e-5);
  CHECK(h.defined());
  CHECK_FALSE(h.smooth());
  CHECK(h.one_sided[0]);
  CHECK(h.one_sided[2]);

  const ClosedFormSource drift(BenchmarkSystem::drift_along(vec({1, 0})));
  const auto d = gradient_fd(drift, vec({0, 0, 0.5, 0}), 1e-5);
  CHECK_FALSE(d.defined());
  CHECK(d.grad[0] == doctest::Approx(-1));
  CHECK(d.grad[2] == doctest::Approx(1));

  CHECK_THROWS_AS(gradient_fd(drift, vec({0, 0, -0.5, 0}), 1e-5), bitime::InvalidArgument);
  CHECK_THROWS_AS(gradient_fd(eik, vec({0, 0, 1, 0}), 0.0), bitime::InvalidArgument);
}

}  // TEST_SUITE
