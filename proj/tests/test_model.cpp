#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "lb/model.hpp"
#include "test_util.hpp"

using namespace lb;

TEST_CASE("integrand matches hand substitution") {
  const ModelParams p(1.0, 0.0, 0.0);
  CHECK(integrand(p, 1.0, 0.0, 0.0) == doctest::Approx(13.0 / 24.0).epsilon(1e-14));
  CHECK(integrand(p, 0.0, 1.0, 0.0) == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(integrand(p, 0.0, 0.0, 0.0) == 0.0);
  const ModelParams q(2.0, 0.7, -0.3);
  CHECK(integrand(q, 0.0, 0.0, 0.0) == 0.0);
}

TEST_CASE("primal density values") {
  CHECK(integrand_primal(ModelParams(1.0, 0.0, 0.0), 1.0, -1.0) ==
        doctest::Approx(1.0 / 24.0).epsilon(1e-14));
  CHECK(integrand_primal(ModelParams(1.0, -0.5, 0.0), 2.0, 0.0) ==
        doctest::Approx(5.0 / 3.0).epsilon(1e-14));
  CHECK(integrand_primal(ModelParams(1.3, 0.4, 0.2), 0.0, 0.0) == 0.0);
}

TEST_CASE("lagrangian tilt") {
  const ModelParams p(1.0, 0.0, 0.0);
  CHECK(lagrangian_integrand(p, 1.0, 1.0, 0.0, 0.0) ==
        doctest::Approx(-11.0 / 24.0).epsilon(1e-14));
  CHECK(lagrangian_integrand(p, 0.7, 0.0, 0.0, 0.0) == 0.0);

  std::mt19937_64 rng(7);
  for (int i = 0; i < 100; ++i) {
    const ModelParams q(lbtest::uniform_in(rng, 0.2, 3.0), lbtest::uniform_in(rng, -3.0, 3.0),
                        lbtest::uniform_in(rng, -2.0, 2.0));
    const double lam = lbtest::uniform_in(rng, -2.0, 2.0);
    const double x = lbtest::uniform_in(rng, -3.0, 3.0);
    const double y = lbtest::uniform_in(rng, -3.0, 3.0);
    const double z = lbtest::uniform_in(rng, -3.0, 3.0);
    CHECK(integrand(q, x, y, z) - lagrangian_integrand(q, lam, x, y, z) ==
          doctest::Approx(lam * x).epsilon(1e-12));
    if (lam == 0.0)
      CHECK(lagrangian_integrand(q, 0.0, x, y, z) == integrand(q, x, y, z));
  }
}

TEST_CASE("potentials") {
  CHECK(potential_h(ModelParams(1.0, -0.5, 0.0), 1.0) ==
        doctest::Approx(-5.0 / 24.0).epsilon(1e-14));
  CHECK(potential_h(ModelParams(1.0, 0.3, 0.9), 0.0) == 0.0);
  CHECK(potential_h(ModelParams(1.0, -2.0, 0.0), std::sqrt(6.0)) ==
        doctest::Approx(-4.5).epsilon(1e-13));

  CHECK(potential_hstar(ModelParams(1.0, -0.5, 0.0), 1.0) ==
        doctest::Approx(7.0 / 24.0).epsilon(1e-14));
  CHECK(potential_hstar(ModelParams(2.0, 0.1, -0.4), 0.0) == 0.0);
  CHECK(potential_hstar(ModelParams(1.0, -2.0, 0.0), std::sqrt(6.0)) ==
        doctest::Approx(-1.5).epsilon(1e-13));
}

TEST_CASE("hstar equals the density restricted to constants") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 200; ++i) {
    const ModelParams p(lbtest::uniform_in(rng, 0.2, 3.0), lbtest::uniform_in(rng, -3.0, 3.0),
                        lbtest::uniform_in(rng, -2.0, 2.0));
    const double x = lbtest::uniform_in(rng, -4.0, 4.0);
    const double a = potential_hstar(p, x);
    const double b = integrand(p, x, 0.0, 0.0);
    CHECK(std::abs(a - b) <= 1e-13 * (1.0 + std::abs(a)));
  }
}

TEST_CASE("density is even in slope and curvature") {
  std::mt19937_64 rng(13);
  for (int i = 0; i < 100; ++i) {
    const ModelParams p(lbtest::uniform_in(rng, 0.2, 3.0), lbtest::uniform_in(rng, -3.0, 3.0),
                        lbtest::uniform_in(rng, -2.0, 2.0));
    const double x = lbtest::uniform_in(rng, -3.0, 3.0);
    const double y = lbtest::uniform_in(rng, -3.0, 3.0);
    const double z = lbtest::uniform_in(rng, -3.0, 3.0);
    CHECK(integrand(p, x, y, z) == integrand(p, x, -y, z));
    CHECK(integrand(p, x, y, z) == integrand(p, x, y, -z));
  }
}

TEST_CASE("constant state floor") {
  SUBCASE("nonnegative quartic at tau = -1/2") {
    const ConstantFloor f = constant_state_floor(ModelParams(1.0, -0.5, 0.0));
    CHECK(f.value == doctest::Approx(0.0).epsilon(1e-13));
    CHECK(std::abs(f.argmin) <= 1e-6);
  }
  SUBCASE("two symmetric wells at tau = -2") {
    const ConstantFloor f = constant_state_floor(ModelParams(1.0, -2.0, 0.0));
    CHECK(f.value == doctest::Approx(-1.5).epsilon(1e-13));
    CHECK(std::abs(std::abs(f.argmin) - std::sqrt(6.0)) <= 1e-9);
  }
  SUBCASE("cubic tilt without extra stationary points") {
    const ConstantFloor f = constant_state_floor(ModelParams(1.0, 0.0, 1.0));
    CHECK(f.value == doctest::Approx(0.0).epsilon(1e-13));
    CHECK(std::abs(f.argmin) <= 1e-6);
  }
  SUBCASE("floor bounds the density on a dense grid") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 20; ++trial) {
      const ModelParams p(lbtest::uniform_in(rng, 0.3, 2.0), lbtest::uniform_in(rng, -3.0, 2.0),
                          lbtest::uniform_in(rng, -2.0, 2.0));
      const ConstantFloor f = constant_state_floor(p);
      for (int i = 0; i <= 2000; ++i) {
        const double t = -10.0 + 20.0 * i / 2000;
        CHECK(f.value <= integrand(p, t, 0.0, 0.0) + 1e-12);
      }
    }
  }
  SUBCASE("tilted floor matches a dense scan") {
    std::mt19937_64 rng(19);
    for (int trial = 0; trial < 10; ++trial) {
      const ModelParams p(1.0, lbtest::uniform_in(rng, -2.5, 1.5),
                          lbtest::uniform_in(rng, -1.0, 1.0));
      const double lam = lbtest::uniform_in(rng, -1.0, 1.0);
      const ConstantFloor f = constant_state_floor(p, lam);
      double scan = 1e300;
      for (int i = 0; i <= 40000; ++i) {
        const double t = -12.0 + 24.0 * i / 40000;
        scan = std::min(scan, integrand(p, t, 0.0, 0.0) - lam * t);
      }
      CHECK(f.value <= scan + 1e-9);
      CHECK(f.value >= scan - 1e-4);
    }
  }
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(ModelParams(0.0, 0.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(ModelParams(-1.0, 0.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(ModelParams(1.0, std::nan(""), 0.0), std::invalid_argument);
  CHECK_THROWS_AS(ModelParams(1.0, 0.0, std::numeric_limits<double>::infinity()),
                  std::invalid_argument);
}
