#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "lb/profile.hpp"
#include "test_util.hpp"

using namespace lb;

namespace {
constexpr double pi = std::numbers::pi;

PeriodicProfile single_cos(double amplitude, double omega, double mean = 0.0) {
  return PeriodicProfile(mean, {amplitude}, {0.0}, omega);
}
}  // namespace

TEST_CASE("evaluate derivatives") {
  CHECK(evaluate(single_cos(1.0, 2.0), 0.0, 2) == doctest::Approx(-4.0).epsilon(1e-14));

  const PeriodicProfile c = PeriodicProfile::constant(3.25, 4);
  for (int order = 0; order <= 4; ++order)
    CHECK(evaluate(c, 1.234, order) == (order == 0 ? 3.25 : 0.0));

  const PeriodicProfile s(0.0, {0.0}, {1.0}, 1.0);
  CHECK(evaluate(s, 0.0, 1) == doctest::Approx(1.0).epsilon(1e-14));

  CHECK_THROWS_AS(evaluate(c, 0.0, 5), std::invalid_argument);
  CHECK_THROWS_AS(evaluate(c, 0.0, -1), std::invalid_argument);
}

TEST_CASE("phase point") {
  const PeriodicProfile s(0.5, {0.0}, {1.0}, 1.0);
  const PhasePoint v = phase_point(s, 0.0);
  CHECK(v.value == doctest::Approx(0.5));
  CHECK(v.slope == doctest::Approx(1.0));
}

TEST_CASE("construction validation") {
  CHECK_THROWS_AS(PeriodicProfile(0.0, {}, {}, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(PeriodicProfile(0.0, {1.0}, {1.0, 2.0}, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(PeriodicProfile(0.0, {1.0}, {0.0}, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(PeriodicProfile(0.0, {1.0}, {0.0}, -2.0), std::invalid_argument);
  CHECK_THROWS_AS(PeriodicProfile(std::nan(""), {1.0}, {0.0}, 1.0), std::invalid_argument);
}

TEST_CASE("sampling") {
  SUBCASE("constant profile") {
    const SampledProfile g = sample(PeriodicProfile::constant(2.5, 1), 8);
    for (int j = 0; j < 8; ++j) {
      CHECK(g.values[j] == 2.5);
      CHECK(g.d1[j] == 0.0);
      CHECK(g.d4[j] == 0.0);
    }
  }
  SUBCASE("grid point lands on a zero of cos") {
    const SampledProfile g = sample(single_cos(1.0, 1.0), 8);
    CHECK(std::abs(g.values[2]) <= 1e-15);  // t = pi/2
  }
  SUBCASE("refinement agrees bitwise on shared points") {
    std::mt19937_64 rng(23);
    const PeriodicProfile p = lbtest::random_profile(rng, {6, 1.0, false, 0.5, 2.0, 1.0});
    const SampledProfile g1 = sample(p, 64);
    const SampledProfile g2 = sample(p, 128);
    for (int j = 0; j < 64; ++j) {
      CHECK(g1.values[j] == g2.values[2 * j]);
      CHECK(g1.d3[j] == g2.d3[2 * j]);
    }
  }
  SUBCASE("quadrature-safety floor") {
    const PeriodicProfile p(0.0, std::vector<double>(4, 0.1), std::vector<double>(4, 0.0), 1.0);
    CHECK_THROWS_AS(sample(p, 17), std::invalid_argument);  // 4K+2 = 18
    CHECK_NOTHROW(sample(p, 18));
  }
}

TEST_CASE("mean exactness") {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 50; ++trial) {
    const PeriodicProfile p = lbtest::random_profile(rng, {8, 2.0, false, 0.3, 2.5, 2.0});
    const SampledProfile g = sample(p, 64);
    double acc = 0.0;
    for (double v : g.values) acc += v;
    CHECK(std::abs(acc / g.n_points - p.mean) <= 1e-13);
  }
}

TEST_CASE("derivative consistency with finite differences") {
  std::mt19937_64 rng(31);
  const PeriodicProfile p = lbtest::random_profile(rng, {4, 1.0, false, 0.8, 1.2, 1.0});
  auto fd_error = [&](int n) {
    const SampledProfile g = sample(p, n);
    const double h = p.period() / n;
    double worst = 0.0;
    for (int j = 0; j < n; ++j) {
      const double fd = (g.values[(j + 1) % n] - g.values[(j + n - 1) % n]) / (2.0 * h);
      worst = std::max(worst, std::abs(fd - g.d1[j]));
    }
    return worst;
  };
  const double coarse = fd_error(256);
  const double fine = fd_error(512);
  CHECK(coarse < 1e-2);
  CHECK(fine < coarse * 0.3 + 1e-12);  // second-order decay
}

TEST_CASE("periodicity of evaluate") {
  std::mt19937_64 rng(37);
  for (int trial = 0; trial < 20; ++trial) {
    const PeriodicProfile p = lbtest::random_profile(rng, {5, 1.0, false, 0.5, 2.0, 1.0});
    const double t = lbtest::uniform_in(rng, -5.0, 5.0);
    const int order = static_cast<int>(rng() % 5);
    CHECK(evaluate(p, t, order) ==
          doctest::Approx(evaluate(p, t + p.period(), order)).epsilon(1e-12));
  }
}

TEST_CASE("phase alignment") {
  SUBCASE("pure cosine flips sign") {
    const PeriodicProfile aligned = phase_align(single_cos(2.0, 1.0), 64);
    CHECK(aligned.cos_coeffs[0] == doctest::Approx(-2.0).epsilon(1e-12));
    CHECK(std::abs(aligned.sin_coeffs[0]) <= 1e-10);
    CHECK(aligned.omega == 1.0);
    CHECK(aligned.mean == 0.0);
  }
  SUBCASE("constant unchanged") {
    const PeriodicProfile c = PeriodicProfile::constant(1.5, 3);
    const PeriodicProfile aligned = phase_align(c, 32);
    CHECK(aligned.mean == c.mean);
    for (int k = 0; k < 3; ++k) {
      CHECK(aligned.cos_coeffs[k] == 0.0);
      CHECK(aligned.sin_coeffs[k] == 0.0);
    }
  }
  SUBCASE("minimum sits at zero on a dense grid") {
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 25; ++trial) {
      const PeriodicProfile p = lbtest::random_profile(rng, {6, 1.0, true, 0.5, 2.0, 1.0});
      const PeriodicProfile aligned = phase_align(p, 2048);
      const double at_zero = evaluate(aligned, 0.0, 0);
      for (int j = 0; j < 512; ++j) {
        const double t = aligned.period() * j / 512;
        CHECK(at_zero <= evaluate(aligned, t, 0) + 1e-9);
      }
    }
  }
}

TEST_CASE("sup norms") {
  SUBCASE("constant") {
    const SupNorms s = sup_norms(PeriodicProfile::constant(-3.0, 2), 32);
    CHECK(s.value == 3.0);
    CHECK(s.slope == 0.0);
  }
  SUBCASE("single cosine") {
    const SupNorms s = sup_norms(single_cos(2.0, 1.0), 4096);
    CHECK(s.value == doctest::Approx(2.0).epsilon(1e-6));
    CHECK(s.slope == doctest::Approx(2.0).epsilon(1e-6));
  }
  SUBCASE("cos plus sin has sqrt(2) amplitude") {
    const PeriodicProfile p(0.0, {1.0}, {1.0}, 1.0);
    const SupNorms s = sup_norms(p, 4096);
    CHECK(s.value == doctest::Approx(std::sqrt(2.0)).epsilon(1e-6));
    CHECK(s.slope == doctest::Approx(std::sqrt(2.0)).epsilon(1e-6));
  }
}

TEST_CASE("period accessor") {
  CHECK(single_cos(1.0, 2.0).period() == doctest::Approx(pi).epsilon(1e-15));
}
