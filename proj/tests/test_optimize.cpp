#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "lb/optimize.hpp"
#include "test_util.hpp"

using namespace lb;

namespace {
const ModelParams weak(1.0, -0.5, 0.0);
const ModelParams stiff(1.0, 1.0, 0.0);
}  // namespace

TEST_CASE("quasi-newton on a shifted quadratic") {
  const ObjectiveFn f = [](const std::vector<double>& x, std::vector<double>& g) {
    g.assign(1, 2.0 * (x[0] - 3.0));
    return (x[0] - 3.0) * (x[0] - 3.0);
  };
  const QuasiNewtonResult r = quasi_newton_minimize(f, {0.0}, {});
  CHECK(r.converged);
  CHECK(r.x[0] == doctest::Approx(3.0).epsilon(1e-8));
  for (std::size_t i = 1; i < r.accepted_values.size(); ++i)
    CHECK(r.accepted_values[i] <= r.accepted_values[i - 1]);
}

TEST_CASE("quasi-newton recovers the single-harmonic amplitude") {
  // g(A) = tau A^2/4 + A^4/64 with tau = -1/2 has its positive minimum at A = 2.
  const double tau = -0.5;
  const ObjectiveFn f = [tau](const std::vector<double>& x, std::vector<double>& g) {
    const double A = x[0];
    g.assign(1, tau * A / 2.0 + A * A * A / 16.0);
    return tau * A * A / 4.0 + A * A * A * A / 64.0;
  };
  const QuasiNewtonResult r = quasi_newton_minimize(f, {1.0}, {});
  CHECK(r.converged);
  CHECK(r.x[0] == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(r.value == doctest::Approx(-0.25).epsilon(1e-10));
}

TEST_CASE("quasi-newton at a critical point returns immediately") {
  const ObjectiveFn f = [](const std::vector<double>& x, std::vector<double>& g) {
    g.assign(1, 2.0 * (x[0] - 3.0));
    return (x[0] - 3.0) * (x[0] - 3.0);
  };
  const QuasiNewtonResult r = quasi_newton_minimize(f, {3.0}, {});
  CHECK(r.converged);
  CHECK(r.iterations <= 1);
}

TEST_CASE("quasi-newton reports line-search failure") {
  // Deliberately inconsistent gradient: every proposed direction increases f.
  const ObjectiveFn f = [](const std::vector<double>& x, std::vector<double>& g) {
    g.assign(1, -2.0 * x[0]);
    return x[0] * x[0];
  };
  const QuasiNewtonResult r = quasi_newton_minimize(f, {1.0}, {});
  CHECK_FALSE(r.converged);
  CHECK(r.x[0] == 1.0);  // best iterate is the start
}

TEST_CASE("start lists") {
  MinimizeOptions opts;
  opts.starts = 8;
  SUBCASE("weak-segregation amplitude seed") {
    const auto list = initial_profiles(weak, 0.0, opts);
    CHECK(list.size() == 8);
    CHECK(list[0].cos_coeffs[0] == 0.0);
    CHECK(list[1].cos_coeffs[0] == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(list[1].omega == 1.0);
    CHECK(list[2].omega == doctest::Approx(0.9));
    CHECK(list[3].omega == doctest::Approx(1.1));
    for (const auto& p : list) CHECK(p.mean == 0.0);
  }
  SUBCASE("amplitude floor in the stiff regime") {
    const auto list = initial_profiles(stiff, 0.25, opts);
    CHECK(list[1].cos_coeffs[0] == doctest::Approx(1.0));
    for (const auto& p : list) CHECK(p.mean == 0.25);
  }
  SUBCASE("same seed reproduces the list exactly") {
    const auto a = initial_profiles(weak, 0.0, opts);
    const auto b = initial_profiles(weak, 0.0, opts);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(a[i].omega == b[i].omega);
      for (int k = 0; k < a[i].harmonics(); ++k) {
        CHECK(a[i].cos_coeffs[k] == b[i].cos_coeffs[k]);
        CHECK(a[i].sin_coeffs[k] == b[i].sin_coeffs[k]);
      }
    }
  }
  SUBCASE("lagrangian start sits at the tilted constant floor") {
    const auto list = initial_profiles(ModelParams(1.0, -2.0, 0.0), std::nullopt, opts, 0.1);
    const ConstantFloor f = constant_state_floor(ModelParams(1.0, -2.0, 0.0), 0.1);
    CHECK(list[0].mean == f.argmin);
  }
}

TEST_CASE("constrained minimization, stiff regime") {
  MinimizeOptions opts;
  const MinimizeResult r = minimize_constrained(stiff, 0.0, opts);
  CHECK(r.converged);
  CHECK(r.is_trivial);
  CHECK(std::abs(r.energy) <= 1e-12);
  CHECK(r.profile.mean == 0.0);
}

TEST_CASE("constrained minimization, weak segregation") {
  MinimizeOptions opts;
  const MinimizeResult r = minimize_constrained(weak, 0.0, opts);
  CHECK(r.converged);
  CHECK_FALSE(r.is_trivial);
  CHECK(r.energy <= -0.25 + 1e-6);
  CHECK(std::abs(r.profile.omega - 1.0) <= 0.05);
  CHECK(std::abs(r.multiplier) <= 1e-4);
  CHECK(r.residual.rms <= 1e-5);

  SUBCASE("residual-gradient link") {
    const EnergyGradient g = gradient(weak, r.multiplier, r.profile, opts.grid, false);
    for (int k = 0; k < opts.harmonics; ++k) {
      CHECK(std::abs(g.d_cos[k]) <= 10.0 * std::max(r.residual.rms, opts.grad_tol));
      CHECK(std::abs(g.d_sin[k]) <= 10.0 * std::max(r.residual.rms, opts.grad_tol));
    }
  }
}

TEST_CASE("constrained minimization never loses to the constant competitor") {
  MinimizeOptions opts;
  for (double a : {-0.6, 0.1, 0.9}) {
    const MinimizeResult r = minimize_constrained(weak, a, opts);
    CHECK(r.energy <= potential_hstar(weak, a) + 1e-12);
    CHECK(r.profile.mean == a);  // pinned, never optimized
  }
}

TEST_CASE("constrained minimization is deterministic") {
  MinimizeOptions opts;
  opts.seed = 5;
  const MinimizeResult r1 = minimize_constrained(weak, 0.2, opts);
  const MinimizeResult r2 = minimize_constrained(weak, 0.2, opts);
  CHECK(r1.energy == r2.energy);
  CHECK(r1.iterations == r2.iterations);
  CHECK(r1.start_index == r2.start_index);
  CHECK(r1.profile.omega == r2.profile.omega);
  for (int k = 0; k < opts.harmonics; ++k) {
    CHECK(r1.profile.cos_coeffs[k] == r2.profile.cos_coeffs[k]);
    CHECK(r1.profile.sin_coeffs[k] == r2.profile.sin_coeffs[k]);
  }
}

TEST_CASE("unreachable tolerance yields an explicit non-convergence result") {
  MinimizeOptions opts;
  opts.grad_tol = 1e-300;
  opts.max_iters = 5;
  opts.starts = 2;
  // Away from mean zero, no iterate reaches an exactly-zero gradient.
  const MinimizeResult r = minimize_constrained(weak, 0.3, opts);
  CHECK_FALSE(r.converged);
  CHECK(std::isfinite(r.energy));
}

TEST_CASE("lagrangian minimization") {
  MinimizeOptions opts;
  SUBCASE("stiff regime stays at zero") {
    const MinimizeResult r = minimize_lagrangian(stiff, 0.0, opts);
    CHECK(r.converged);
    CHECK(r.is_trivial);
    CHECK(std::abs(r.energy) <= 1e-12);
  }
  SUBCASE("zero tilt matches the zero-mean constrained value") {
    const MinimizeResult r = minimize_lagrangian(weak, 0.0, opts);
    CHECK(r.converged);
    CHECK(r.energy <= -0.25 + 1e-6);
    CHECK(r.multiplier == 0.0);
  }
  SUBCASE("recovered multiplier matches the tilt") {
    const double lam = 0.1;
    const MinimizeResult r = minimize_lagrangian(weak, lam, opts);
    CHECK(r.converged);
    const double recovered = recover_multiplier(weak, r.profile, opts.grid);
    CHECK(std::abs(recovered - lam) <= 10.0 * opts.grad_tol * (1.0 + std::abs(lam)));
  }
  SUBCASE("tilted constant competitor bounds the value") {
    for (double lam : {-0.3, 0.0, 0.2}) {
      const MinimizeResult r = minimize_lagrangian(weak, lam, opts);
      double scan = 1e300;
      for (int i = 0; i <= 12000; ++i) {
        const double c = -6.0 + 12.0 * i / 12000;
        scan = std::min(scan, potential_hstar(weak, c) - lam * c);
      }
      CHECK(r.energy <= scan + 1e-9);
    }
  }
}

TEST_CASE("options validation") {
  MinimizeOptions opts;
  opts.grid = 10;  // below 4*16+2
  CHECK_THROWS_AS(opts.validate(), std::invalid_argument);
  opts = MinimizeOptions{};
  opts.omega_min = 2.0;
  opts.omega_max = 1.0;
  CHECK_THROWS_AS(opts.validate(), std::invalid_argument);
  opts = MinimizeOptions{};
  opts.starts = 0;
  CHECK_THROWS_AS(opts.validate(), std::invalid_argument);
}
