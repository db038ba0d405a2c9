#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "lb/diagnostics.hpp"
#include "test_util.hpp"

using namespace lb;

namespace {
const ModelParams weak(1.0, -0.5, 0.0);
const ModelParams stiff(1.0, 1.0, 0.0);

MinimizeOptions quick_opts() {
  MinimizeOptions opts;
  opts.harmonics = 8;
  opts.grid = 64;
  opts.starts = 6;
  return opts;
}
}  // namespace

TEST_CASE("monotone structure of a single harmonic") {
  const PeriodicProfile p(0.0, {2.0}, {0.0}, 1.0);
  const CheckResult res = check_monotone_structure(p, 128);
  CHECK(res.status == CheckStatus::pass);
  CHECK(res.measured == 2.0);
}

TEST_CASE("monotone structure rejects a two-bump profile") {
  // w' = -sin t (1 + 2 cos t) has four sign changes per period.
  const PeriodicProfile p(0.0, {1.0, 0.5}, {0.0, 0.0}, 1.0);
  const CheckResult res = check_monotone_structure(p, 256);
  CHECK(res.status == CheckStatus::fail);
  CHECK(res.measured == 4.0);
}

TEST_CASE("monotone structure skips constants") {
  const CheckResult res = check_monotone_structure(PeriodicProfile::constant(0.4, 4), 64);
  CHECK(res.status == CheckStatus::not_applicable);
}

TEST_CASE("w1inf bound check") {
  MinimizeOptions opts = quick_opts();
  std::vector<MinimizeResult> results;
  results.push_back(minimize_constrained(stiff, 0.0, opts));
  SUBCASE("trivial results pass") {
    const CheckResult res = check_w1inf_bound(results, 10.0);
    CHECK(res.status == CheckStatus::pass);
    CHECK(res.measured <= 1e-6);
  }
  SUBCASE("an injected huge amplitude fails") {
    MinimizeResult synthetic = results[0];
    synthetic.profile.cos_coeffs[0] = 1e3;
    results.push_back(synthetic);
    const CheckResult res = check_w1inf_bound(results, 10.0);
    CHECK(res.status == CheckStatus::fail);
    CHECK(res.measured >= 1e3);
  }
}

TEST_CASE("gradient finite-difference check") {
  const ModelParams p(1.0, -0.5, 0.3);
  SUBCASE("clean pass") {
    const CheckResult res = check_gradient_fd(p, 0, 20);
    CHECK(res.status == CheckStatus::pass);
    CHECK(res.measured <= 1e-6);
  }
  SUBCASE("an injected gradient offset is caught") {
    const CheckResult res = check_gradient_fd(p, 0, 20, 1e-3);
    CHECK(res.status == CheckStatus::fail);
  }
}

TEST_CASE("full suite, weak segregation") {
  const DiagnosticsReport report = run_suite(weak, quick_opts());
  for (const CheckResult& c : report.checks) {
    INFO(c.name, " measured=", c.measured, " tol=", c.tolerance);
    CHECK(c.status != CheckStatus::fail);
  }
  CHECK(report.overall_pass());
  CHECK(report.condition.condition_holds);

  SUBCASE("deterministic reruns") {
    const DiagnosticsReport again = run_suite(weak, quick_opts());
    REQUIRE(again.checks.size() == report.checks.size());
    for (std::size_t i = 0; i < report.checks.size(); ++i) {
      CHECK(again.checks[i].name == report.checks[i].name);
      CHECK(again.checks[i].measured == report.checks[i].measured);
      CHECK(again.checks[i].status == report.checks[i].status);
    }
  }
}

TEST_CASE("full suite, stiff regime") {
  const DiagnosticsReport report = run_suite(stiff, quick_opts());
  CHECK(report.overall_pass());
  CHECK_FALSE(report.condition.condition_holds);
  bool monotone_na = false;
  for (const CheckResult& c : report.checks)
    if (c.name == "monotone-structure") monotone_na = c.status == CheckStatus::not_applicable;
  CHECK(monotone_na);
}

TEST_CASE("every check carries its anchor") {
  const DiagnosticsReport report = run_suite(stiff, quick_opts());
  for (const CheckResult& c : report.checks) {
    CHECK_FALSE(c.name.empty());
    CHECK_FALSE(c.anchor.empty());
  }
  const std::string text = summary_text(report);
  CHECK(text.find("ALL CHECKS PASSED") != std::string::npos);
}

TEST_CASE("invalid parameters never reach the suite") {
  CHECK_THROWS_AS(ModelParams(-1.0, 1.0, 0.0), std::invalid_argument);
}
