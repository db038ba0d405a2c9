#pragma once

#include <cstdint>
#include <string>

#include "lb/landscape.hpp"

namespace lb {

enum class CheckStatus { pass, fail, not_applicable };

struct CheckResult {
  std::string name;
  CheckStatus status = CheckStatus::pass;
  double measured = 0.0;
  double tolerance = 0.0;
  // Which structural property of the model the check ties back to.
  std::string anchor;

  bool passed() const { return status != CheckStatus::fail; }
};

struct DiagnosticsReport {
  std::vector<CheckResult> checks;
  ConditionReport condition;

  bool overall_pass() const {
    for (const CheckResult& c : checks)
      if (!c.passed()) return false;
    return true;
  }
};

// A nontrivial periodic minimizer, shifted so its minimum sits at t = 0,
// rises to a single interior maximum and falls back: exactly 2 derivative
// sign changes per period. Sub-threshold derivative values are ignored to
// keep truncation ripple from flipping signs.
CheckResult check_monotone_structure(const PeriodicProfile& profile, int n_points);

// Uniform W^{1,inf} bound over a family of minimizers.
CheckResult check_w1inf_bound(const std::vector<MinimizeResult>& results, double bound);

// Analytic gradient vs central finite differences (step 1e-5) on seeded
// random profiles. `perturbation` injects a deliberate offset on the first
// component of the first trial; test-harness use only.
CheckResult check_gradient_fd(const ModelParams& params, std::uint64_t seed, int trials,
                              double perturbation = 0.0);

// Full battery: gradient check, quadrature refinement, two-form energy
// agreement, a small mean sweep with convexity repair, duality spot checks,
// monotone structure at mean zero, the W^{1,inf} bound, and the
// existence-condition report.
DiagnosticsReport run_suite(const ModelParams& params, const MinimizeOptions& opts);

std::string summary_text(const DiagnosticsReport& report);

}  // namespace lb
