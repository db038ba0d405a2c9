#pragma once

#include <optional>
#include <string>

#include "lb/optimize.hpp"

namespace lb {

// Constrained value function reconstruction over a mean grid, together with
// the constant-state energy h* and its lower convex envelope.
struct LandscapeTable {
  std::vector<double> a_grid;
  std::vector<double> psi;
  std::vector<double> hstar;
  std::vector<double> envelope;
  std::vector<bool> nontrivial;
  std::vector<MinimizeResult> results;

  int size() const { return static_cast<int>(a_grid.size()); }
};

// Tilted (Lagrangian) value over a multiplier grid; an infimum of affine
// functions of lambda, hence concave.
struct DualTable {
  std::vector<double> lambda_grid;
  std::vector<double> psi_dual;
  std::vector<double> mean_at_opt;
  std::vector<MinimizeResult> results;
};

enum class Exposedness { exposed, not_exposed, inconclusive };

std::string to_string(Exposedness e);

// Existence-condition diagnostics at mean zero: the nontrivial periodic
// minimizer exists when the value at zero drops below the best constant
// state.
struct ConditionReport {
  double psi_at_zero = 0.0;
  double m_f = 0.0;
  double floor_argmin = 0.0;
  bool condition_holds = false;
  double margin = 1e-6;
  Exposedness exposedness_verdict = Exposedness::inconclusive;
  std::optional<double> minimizer_period;
};

struct ConvexityReport {
  std::vector<int> violations;
  double max_violation = 0.0;
};

struct DualityReport {
  std::vector<double> deviations;    // psi_dual[j] - min_i (psi[i] - lambda_j a_i)
  double max_abs_deviation = 0.0;
  double max_upper_violation = 0.0;  // positive part only: dual value exceeding the grid envelope
};

struct GapReport {
  std::vector<double> gaps;  // envelope - psi per grid point
  double max_gap = 0.0;
  double at_a = 0.0;
  int at_index = 0;
  // Max gap beyond 10x the solver tolerance scale: numerical evidence against
  // value-function / envelope equality.
  bool significant = false;
};

// Per grid point constrained minimization, warm-started from the previous
// point's solution.
LandscapeTable sweep_mean(const ModelParams& params, const std::vector<double>& a_grid,
                          const MinimizeOptions& opts);

// Per grid multiplier, Lagrangian minimization (free mean).
DualTable sweep_lambda(const ModelParams& params, const std::vector<double>& lambda_grid,
                       const MinimizeOptions& opts);

// Values of the greatest convex function below the piecewise-linear
// interpolant of (xs, ys), restricted to the grid. Lower-hull stack scan with
// cross-product orientation tests; endpoints unchanged.
std::vector<double> convex_envelope(const std::vector<double>& xs, const std::vector<double>& ys);

DualityReport check_duality(const LandscapeTable& landscape, const DualTable& dual);

// Midpoint-convexity scan; violations indicate per-point solver failures.
ConvexityReport check_convexity(const LandscapeTable& landscape);

// Re-solves flagged grid points with doubled starts, updates the table, and
// returns the post-repair report.
ConvexityReport resolve_convexity(const ModelParams& params, LandscapeTable& landscape,
                                  const MinimizeOptions& opts);

// Heuristic verdict from the discrete subdifferential at a grid point;
// `inconclusive` is an allowed outcome at grid resolution.
Exposedness exposedness(const LandscapeTable& landscape, int index);

// Requires a = 0 in the landscape grid.
ConditionReport existence_condition(const ModelParams& params, const LandscapeTable& landscape,
                                    const MinimizeOptions& opts);

GapReport conjecture_gap(const LandscapeTable& landscape);

}  // namespace lb
