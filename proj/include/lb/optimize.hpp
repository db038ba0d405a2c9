#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "lb/energy.hpp"

namespace lb {

struct MinimizeOptions {
  int harmonics = 16;
  int grid = 128;
  double grad_tol = 1e-8;
  int max_iters = 500;
  int starts = 8;
  std::uint64_t seed = 0;
  double omega_min = 0.2;
  double omega_max = 3.0;

  void validate() const;
};

// A converged (or best-effort) candidate for the constrained or Lagrangian
// minimization, with recovered multiplier and Euler-Lagrange residual.
struct MinimizeResult {
  PeriodicProfile profile;
  double energy = 0.0;
  double multiplier = 0.0;
  ResidualReport residual;
  bool converged = false;
  int iterations = 0;
  int start_index = 0;
  bool is_trivial = true;
};

struct QuasiNewtonOptions {
  double grad_tol = 1e-8;
  int max_iters = 500;
  int memory = 10;
  double backtrack = 0.5;
  double sufficient_decrease = 1e-4;
  // Diagonal initial inverse Hessian; empty selects the scalar gamma scaling.
  // The energy drivers pass the known per-harmonic curvature scales here.
  std::vector<double> h0_diag;
};

struct QuasiNewtonResult {
  std::vector<double> x;
  double value = 0.0;
  bool converged = false;
  int iterations = 0;
  // Objective at the start plus each accepted iterate; non-increasing by the
  // line-search decrease condition.
  std::vector<double> accepted_values;
};

// Objective callback: returns f(x) and fills grad (resized by the callee).
using ObjectiveFn = std::function<double(const std::vector<double>&, std::vector<double>&)>;

// Limited-memory BFGS with backtracking Armijo line search. Terminates when
// the gradient sup-norm drops to grad_tol or max_iters is hit; a failed line
// search returns the best iterate with converged = false.
QuasiNewtonResult quasi_newton_minimize(const ObjectiveFn& objective,
                                        std::vector<double> start,
                                        const QuasiNewtonOptions& opts);

// Deterministic multi-start list: constant, single weak-segregation harmonic
// at omega = 1 / 0.9 / 1.1, then seeded coefficient perturbations with 1/k^2
// decay. `a` fixes the mean; when absent (Lagrangian runs pass lambda) the
// best tilted constant is used.
std::vector<PeriodicProfile> initial_profiles(const ModelParams& params,
                                              std::optional<double> a,
                                              const MinimizeOptions& opts,
                                              double lambda = 0.0);

// Best-of-multistart local minimum of the average energy over
// (cos_coeffs, sin_coeffs, log omega) with the mean pinned to `a` exactly.
MinimizeResult minimize_constrained(const ModelParams& params, double a,
                                    const MinimizeOptions& opts,
                                    const std::vector<PeriodicProfile>& extra_starts = {});

// Same over (mean, coeffs, log omega) for the tilted objective J - lambda * mean.
MinimizeResult minimize_lagrangian(const ModelParams& params, double lambda,
                                   const MinimizeOptions& opts,
                                   const std::vector<PeriodicProfile>& extra_starts = {});

}  // namespace lb
