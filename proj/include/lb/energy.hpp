#pragma once

#include <optional>

#include "lb/model.hpp"
#include "lb/profile.hpp"

namespace lb {

// Partial derivatives of the average energy (optionally tilted by -lambda w)
// with respect to the profile parameterization. The frequency derivative is
// taken with respect to log omega.
struct EnergyGradient {
  double d_mean = 0.0;
  std::vector<double> d_cos;
  std::vector<double> d_sin;
  double d_log_omega = 0.0;

  double sup_norm(bool include_mean) const;
};

struct ResidualReport {
  double rms = 0.0;
  double max_abs = 0.0;
  double lambda_used = 0.0;
};

// Period average of f(w, w', w''). Uniform (trapezoidal) quadrature over one
// period, exact for n_points >= 4K+2 since the integrand is band-limited.
double average_energy(const ModelParams& p, const PeriodicProfile& prof, int n_points);
double average_energy(const ModelParams& p, const PeriodicProfile& prof, const TrigTable& table);

// Same average computed from the pre-integration-by-parts density; must agree
// with average_energy on full periods.
double average_energy_primal(const ModelParams& p, const PeriodicProfile& prof, int n_points);
double average_energy_primal(const ModelParams& p, const PeriodicProfile& prof, const TrigTable& table);

// average_energy - lambda * mean.
double average_energy_lagrangian(const ModelParams& p, double lambda,
                                 const PeriodicProfile& prof, int n_points);
double average_energy_lagrangian(const ModelParams& p, double lambda,
                                 const PeriodicProfile& prof, const TrigTable& table);

// Exact gradient of the discrete quadrature sum (chain rule through the
// sampled w, w', w''; the log-omega component includes the explicit frequency
// dependence of the derivative factors). d_mean is filled only when
// mean_free; lambda enters d_mean alone.
EnergyGradient gradient(const ModelParams& p, std::optional<double> lambda,
                        const PeriodicProfile& prof, int n_points, bool mean_free);
EnergyGradient gradient(const ModelParams& p, std::optional<double> lambda,
                        const PeriodicProfile& prof, const TrigTable& table, bool mean_free);

// Pointwise Euler-Lagrange residual xi^2 (w'''' + 2 w'' + w) + h'(w) - lambda
// over the sample grid.
ResidualReport el_residual(const ModelParams& p, double lambda,
                           const PeriodicProfile& prof, int n_points);

// Period average of the lambda-free Euler-Lagrange expression; equals the
// constraint multiplier at an exact constrained critical point.
double recover_multiplier(const ModelParams& p, const PeriodicProfile& prof, int n_points);

}  // namespace lb
