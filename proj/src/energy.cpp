#include "lb/energy.hpp"

#include <algorithm>
#include <cmath>

namespace lb {

double EnergyGradient::sup_norm(bool include_mean) const {
  double m = std::abs(d_log_omega);
  if (include_mean) m = std::max(m, std::abs(d_mean));
  for (double v : d_cos) m = std::max(m, std::abs(v));
  for (double v : d_sin) m = std::max(m, std::abs(v));
  return m;
}

namespace {

// Compensated accumulator; keeps the quadrature averages accurate when the
// quartic density gets large.
struct KahanSum {
  double sum = 0.0;
  double carry = 0.0;

  void add(double x) {
    const double y = x - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
};

}  // namespace

double average_energy(const ModelParams& p, const PeriodicProfile& prof, const TrigTable& table) {
  const SampledProfile g = sample(prof, table);
  KahanSum acc;
  for (int j = 0; j < g.n_points; ++j)
    acc.add(integrand(p, g.values[j], g.d1[j], g.d2[j]));
  return acc.sum / g.n_points;
}

double average_energy(const ModelParams& p, const PeriodicProfile& prof, int n_points) {
  return average_energy(p, prof, TrigTable(prof.harmonics(), n_points));
}

double average_energy_primal(const ModelParams& p, const PeriodicProfile& prof,
                             const TrigTable& table) {
  const SampledProfile g = sample(prof, table);
  KahanSum acc;
  for (int j = 0; j < g.n_points; ++j)
    acc.add(integrand_primal(p, g.values[j], g.d2[j]));
  return acc.sum / g.n_points;
}

double average_energy_primal(const ModelParams& p, const PeriodicProfile& prof, int n_points) {
  return average_energy_primal(p, prof, TrigTable(prof.harmonics(), n_points));
}

double average_energy_lagrangian(const ModelParams& p, double lambda,
                                 const PeriodicProfile& prof, const TrigTable& table) {
  return average_energy(p, prof, table) - lambda * prof.mean;
}

double average_energy_lagrangian(const ModelParams& p, double lambda,
                                 const PeriodicProfile& prof, int n_points) {
  return average_energy_lagrangian(p, lambda, prof, TrigTable(prof.harmonics(), n_points));
}

EnergyGradient gradient(const ModelParams& p, std::optional<double> lambda,
                        const PeriodicProfile& prof, const TrigTable& table, bool mean_free) {
  const int N = table.points();
  const int K = prof.harmonics();
  const SampledProfile g = sample(prof, table);
  const double xi2 = p.xi * p.xi;

  // Density partials at each grid point.
  std::vector<double> fx(N), fy(N), fz(N);
  for (int j = 0; j < N; ++j) {
    const double x = g.values[j];
    fx[j] = (xi2 + p.tau) * x - 0.5 * p.gamma * x * x + x * x * x / 6.0;
    fy[j] = -2.0 * xi2 * g.d1[j];
    fz[j] = xi2 * g.d2[j];
  }

  EnergyGradient out;
  out.d_cos.assign(K, 0.0);
  out.d_sin.assign(K, 0.0);

  for (int k = 1; k <= K; ++k) {
    const double kw = k * prof.omega;
    const double kw2 = kw * kw;
    double dc = 0.0, ds = 0.0;
    for (int j = 0; j < N; ++j) {
      const double c = table.c(k, j);
      const double s = table.s(k, j);
      dc += fx[j] * c + fy[j] * (-kw * s) + fz[j] * (-kw2 * c);
      ds += fx[j] * s + fy[j] * (kw * c) + fz[j] * (-kw2 * s);
    }
    out.d_cos[k - 1] = dc / N;
    out.d_sin[k - 1] = ds / N;
  }

  // At the phase grid the sampled values are omega-independent while
  // w' = omega dw/dtheta and w'' = omega^2 d2w/dtheta2, so
  // dJ/dlog(omega) = avg(fy w' + 2 fz w'').
  double dw = 0.0;
  for (int j = 0; j < N; ++j) dw += fy[j] * g.d1[j] + 2.0 * fz[j] * g.d2[j];
  out.d_log_omega = dw / N;

  if (mean_free) {
    double dm = 0.0;
    for (int j = 0; j < N; ++j) dm += fx[j];
    out.d_mean = dm / N - lambda.value_or(0.0);
  }
  return out;
}

EnergyGradient gradient(const ModelParams& p, std::optional<double> lambda,
                        const PeriodicProfile& prof, int n_points, bool mean_free) {
  return gradient(p, lambda, prof, TrigTable(prof.harmonics(), n_points), mean_free);
}

namespace {

double el_expression(const ModelParams& p, const SampledProfile& g, int j) {
  const double xi2 = p.xi * p.xi;
  return xi2 * (g.d4[j] + 2.0 * g.d2[j] + g.values[j]) + potential_h_prime(p, g.values[j]);
}

}  // namespace

ResidualReport el_residual(const ModelParams& p, double lambda,
                           const PeriodicProfile& prof, int n_points) {
  const SampledProfile g = sample(prof, n_points);
  double sq = 0.0, mx = 0.0;
  for (int j = 0; j < g.n_points; ++j) {
    const double r = el_expression(p, g, j) - lambda;
    sq += r * r;
    mx = std::max(mx, std::abs(r));
  }
  return {std::sqrt(sq / g.n_points), mx, lambda};
}

double recover_multiplier(const ModelParams& p, const PeriodicProfile& prof, int n_points) {
  const SampledProfile g = sample(prof, n_points);
  double acc = 0.0;
  for (int j = 0; j < g.n_points; ++j) acc += el_expression(p, g, j);
  return acc / g.n_points;
}

}  // namespace lb
