#include "lb/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <random>
#include <stdexcept>

namespace lb {

namespace {

constexpr double kTrivialAmplitude = 1e-6;

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

double norm2(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

double sup(const std::vector<double>& a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::abs(v));
  return m;
}

// omega constrained to (lo, hi) through a logistic map of the unconstrained
// optimizer variable u acting on log omega.
struct OmegaMap {
  double log_lo;
  double log_hi;

  static double sigma(double u) { return 1.0 / (1.0 + std::exp(-u)); }

  double omega(double u) const {
    return std::exp(log_lo + sigma(u) * (log_hi - log_lo));
  }
  double u_from_omega(double w) const {
    double s = (std::log(w) - log_lo) / (log_hi - log_lo);
    s = std::clamp(s, 1e-9, 1.0 - 1e-9);
    return std::log(s / (1.0 - s));
  }
  double dlog_omega_du(double u) const {
    const double s = sigma(u);
    return (log_hi - log_lo) * s * (1.0 - s);
  }
};

// Uniform double in [0,1) from the top 53 bits; keeps start lists identical
// across standard-library implementations.
double uniform_unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

void MinimizeOptions::validate() const {
  if (harmonics < 1) throw std::invalid_argument("MinimizeOptions: harmonics >= 1 required");
  if (grid < min_points(harmonics))
    throw std::invalid_argument("MinimizeOptions: grid below the 4K+2 quadrature floor");
  if (!(grad_tol > 0.0)) throw std::invalid_argument("MinimizeOptions: grad_tol must be positive");
  if (max_iters < 1) throw std::invalid_argument("MinimizeOptions: max_iters >= 1 required");
  if (starts < 1) throw std::invalid_argument("MinimizeOptions: starts >= 1 required");
  if (!(omega_min > 0.0) || !(omega_min < omega_max))
    throw std::invalid_argument("MinimizeOptions: need 0 < omega_min < omega_max");
}

QuasiNewtonResult quasi_newton_minimize(const ObjectiveFn& objective,
                                        std::vector<double> start,
                                        const QuasiNewtonOptions& opts) {
  const std::size_t n = start.size();
  std::vector<double> x = std::move(start);
  std::vector<double> g;
  double f = objective(x, g);

  QuasiNewtonResult res;
  res.accepted_values.push_back(f);
  if (sup(g) <= opts.grad_tol) {
    res.x = x;
    res.value = f;
    res.converged = true;
    res.iterations = 0;
    return res;
  }

  std::deque<std::vector<double>> s_hist, y_hist;
  std::deque<double> rho_hist;

  // A run stalled at floating-point resolution keeps finding one-ulp
  // decreases through heavy backtracking; the evaluation budget bounds what
  // it can burn before reporting non-convergence.
  long evals_left = std::max(2000L, 8L * opts.max_iters);

  std::vector<double> d(n), x_new(n), g_new;
  for (int iter = 1; iter <= opts.max_iters; ++iter) {
    // Two-loop recursion for d = -H g.
    std::vector<double> q = g;
    const int m = static_cast<int>(s_hist.size());
    std::vector<double> alpha(m);
    for (int i = m - 1; i >= 0; --i) {
      alpha[i] = rho_hist[i] * dot(s_hist[i], q);
      for (std::size_t j = 0; j < n; ++j) q[j] -= alpha[i] * y_hist[i][j];
    }
    if (opts.h0_diag.size() == n) {
      for (std::size_t j = 0; j < n; ++j) q[j] *= opts.h0_diag[j];
    } else {
      double gamma = 1.0;
      if (m > 0) {
        const double yy = dot(y_hist[m - 1], y_hist[m - 1]);
        if (yy > 0.0) gamma = dot(s_hist[m - 1], y_hist[m - 1]) / yy;
      }
      for (std::size_t j = 0; j < n; ++j) q[j] *= gamma;
    }
    for (int i = 0; i < m; ++i) {
      const double beta = rho_hist[i] * dot(y_hist[i], q);
      for (std::size_t j = 0; j < n; ++j) q[j] += (alpha[i] - beta) * s_hist[i][j];
    }
    for (std::size_t j = 0; j < n; ++j) d[j] = -q[j];

    double gd = dot(g, d);
    if (!(gd < 0.0)) {
      for (std::size_t j = 0; j < n; ++j) d[j] = -g[j];
      gd = -dot(g, g);
    }

    // Backtracking line search with the sufficient-decrease condition.
    double step = (iter == 1) ? std::min(1.0, 1.0 / sup(g)) : 1.0;
    bool accepted = false;
    double f_new = f;
    for (int bt = 0; bt < 60 && evals_left > 0; ++bt) {
      for (std::size_t j = 0; j < n; ++j) x_new[j] = x[j] + step * d[j];
      f_new = objective(x_new, g_new);
      --evals_left;
      if (std::isfinite(f_new) && f_new <= f + opts.sufficient_decrease * step * gd) {
        accepted = true;
        break;
      }
      step *= opts.backtrack;
    }
    if (!accepted) {
      res.x = x;
      res.value = f;
      res.converged = false;
      res.iterations = iter - 1;
      return res;
    }

    std::vector<double> s_vec(n), y_vec(n);
    for (std::size_t j = 0; j < n; ++j) {
      s_vec[j] = x_new[j] - x[j];
      y_vec[j] = g_new[j] - g[j];
    }
    const double sy = dot(s_vec, y_vec);
    if (sy > 1e-12 * norm2(s_vec) * norm2(y_vec)) {
      s_hist.push_back(std::move(s_vec));
      y_hist.push_back(std::move(y_vec));
      rho_hist.push_back(1.0 / sy);
      if (static_cast<int>(s_hist.size()) > opts.memory) {
        s_hist.pop_front();
        y_hist.pop_front();
        rho_hist.pop_front();
      }
    }

    x.swap(x_new);
    g.swap(g_new);
    f = f_new;
    res.accepted_values.push_back(f);
    res.iterations = iter;
    if (sup(g) <= opts.grad_tol) {
      res.converged = true;
      break;
    }
  }

  res.x = x;
  res.value = f;
  return res;
}

std::vector<PeriodicProfile> initial_profiles(const ModelParams& params,
                                              std::optional<double> a,
                                              const MinimizeOptions& opts,
                                              double lambda) {
  opts.validate();
  const int K = opts.harmonics;
  const double mean = a ? *a : constant_state_floor(params, lambda).argmin;
  // Weak-segregation single-harmonic amplitude: minimizing tau A^2/4 + A^4/64
  // gives A^2 = -8 tau; floored at 1 so the nontrivial seed survives tau >= 0.
  const double amp = std::sqrt(std::max(-8.0 * params.tau, 1.0));

  std::vector<PeriodicProfile> list;
  list.push_back(PeriodicProfile::constant(mean, K));
  for (double w : {1.0, 0.9, 1.1}) {
    std::vector<double> ca(K, 0.0), sb(K, 0.0);
    ca[0] = amp;
    list.emplace_back(mean, std::move(ca), std::move(sb), w);
  }

  std::mt19937_64 rng(opts.seed);
  while (static_cast<int>(list.size()) < opts.starts) {
    std::vector<double> ca(K, 0.0), sb(K, 0.0);
    ca[0] = amp;
    for (int k = 1; k <= K; ++k) {
      const double decay = 1.0 / (static_cast<double>(k) * k);
      ca[k - 1] += amp * (uniform_unit(rng) - 0.5) * decay;
      sb[k - 1] += amp * (uniform_unit(rng) - 0.5) * decay;
    }
    list.emplace_back(mean, std::move(ca), std::move(sb), 1.0);
  }
  if (static_cast<int>(list.size()) > opts.starts) list.resize(opts.starts, list.front());
  return list;
}

namespace {

// Shared multi-start driver. `lambda` present selects the Lagrangian problem
// (free mean); absent, the mean stays pinned to `fixed_mean` and never enters
// the optimization vector.
MinimizeResult run_multistart(const ModelParams& params, std::optional<double> lambda,
                              double fixed_mean, const MinimizeOptions& opts,
                              const std::vector<PeriodicProfile>& extra_starts) {
  opts.validate();
  const int K = opts.harmonics;
  const bool mean_free = lambda.has_value();
  const TrigTable table(K, opts.grid);
  const OmegaMap omap{std::log(opts.omega_min), std::log(opts.omega_max)};

  std::vector<PeriodicProfile> starts =
      mean_free ? initial_profiles(params, std::nullopt, opts, *lambda)
                : initial_profiles(params, fixed_mean, opts);
  for (const PeriodicProfile& p : extra_starts) {
    std::vector<double> ca(K, 0.0), sb(K, 0.0);
    for (int k = 0; k < std::min(K, p.harmonics()); ++k) {
      ca[k] = p.cos_coeffs[k];
      sb[k] = p.sin_coeffs[k];
    }
    const double w = std::clamp(p.omega, opts.omega_min * (1.0 + 1e-9),
                                opts.omega_max * (1.0 - 1e-9));
    starts.emplace_back(mean_free ? p.mean : fixed_mean, std::move(ca), std::move(sb), w);
  }

  const std::size_t dim = (mean_free ? 1 : 0) + 2 * static_cast<std::size_t>(K) + 1;
  const std::size_t off = mean_free ? 1 : 0;

  auto pack = [&](const PeriodicProfile& p) {
    std::vector<double> x(dim);
    if (mean_free) x[0] = p.mean;
    for (int k = 0; k < K; ++k) {
      x[off + k] = p.cos_coeffs[k];
      x[off + K + k] = p.sin_coeffs[k];
    }
    x[dim - 1] = omap.u_from_omega(p.omega);
    return x;
  };
  auto unpack = [&](const std::vector<double>& x) {
    std::vector<double> ca(x.begin() + off, x.begin() + off + K);
    std::vector<double> sb(x.begin() + off + K, x.begin() + off + 2 * K);
    return PeriodicProfile(mean_free ? x[0] : fixed_mean, std::move(ca), std::move(sb),
                           omap.omega(x[dim - 1]));
  };

  ObjectiveFn objective = [&](const std::vector<double>& x, std::vector<double>& grad) {
    const PeriodicProfile prof = unpack(x);
    const EnergyGradient eg = gradient(params, lambda, prof, table, mean_free);
    grad.resize(dim);
    if (mean_free) grad[0] = eg.d_mean;
    for (int k = 0; k < K; ++k) {
      grad[off + k] = eg.d_cos[k];
      grad[off + K + k] = eg.d_sin[k];
    }
    grad[dim - 1] = eg.d_log_omega * omap.dlog_omega_du(x[dim - 1]);
    return mean_free ? average_energy_lagrangian(params, *lambda, prof, table)
                     : average_energy(params, prof, table);
  };

  QuasiNewtonOptions qn;
  qn.grad_tol = opts.grad_tol;
  qn.max_iters = opts.max_iters;
  // Per-harmonic curvature of the quadratic energy part,
  // xi^2 (1 - (k w)^2)^2 / 2 + tau / 2, spans several orders of magnitude
  // across k; feeding it as the initial inverse Hessian keeps the iteration
  // from crawling along the stiff directions. Evaluated at each start's
  // frequency.
  auto preconditioner = [&](double omega) {
    const double xi2 = params.xi * params.xi;
    std::vector<double> h0(dim, 1.0);
    if (mean_free) h0[0] = 1.0 / std::max(xi2 + params.tau, 0.5);
    for (int k = 1; k <= K; ++k) {
      const double q = 1.0 - (k * omega) * (k * omega);
      const double curv = 0.5 * xi2 * q * q + 0.5 * params.tau;
      h0[off + k - 1] = h0[off + K + k - 1] = 1.0 / std::max(curv, 0.5);
    }
    return h0;
  };

  struct Candidate {
    QuasiNewtonResult qn;
    int index;
  };
  std::optional<Candidate> best_converged, best_any;
  auto better = [](const QuasiNewtonResult& a, const QuasiNewtonResult& b) {
    return a.value < b.value;  // ties keep the earlier (lower) start index
  };

  for (int i = 0; i < static_cast<int>(starts.size()); ++i) {
    qn.h0_diag = preconditioner(starts[i].omega);
    QuasiNewtonResult r = quasi_newton_minimize(objective, pack(starts[i]), qn);
    if (!best_any || better(r, best_any->qn)) best_any = Candidate{r, i};
    if (r.converged && (!best_converged || better(r, best_converged->qn)))
      best_converged = Candidate{std::move(r), i};
  }

  const Candidate& chosen = best_converged ? *best_converged : *best_any;
  PeriodicProfile prof = unpack(chosen.qn.x);

  MinimizeResult out{prof, chosen.qn.value, 0.0, {}, chosen.qn.converged,
                     chosen.qn.iterations, chosen.index, true};
  out.multiplier = mean_free ? *lambda : recover_multiplier(params, prof, opts.grid);
  out.residual = el_residual(params, out.multiplier, prof, opts.grid);

  const SampledProfile g = sample(prof, table);
  double amp = 0.0;
  for (double v : g.values) amp = std::max(amp, std::abs(v - prof.mean));
  out.is_trivial = amp < kTrivialAmplitude;
  return out;
}

}  // namespace

MinimizeResult minimize_constrained(const ModelParams& params, double a,
                                    const MinimizeOptions& opts,
                                    const std::vector<PeriodicProfile>& extra_starts) {
  return run_multistart(params, std::nullopt, a, opts, extra_starts);
}

MinimizeResult minimize_lagrangian(const ModelParams& params, double lambda,
                                   const MinimizeOptions& opts,
                                   const std::vector<PeriodicProfile>& extra_starts) {
  return run_multistart(params, lambda, 0.0, opts, extra_starts);
}

}  // namespace lb
