#include "lb/model.hpp"

#include <algorithm>
#include <limits>
#include <array>
#include <vector>

namespace lb {

double integrand(const ModelParams& p, double x, double y, double z) {
  const double xi2 = p.xi * p.xi;
  return 0.5 * xi2 * z * z - xi2 * y * y + 0.5 * (xi2 + p.tau) * x * x -
         p.gamma / 6.0 * x * x * x + x * x * x * x / 24.0;
}

double integrand_primal(const ModelParams& p, double x, double z) {
  const double xi2 = p.xi * p.xi;
  const double w = z + x;
  return 0.5 * xi2 * w * w + 0.5 * p.tau * x * x - p.gamma / 6.0 * x * x * x +
         x * x * x * x / 24.0;
}

double lagrangian_integrand(const ModelParams& p, double lambda, double x, double y, double z) {
  return integrand(p, x, y, z) - lambda * x;
}

double potential_h(const ModelParams& p, double x) {
  return 0.5 * p.tau * x * x - p.gamma / 6.0 * x * x * x + x * x * x * x / 24.0;
}

double potential_hstar(const ModelParams& p, double x) {
  return 0.5 * p.xi * p.xi * x * x + potential_h(p, x);
}

double potential_h_prime(const ModelParams& p, double x) {
  return p.tau * x - 0.5 * p.gamma * x * x + x * x * x / 6.0;
}

namespace {

// Real roots of t^3 + a t^2 + b t + c = 0 by the depressed-cubic formulas.
std::vector<double> cubic_real_roots(double a, double b, double c) {
  std::vector<double> roots;
  const double p = b - a * a / 3.0;
  const double q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;
  const double shift = -a / 3.0;
  const double disc = 0.25 * q * q + p * p * p / 27.0;
  if (disc > 0.0) {
    const double r = std::sqrt(disc);
    const double s = std::cbrt(-0.5 * q + r) + std::cbrt(-0.5 * q - r);
    roots.push_back(s + shift);
  } else if (p == 0.0 && q == 0.0) {
    roots.push_back(shift);
  } else {
    // Three real roots (disc <= 0 requires p < 0).
    const double m = 2.0 * std::sqrt(-p / 3.0);
    const double arg = std::clamp(3.0 * q / (p * m), -1.0, 1.0);
    const double theta = std::acos(arg) / 3.0;
    for (int k = 0; k < 3; ++k)
      roots.push_back(m * std::cos(theta - 2.0 * M_PI * k / 3.0) + shift);
  }
  return roots;
}

double tilted(const ModelParams& p, double lambda, double t) {
  return integrand(p, t, 0.0, 0.0) - lambda * t;
}

// Grid scan plus golden-section refinement; guards the closed-form route
// against coefficient degeneracies.
ConstantFloor floor_by_scan(const ModelParams& p, double lambda) {
  const double radius =
      8.0 * (1.0 + std::abs(p.tau) + std::abs(p.gamma) + p.xi * p.xi + std::abs(lambda));
  const int n = 4096;
  int best = 0;
  double best_val = tilted(p, lambda, -radius);
  for (int i = 1; i <= n; ++i) {
    const double t = -radius + 2.0 * radius * i / n;
    const double v = tilted(p, lambda, t);
    if (v < best_val) {
      best_val = v;
      best = i;
    }
  }
  const double h = 2.0 * radius / n;
  double lo = -radius + best * h - h;
  double hi = -radius + best * h + h;
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - gr * (hi - lo);
  double x2 = lo + gr * (hi - lo);
  double f1 = tilted(p, lambda, x1);
  double f2 = tilted(p, lambda, x2);
  for (int it = 0; it < 120; ++it) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - gr * (hi - lo);
      f1 = tilted(p, lambda, x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + gr * (hi - lo);
      f2 = tilted(p, lambda, x2);
    }
  }
  // Value comparisons cannot localize a smooth minimum below sqrt(eps);
  // polish with Newton on the stationarity equation.
  double t = 0.5 * (lo + hi);
  const double cell = hi - lo + 2.0 * h;
  double polished = t;
  for (int it = 0; it < 12; ++it) {
    const double g1 = (p.xi * p.xi + p.tau) * polished - 0.5 * p.gamma * polished * polished +
                      polished * polished * polished / 6.0 - lambda;
    const double g2 = (p.xi * p.xi + p.tau) - p.gamma * polished + 0.5 * polished * polished;
    if (g2 <= 0.0) break;
    polished -= g1 / g2;
  }
  const double slack = 1e-12 * (1.0 + std::abs(tilted(p, lambda, t)));
  if (std::isfinite(polished) && std::abs(polished - t) <= cell &&
      tilted(p, lambda, polished) <= tilted(p, lambda, t) + slack)
    t = polished;
  return {tilted(p, lambda, t), t};
}

}  // namespace

ConstantFloor constant_state_floor(const ModelParams& p, double lambda) {
  // Stationarity of f(t,0,0) - lambda t: t^3 - 3 gamma t^2 + 6 (xi^2+tau) t - 6 lambda = 0.
  // Closed-form roots are exact and win ties; the scan replaces them only on
  // a strict improvement.
  ConstantFloor best{std::numeric_limits<double>::infinity(), 0.0};
  bool have_root = false;
  for (double t : cubic_real_roots(-3.0 * p.gamma, 6.0 * (p.xi * p.xi + p.tau), -6.0 * lambda)) {
    if (!std::isfinite(t)) continue;
    const double v = tilted(p, lambda, t);
    if (!have_root || v < best.value || (v == best.value && t < best.argmin)) best = {v, t};
    have_root = true;
  }
  const ConstantFloor scan = floor_by_scan(p, lambda);
  if (!have_root || scan.value < best.value) best = scan;
  return best;
}

ConstantFloor constant_state_floor(const ModelParams& p) {
  return constant_state_floor(p, 0.0);
}

}  // namespace lb
