#include "lb/profile.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <utility>

namespace lb {

namespace {
constexpr double two_pi = 2.0 * std::numbers::pi;
}

PeriodicProfile::PeriodicProfile(double mean_, std::vector<double> cos_coeffs_,
                                 std::vector<double> sin_coeffs_, double omega_)
    : mean(mean_),
      cos_coeffs(std::move(cos_coeffs_)),
      sin_coeffs(std::move(sin_coeffs_)),
      omega(omega_) {
  if (!std::isfinite(mean))
    throw std::invalid_argument("PeriodicProfile: mean must be finite");
  if (!(omega > 0.0) || !std::isfinite(omega))
    throw std::invalid_argument("PeriodicProfile: omega must be positive and finite");
  if (cos_coeffs.empty() || cos_coeffs.size() != sin_coeffs.size())
    throw std::invalid_argument("PeriodicProfile: need K >= 1 with matching coefficient arrays");
  for (std::size_t i = 0; i < cos_coeffs.size(); ++i)
    if (!std::isfinite(cos_coeffs[i]) || !std::isfinite(sin_coeffs[i]))
      throw std::invalid_argument("PeriodicProfile: coefficients must be finite");
}

PeriodicProfile PeriodicProfile::constant(double mean, int harmonics, double omega) {
  if (harmonics < 1) throw std::invalid_argument("PeriodicProfile: K >= 1 required");
  return PeriodicProfile(mean, std::vector<double>(harmonics, 0.0),
                         std::vector<double>(harmonics, 0.0), omega);
}

double PeriodicProfile::period() const { return two_pi / omega; }

int min_points(int harmonics) { return 4 * harmonics + 2; }

TrigTable::TrigTable(int harmonics, int n_points) : k_(harmonics), n_(n_points) {
  if (harmonics < 1) throw std::invalid_argument("TrigTable: K >= 1 required");
  if (n_points < min_points(harmonics))
    throw std::invalid_argument("TrigTable: n_points below the 4K+2 quadrature floor");
  cos_.resize(static_cast<std::size_t>(k_) * n_);
  sin_.resize(static_cast<std::size_t>(k_) * n_);
  for (int k = 1; k <= k_; ++k) {
    for (int j = 0; j < n_; ++j) {
      const long long m = (static_cast<long long>(k) * j) % n_;
      const double angle = two_pi * (static_cast<double>(m) / n_);
      cos_[static_cast<std::size_t>(k - 1) * n_ + j] = std::cos(angle);
      sin_[static_cast<std::size_t>(k - 1) * n_ + j] = std::sin(angle);
    }
  }
}

double evaluate(const PeriodicProfile& p, double t, int order) {
  if (order < 0 || order > 4)
    throw std::invalid_argument("evaluate: order must be in 0..4");
  double acc = (order == 0) ? p.mean : 0.0;
  const int K = p.harmonics();
  for (int k = 1; k <= K; ++k) {
    const double kw = k * p.omega;
    const double phase = kw * t;
    const double c = std::cos(phase);
    const double s = std::sin(phase);
    double factor = 1.0;
    for (int d = 0; d < order; ++d) factor *= kw;
    const double a = p.cos_coeffs[k - 1];
    const double b = p.sin_coeffs[k - 1];
    // d-th derivative cycles (cos, -sin, -cos, sin) and (sin, cos, -sin, -cos).
    switch (order % 4) {
      case 0: acc += factor * (a * c + b * s); break;
      case 1: acc += factor * (-a * s + b * c); break;
      case 2: acc += factor * (-a * c - b * s); break;
      default: acc += factor * (a * s - b * c); break;
    }
  }
  return acc;
}

PhasePoint phase_point(const PeriodicProfile& p, double t) {
  return {evaluate(p, t, 0), evaluate(p, t, 1)};
}

void sample_into(const PeriodicProfile& p, const TrigTable& table, SampledProfile& out) {
  const int N = table.points();
  const int K = p.harmonics();
  if (table.harmonics() != K)
    throw std::invalid_argument("sample_into: table harmonics mismatch");
  out.n_points = N;
  out.values.assign(N, p.mean);
  out.d1.assign(N, 0.0);
  out.d2.assign(N, 0.0);
  out.d3.assign(N, 0.0);
  out.d4.assign(N, 0.0);
  for (int k = 1; k <= K; ++k) {
    const double a = p.cos_coeffs[k - 1];
    const double b = p.sin_coeffs[k - 1];
    if (a == 0.0 && b == 0.0) continue;
    const double kw = k * p.omega;
    const double kw2 = kw * kw;
    const double kw3 = kw2 * kw;
    const double kw4 = kw2 * kw2;
    for (int j = 0; j < N; ++j) {
      const double c = table.c(k, j);
      const double s = table.s(k, j);
      out.values[j] += a * c + b * s;
      out.d1[j] += kw * (-a * s + b * c);
      out.d2[j] += kw2 * (-a * c - b * s);
      out.d3[j] += kw3 * (a * s - b * c);
      out.d4[j] += kw4 * (a * c + b * s);
    }
  }
}

SampledProfile sample(const PeriodicProfile& p, const TrigTable& table) {
  SampledProfile out;
  sample_into(p, table, out);
  return out;
}

SampledProfile sample(const PeriodicProfile& p, int n_points) {
  return sample(p, TrigTable(p.harmonics(), n_points));
}

PeriodicProfile phase_align(const PeriodicProfile& p, int n_scan) {
  const int K = p.harmonics();
  bool constant = true;
  for (int k = 0; k < K; ++k)
    if (p.cos_coeffs[k] != 0.0 || p.sin_coeffs[k] != 0.0) constant = false;
  if (constant) return p;

  const SampledProfile grid = sample(p, n_scan);
  const double T = p.period();
  const double h = T / n_scan;
  int jmin = 0;
  for (int j = 1; j < n_scan; ++j)
    if (grid.values[j] < grid.values[jmin]) jmin = j;

  // Refine inside the bracketing cell by bisection on w'. The grid argmin
  // guarantees a descending-to-ascending derivative sign change nearby; if
  // the cell contains extra wiggle roots fall back to the best endpoint.
  double lo = jmin * h - h;
  double hi = jmin * h + h;
  const double dmid = evaluate(p, jmin * h, 1);
  if (dmid > 0.0)
    hi = jmin * h;
  else if (dmid < 0.0)
    lo = jmin * h;
  double s0 = jmin * h;
  if (evaluate(p, lo, 1) <= 0.0 && evaluate(p, hi, 1) >= 0.0) {
    double a = lo, b = hi;
    for (int it = 0; it < 60; ++it) {
      const double m = 0.5 * (a + b);
      if (evaluate(p, m, 1) <= 0.0)
        a = m;
      else
        b = m;
    }
    const double root = 0.5 * (a + b);
    if (evaluate(p, root, 0) <= evaluate(p, s0, 0)) s0 = root;
  }
  for (double cand : {lo, hi})
    if (evaluate(p, cand, 0) < evaluate(p, s0, 0)) s0 = cand;

  // Shifted profile w(t + s0): per-harmonic coefficient rotation.
  std::vector<double> ca(K), sb(K);
  for (int k = 1; k <= K; ++k) {
    const double phase = k * p.omega * s0;
    const double c = std::cos(phase);
    const double s = std::sin(phase);
    const double a = p.cos_coeffs[k - 1];
    const double b = p.sin_coeffs[k - 1];
    ca[k - 1] = a * c + b * s;
    sb[k - 1] = -a * s + b * c;
  }
  return PeriodicProfile(p.mean, std::move(ca), std::move(sb), p.omega);
}

SupNorms sup_norms(const PeriodicProfile& p, int n_points) {
  const SampledProfile grid = sample(p, n_points);
  SupNorms out{0.0, 0.0};
  for (int j = 0; j < grid.n_points; ++j) {
    out.value = std::max(out.value, std::abs(grid.values[j]));
    out.slope = std::max(out.slope, std::abs(grid.d1[j]));
  }
  return out;
}

}  // namespace lb
