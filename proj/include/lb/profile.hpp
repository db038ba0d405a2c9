#pragma once

#include <vector>

namespace lb {

// Truncated trigonometric series
//
//   w(t) = mean + sum_{k=1..K} [ a_k cos(k omega t) + b_k sin(k omega t) ]
//
// with fundamental angular frequency omega (period T = 2 pi / omega). The
// oscillatory part has zero period average by construction, so `mean` is the
// exact mean of the represented function.
struct PeriodicProfile {
  double mean = 0.0;
  std::vector<double> cos_coeffs;
  std::vector<double> sin_coeffs;
  double omega = 1.0;

  PeriodicProfile(double mean, std::vector<double> cos_coeffs,
                  std::vector<double> sin_coeffs, double omega);

  static PeriodicProfile constant(double mean, int harmonics, double omega = 1.0);

  int harmonics() const { return static_cast<int>(cos_coeffs.size()); }
  double period() const;
};

struct PhasePoint {
  double value;
  double slope;
};

// Profile and derivative values at the uniform grid t_j = j T / N,
// j = 0..N-1 (one period, endpoint excluded).
struct SampledProfile {
  int n_points = 0;
  std::vector<double> values;
  std::vector<double> d1, d2, d3, d4;
};

// Quadrature-exactness floor: the energy density is quartic in a degree-K
// trigonometric polynomial, hence band-limited to harmonic 4K. The uniform
// rule with N >= 4K+2 points integrates it exactly.
int min_points(int harmonics);

// cos/sin of the phases 2 pi k j / N, k = 1..K, j = 0..N-1, shared by
// sampling, quadrature sums and gradients. Phases are reduced mod N before
// evaluation, so tables at N and 2N agree bit-for-bit on shared grid points.
class TrigTable {
 public:
  TrigTable(int harmonics, int n_points);

  double c(int k, int j) const { return cos_[(k - 1) * n_ + j]; }
  double s(int k, int j) const { return sin_[(k - 1) * n_ + j]; }
  int harmonics() const { return k_; }
  int points() const { return n_; }

 private:
  int k_;
  int n_;
  std::vector<double> cos_;
  std::vector<double> sin_;
};

// order-th derivative (order in 0..4) of the series at t, by term-wise
// analytic differentiation.
double evaluate(const PeriodicProfile& p, double t, int order);

PhasePoint phase_point(const PeriodicProfile& p, double t);

SampledProfile sample(const PeriodicProfile& p, int n_points);
SampledProfile sample(const PeriodicProfile& p, const TrigTable& table);
void sample_into(const PeriodicProfile& p, const TrigTable& table, SampledProfile& out);

// Time shift placing the global minimum of the profile at t = 0 (coefficients
// rotated per harmonic). The grid argmin is refined by bisection on the
// derivative; constant profiles are returned unchanged.
PeriodicProfile phase_align(const PeriodicProfile& p, int n_scan);

struct SupNorms {
  double value;
  double slope;
};

// Grid maxima of |w| and |w'|.
SupNorms sup_norms(const PeriodicProfile& p, int n_points);

}  // namespace lb
