#pragma once

#include <cmath>
#include <stdexcept>

namespace lb {

// Controlling parameters of the quartic energy density
//
//   f(x, y, z) = xi^2/2 z^2 - xi^2 y^2 + (xi^2 + tau)/2 x^2 - gamma/6 x^3 + x^4/24,
//
// where (x, y, z) stand for a profile value and its first two derivatives.
struct ModelParams {
  double xi;
  double tau;
  double gamma;

  ModelParams(double xi_, double tau_, double gamma_) : xi(xi_), tau(tau_), gamma(gamma_) {
    if (!std::isfinite(xi) || !std::isfinite(tau) || !std::isfinite(gamma))
      throw std::invalid_argument("ModelParams: parameters must be finite");
    if (!(xi > 0.0))
      throw std::invalid_argument("ModelParams: xi must be positive");
  }
};

double integrand(const ModelParams& p, double x, double y, double z);

// Energy density before the cross term is integrated by parts:
// xi^2/2 (z + x)^2 + tau/2 x^2 - gamma/6 x^3 + x^4/24. Over a full period of a
// periodic profile its average agrees with integrand().
double integrand_primal(const ModelParams& p, double x, double z);

// f(x,y,z) - lambda x.
double lagrangian_integrand(const ModelParams& p, double lambda, double x, double y, double z);

// Double-well potential h(x) = tau/2 x^2 - gamma/6 x^3 + x^4/24 and its
// augmentation h*(x) = xi^2/2 x^2 + h(x). h*(a) is the energy of the constant
// profile a; h*(x) == integrand(x, 0, 0) identically.
double potential_h(const ModelParams& p, double x);
double potential_hstar(const ModelParams& p, double x);
double potential_h_prime(const ModelParams& p, double x);

struct ConstantFloor {
  double value;
  double argmin;
};

// Global minimum of t -> f(t,0,0) over constant states. The quartic is
// coercive (leading coefficient 1/24), so the minimum is attained at a real
// root of the derivative cubic.
ConstantFloor constant_state_floor(const ModelParams& p);

// Tilted variant: minimizes t -> f(t,0,0) - lambda t. The lambda = 0 case is
// the floor above.
ConstantFloor constant_state_floor(const ModelParams& p, double lambda);

}  // namespace lb
