#pragma once

#include <vector>

#include "polymerlab/estimators.hpp"
#include "polymerlab/kernels.hpp"

namespace polymer {

// Resolvent pairing of the drift functional with the environment process at
// rate lambda: (1/2pi) \int b_hat(p) / (lambda + p^2/2) dp. Diverges like
// lambda^{(alpha-1)/2} as lambda -> 0 when the infrared exponent alpha < 1.
double resolvent_upper(const Kernel& k, double lambda);

// Frequency-shifted, doubled resolvent
//   (1/pi) \int b_hat(q) / (lambda + (q-p)^2/2) dq,
// the effective stiffness felt by a test mode at frequency p. At p = 0 it
// equals 2 * resolvent_upper.
double stiffening(const Kernel& k, double lambda, double p);

// Self-consistent single-mode lower bound:
//   (1/2pi) \int b_hat(p) / (lambda + p^2/2 + stiffening(lambda,p) p^2) dp.
double lower_bound_closed(const Kernel& k, double lambda);

// Mirrored geometric frequency grid with trapezoid weights. The floor
// lambda^{(3-alpha)/4}/10 resolves the boundary layer where the optimal test
// profile concentrates; the cap is the spectral cutoff of the kernel. The
// summable family uses alpha = 0 for the floor.
struct FrequencyGrid {
    std::vector<double> p;
    std::vector<double> w;
};

FrequencyGrid variational_grid(const Kernel& k, double lambda,
                               std::size_t points_per_side = 256);

// First-order variational lower bound: the maximum of 2 l.u - u.(D+M)u over
// grid profiles u, evaluated as (1/2pi) l.u* at the stationary point. The
// quadratic form is positive definite for any valid kernel and grid; a
// Cholesky failure therefore signals misconfiguration and throws.
double lower_bound_variational(const Kernel& k, double lambda, const FrequencyGrid& grid);
double lower_bound_variational(const Kernel& k, double lambda);

// Sandwich on the Laplace transform of E(t) = E[X(t)^2]:
//   lambda^{-2}(1 + 2 * lower)  <=  E_hat(lambda)  <=  lambda^{-2}(1 + 2 * resolvent_upper),
// with log-log slopes of both faces fitted over the lambda window.
struct BoundsReport {
    std::vector<double> lambdas;
    std::vector<double> resolvent_upper;
    std::vector<double> lower_closed;
    std::vector<double> lower_variational;
    std::vector<double> e_hat_upper;
    std::vector<double> e_hat_lower;
    ExponentFit upper_exponent;
    ExponentFit lower_exponent;
};

BoundsReport sandwich_report(const Kernel& k, const std::vector<double>& lambdas,
                             std::size_t points_per_side = 256);

}  // namespace polymer
