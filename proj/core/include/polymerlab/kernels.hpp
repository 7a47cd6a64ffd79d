#pragma once

#include <memory>
#include <optional>
#include <string>

#include "polymerlab/quadrature.hpp"

namespace polymer {

// Interaction kernels b of positive type. All spectral data uses the fixed
// convention b(x) = (1/2pi) \int b_hat(p) e^{ipx} dp; every module shares it,
// so cross-module identities hold without stray 2pi factors.
//
// Catalog (all with Gaussian envelope e^{-p^2/s}):
//   gaussian:  b_hat(p) = a e^{-p^2/s}          infrared exponent 0
//   power-ir:  b_hat(p) = a |p|^alpha e^{-p^2/s},  -1 < alpha < 1
//   summable:  b_hat(p) = a p^2 e^{-p^2/s}      finite rho^2 = a sqrt(pi s)
enum class KernelFamily { gaussian, power_ir, summable };

struct KernelParams {
    KernelFamily family = KernelFamily::gaussian;
    double a = 1.0;      // spectral amplitude; 0 gives the b == 0 control kernel
    double alpha = 0.0;  // power-ir only
    double s = 1.0;      // envelope width parameter
};

struct InfraredConstants {
    double C1 = 0.0;     // limsup of b_hat(p)/|p|^alpha as p -> 0
    double C2 = 0.0;     // liminf, equal to C1 for the analytic catalog
    double delta = 0.0;  // half-height envelope cutoff: e^{-delta^2/s} = 1/2
    bool rho_finite = false;
    double rho_squared = 0.0;  // \int p^{-2} b_hat dp, valid when rho_finite
};

class Kernel {
  public:
    static Kernel make(const KernelParams& params);
    static Kernel make(const std::string& family_name, double a, double alpha, double s);

    double b(double x) const;        // closed form where it exists, else quadrature
    double b_prime(double x) const;  // the interaction is f(x) = -b'(x)
    double b_hat(double p) const;
    double c_hat(double p) const;  // sqrt(b_hat), spectral synthesis factor

    // nullopt marks the summable family (b_hat = O(p^2) at the origin).
    std::optional<double> infrared_exponent() const;
    InfraredConstants infrared() const;

    const KernelParams& params() const { return params_; }
    const std::string& name() const { return name_; }
    bool is_zero() const { return params_.a == 0.0; }

    // b_hat is below 1e-28 relative beyond this frequency.
    double spectral_cutoff() const;

    // Inverse-transform quadrature path; also the eval path for power-ir.
    // Residuals beyond tolerance surface as QuadratureError.
    double b_quadrature(double x, const QuadratureOptions& opt = {}) const;
    double b_prime_quadrature(double x, const QuadratureOptions& opt = {}) const;

    // Tabulated b' for the per-step field update: cubic interpolation on a
    // uniform grid, identically 0 beyond update_radius(). Built lazily and
    // shared across copies; the table itself is immutable once built.
    double b_prime_fast(double x) const;
    double update_radius() const;

  private:
    Kernel() = default;
    struct DerivTable {
        double dx = 0.0;
        double inv_dx = 0.0;
        double radius = 0.0;
        std::vector<double> v;  // b'(i*dx), i = 0..n-1, with 2 guard entries
    };
    struct TableHolder;
    const DerivTable& table() const;

    KernelParams params_;
    std::string name_;
    std::shared_ptr<TableHolder> holder_;
};

struct RhoSquaredResult {
    bool finite = false;
    double value = 0.0;  // valid when finite
};

// \int p^{-2} b_hat(p) dp by quadrature when integrable at the origin;
// divergent marker otherwise (b_hat(0) > 0 or infrared exponent <= 1).
RhoSquaredResult rho_squared(const Kernel& k, const QuadratureOptions& opt = {});

}  // namespace polymer
