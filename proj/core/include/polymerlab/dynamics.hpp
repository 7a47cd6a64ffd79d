#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "polymerlab/field.hpp"
#include "polymerlab/kernels.hpp"
#include "polymerlab/rng.hpp"

namespace polymer {

// The particle must stay in |X| <= L/4; beyond that the periodic environment
// starts interacting with its own images and the run is invalid.
class DomainExceeded : public std::runtime_error {
  public:
    DomainExceeded(double position, double time, std::uint64_t replica);
    double position() const { return position_; }
    double time() const { return time_; }
    std::uint64_t replica() const { return replica_; }

  private:
    double position_;
    double time_;
    std::uint64_t replica_;
};

// One trajectory of the coupled particle/environment pair
//   X(t+dt) = X(t) + zeta(t, X(t)) dt + dB,
//   zeta(t+dt, x) = zeta(t, x) + b'(X(t) - x) dt,
// started from X = 0 and a stationary environment draw. The position is kept
// as the identity X = brownian_sum + phi_integral, so the decomposition of X
// into its martingale and drift parts holds exactly, not just to solver
// accuracy.
class PolymerReplica {
  public:
    // Requires dt <= spacing^2/4: the per-step field increment must stay
    // small against the field's own spatial variation or the update scheme
    // feeds back on itself.
    PolymerReplica(const Kernel& kernel, const GridSpec& spec, double dt, double mean_v,
                   RngStream& field_rng);

    void step(RngStream& path_rng);

    double time() const { return static_cast<double>(steps_) * dt_; }
    double x() const { return brownian_sum_ + phi_integral_; }
    double brownian_sum() const { return brownian_sum_; }
    double phi_integral() const { return phi_integral_; }
    double dt() const { return dt_; }
    std::uint64_t steps() const { return steps_; }

    double drift_at_particle() const;  // zeta(t, X(t)), the integrand of phi_integral
    const Kernel& kernel() const { return *kernel_; }
    const FieldGrid& zeta() const { return zeta_; }
    FieldGrid eta_view() const;  // environment relative to the particle: y -> zeta(t, X + y)

    // Frozen environment: steps still move the particle and accumulate the
    // drift integral, but zeta stays fixed.
    void freeze_environment(bool frozen = true) { env_frozen_ = frozen; }

    // Occupation measure binned to the nearest node, as mass per bin
    // (count * dt); total mass equals elapsed time.
    std::vector<double> occupation_mass() const;

  private:
    void update_environment(double x_old);

    const Kernel* kernel_;
    FieldGrid zeta_;
    double dt_;
    double brownian_sum_ = 0.0;
    double phi_integral_ = 0.0;
    std::uint64_t steps_ = 0;
    std::vector<std::uint32_t> occupation_;
    bool env_frozen_ = false;
    long span_ = 0;  // update window half-width in nodes
};

// Residual of the local-time identity: the accumulated environment change
// must equal the b'-convolution of the occupation measure. Returns the max
// norm over nodes of the difference; shrinks first-order in the grid spacing
// because the occupation is node-binned.
double local_time_consistency(const PolymerReplica& replica, const FieldGrid& zeta_initial);

// Brownian walker integrating a frozen stationary scenery along its path:
// Z is driftless, accum = \int_0^t omega(Z_s) ds. Comparison process for the
// drift integral with the feedback switched off.
class SceneryReplica {
  public:
    SceneryReplica(const Kernel& kernel, const GridSpec& spec, double dt,
                   RngStream& field_rng);

    void step(RngStream& path_rng);

    double time() const { return static_cast<double>(steps_) * dt_; }
    double z() const { return z_; }
    double accum() const { return accum_; }
    const FieldGrid& scenery() const { return omega_; }

  private:
    FieldGrid omega_;
    double dt_;
    double z_ = 0.0;
    double accum_ = 0.0;
    std::uint64_t steps_ = 0;
};

}  // namespace polymer
