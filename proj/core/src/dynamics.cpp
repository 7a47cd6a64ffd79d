#include "polymerlab/dynamics.hpp"

#include <cmath>
#include <sstream>

namespace polymer {

namespace {

std::string domain_message(double position, double time, std::uint64_t replica) {
    std::ostringstream os;
    os << "particle left the safe window: |X| = " << std::fabs(position) << " > L/4 at t = "
       << time << " (replica " << replica << ")";
    return os.str();
}

}  // namespace

DomainExceeded::DomainExceeded(double position, double time, std::uint64_t replica)
    : std::runtime_error(domain_message(position, time, replica)),
      position_(position),
      time_(time),
      replica_(replica) {}

PolymerReplica::PolymerReplica(const Kernel& kernel, const GridSpec& spec, double dt,
                               double mean_v, RngStream& field_rng)
    : kernel_(&kernel), zeta_(sample_stationary(kernel, spec, field_rng, mean_v)), dt_(dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("dynamics: dt must be positive");
    const double h = spec.spacing();
    if (dt > h * h / 4.0)
        throw std::invalid_argument(
            "dynamics: dt exceeds spacing^2/4; refine dt or coarsen the grid");
    occupation_.assign(spec.num_points_N, 0);
    const double radius = kernel_->update_radius();
    span_ = static_cast<long>(std::ceil(radius / h)) + 1;
}

double PolymerReplica::drift_at_particle() const { return interpolate(zeta_, x()); }

FieldGrid PolymerReplica::eta_view() const { return shift(zeta_, x()); }

void PolymerReplica::step(RngStream& path_rng) {
    const double x_old = x();
    const double db = std::sqrt(dt_) * path_rng.normal();
    const double drift = interpolate(zeta_, x_old);

    brownian_sum_ += db;
    phi_integral_ += drift * dt_;

    const auto n = static_cast<long>(zeta_.spec.num_points_N);
    const double h = zeta_.spec.spacing();
    long bin = std::lround(x_old / h) % n;
    if (bin < 0) bin += n;
    ++occupation_[static_cast<std::size_t>(bin)];

    if (!env_frozen_ && !kernel_->is_zero()) update_environment(x_old);

    ++steps_;
    const double pos = x();
    if (std::fabs(pos) > zeta_.spec.length_L / 4.0) throw DomainExceeded(pos, time(), 0);
}

void PolymerReplica::update_environment(double x_old) {
    const auto n = static_cast<long>(zeta_.spec.num_points_N);
    const double h = zeta_.spec.spacing();
    double* v = zeta_.values.data();

    if (2 * span_ + 1 >= n) {
        // Window covers the whole ring: visit each node once with the
        // nearest-image displacement.
        const double l = zeta_.spec.length_L;
        for (long j = 0; j < n; ++j) {
            double d = x_old - static_cast<double>(j) * h;
            d -= l * std::round(d / l);
            v[j] += kernel_->b_prime_fast(d) * dt_;
        }
        return;
    }

    // The displacement x_old - j*h is evaluated against the unwrapped node
    // position, which is the nearest periodic image throughout the window.
    const long jc = std::lround(x_old / h);
    const long j0 = jc - span_;
    long jw = j0 % n;
    if (jw < 0) jw += n;
    double d = x_old - static_cast<double>(j0) * h;
    for (long m = 0; m <= 2 * span_; ++m) {
        v[jw] += kernel_->b_prime_fast(d) * dt_;
        d -= h;
        if (++jw == n) jw = 0;
    }
}

std::vector<double> PolymerReplica::occupation_mass() const {
    std::vector<double> mass(occupation_.size());
    for (std::size_t j = 0; j < occupation_.size(); ++j)
        mass[j] = static_cast<double>(occupation_[j]) * dt_;
    return mass;
}

double local_time_consistency(const PolymerReplica& replica, const FieldGrid& zeta_initial) {
    const FieldGrid& zeta_now = replica.zeta();
    const GridSpec& spec = zeta_now.spec;
    if (zeta_initial.values.size() != zeta_now.values.size())
        throw std::invalid_argument("local_time_consistency: grid mismatch");

    const auto n = static_cast<long>(spec.num_points_N);
    const double h = spec.spacing();
    std::vector<double> predicted(spec.num_points_N, 0.0);

    const std::vector<double> mass = replica.occupation_mass();
    const Kernel& k = replica.kernel();
    const double radius = k.update_radius();
    const long span = static_cast<long>(std::ceil(radius / h)) + 1;

    for (long b = 0; b < n; ++b) {
        const double m = mass[static_cast<std::size_t>(b)];
        if (m == 0.0) continue;
        const double y = static_cast<double>(b) * h;
        if (2 * span + 1 >= n) {
            const double l = spec.length_L;
            for (long j = 0; j < n; ++j) {
                double d = y - static_cast<double>(j) * h;
                d -= l * std::round(d / l);
                predicted[static_cast<std::size_t>(j)] += m * k.b_prime_fast(d);
            }
        } else {
            const long j0 = b - span;
            long jw = j0 % n;
            if (jw < 0) jw += n;
            double d = y - static_cast<double>(j0) * h;
            for (long q = 0; q <= 2 * span; ++q) {
                predicted[static_cast<std::size_t>(jw)] += m * k.b_prime_fast(d);
                d -= h;
                if (++jw == n) jw = 0;
            }
        }
    }

    double worst = 0.0;
    for (long j = 0; j < n; ++j) {
        const double actual =
            zeta_now.values[static_cast<std::size_t>(j)] - zeta_initial.values[static_cast<std::size_t>(j)];
        worst = std::max(worst, std::fabs(actual - predicted[static_cast<std::size_t>(j)]));
    }
    return worst;
}

SceneryReplica::SceneryReplica(const Kernel& kernel, const GridSpec& spec, double dt,
                               RngStream& field_rng)
    : omega_(sample_stationary(kernel, spec, field_rng, 0.0)), dt_(dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("dynamics: dt must be positive");
}

void SceneryReplica::step(RngStream& path_rng) {
    const double db = std::sqrt(dt_) * path_rng.normal();
    accum_ += interpolate(omega_, z_) * dt_;
    z_ += db;
    ++steps_;
    if (std::fabs(z_) > omega_.spec.length_L / 4.0) throw DomainExceeded(z_, time(), 0);
}

}  // namespace polymer
