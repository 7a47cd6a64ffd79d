#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "polymerlab/dynamics.hpp"
#include "polymerlab/estimators.hpp"
#include "polymerlab/kernels.hpp"
#include "polymerlab/stationarity.hpp"

namespace polymer {

// Runs jobs 0..count-1 across the requested number of workers. Results must
// be written into per-index slots by the job itself; replica RNG streams are
// derived from (seed, index), so the outcome is identical for any worker
// count. The first exception thrown by a job is rethrown on the caller's
// thread after all workers stop.
void parallel_for_indexed(std::uint64_t count, unsigned threads,
                          const std::function<void(std::uint64_t)>& job);

struct PolymerRunParams {
    KernelParams kernel;
    GridSpec grid;
    double dt = 1e-3;
    double mean_v = 0.0;
    std::vector<double> output_times;  // starts at 0, entries on the dt lattice
    std::uint64_t replicas = 100;
    std::uint64_t first_replica = 0;
    std::uint64_t seed = 12345;
    unsigned threads = 1;
};

// Ensemble of coupled trajectories; records land pre-sorted by replica index.
// A DomainExceeded from any replica is rethrown tagged with that replica.
ReplicaSet run_polymer_ensemble(const PolymerRunParams& params);

struct SceneryRunParams {
    KernelParams kernel;
    GridSpec grid;
    double dt = 1e-3;
    std::vector<double> output_times;
    std::uint64_t replicas = 100;
    std::uint64_t first_replica = 0;
    std::uint64_t seed = 12345;
    unsigned threads = 1;
};

struct SceneryRecord {
    std::uint64_t replica = 0;
    std::vector<double> z;      // walker position at output times
    std::vector<double> accum;  // \int omega(Z) ds at output times
};

struct SceneryEnsemble {
    std::vector<double> times;
    std::vector<SceneryRecord> records;
};

SceneryEnsemble run_scenery_ensemble(const SceneryRunParams& params);

// Analytic reference for the scenery ensemble: Var(accum(t))/t of Brownian
// motion integrating a frozen field with covariance b, computed as
// (2/t) \int_0^t (t - tau) (1/2pi) \int b_hat(p) e^{-p^2 tau/2} dp dtau.
double scenery_rate_reference(const Kernel& k, double t);

struct StationaryRunParams {
    KernelParams kernel;
    GridSpec grid;
    double dt = 1e-3;
    double mean_v = 0.0;
    std::vector<double> t_checks;  // sampling times for the seen environment
    std::vector<double> lags;      // node-aligned spatial lags
    std::uint64_t replicas = 100;
    std::uint64_t first_replica = 0;
    std::uint64_t seed = 12345;
    unsigned threads = 1;
};

StationaryEnsemble run_stationary_ensemble(const StationaryRunParams& params);

struct LocalTimeRunParams {
    KernelParams kernel;
    GridSpec grid;
    double dt = 1e-3;
    double horizon = 2.0;
    std::uint64_t replicas = 16;
    std::uint64_t seed = 12345;
    unsigned threads = 1;
};

// Ensemble mean of the max-norm local-time residual at the given resolution.
double mean_local_time_residual(const LocalTimeRunParams& params);

}  // namespace polymer
