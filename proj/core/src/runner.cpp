#include "polymerlab/runner.hpp"

#include <atomic>
#include <cmath>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <thread>

#include "polymerlab/quadrature.hpp"

namespace polymer {

namespace {

// Output times as step indices; every entry must sit on the dt lattice or
// the "observable at time t" label would silently lie by up to dt/2.
std::vector<std::uint64_t> schedule_steps(const std::vector<double>& times, double dt) {
    if (times.empty()) throw std::invalid_argument("runner: no output times");
    std::vector<std::uint64_t> steps;
    steps.reserve(times.size());
    std::uint64_t prev = 0;
    bool first = true;
    for (const double t : times) {
        if (t < 0.0) throw std::invalid_argument("runner: negative output time");
        const auto idx = static_cast<std::uint64_t>(std::llround(t / dt));
        if (std::fabs(static_cast<double>(idx) * dt - t) > 1e-9 * std::max(1.0, t))
            throw std::invalid_argument("runner: output time is not a multiple of dt");
        if (!first && idx <= prev)
            throw std::invalid_argument("runner: output times must be strictly increasing");
        steps.push_back(idx);
        prev = idx;
        first = false;
    }
    return steps;
}

}  // namespace

void parallel_for_indexed(std::uint64_t count, unsigned threads,
                          const std::function<void(std::uint64_t)>& job) {
    if (count == 0) return;
    if (threads <= 1) {
        for (std::uint64_t i = 0; i < count; ++i) job(i);
        return;
    }

    std::atomic<std::uint64_t> next{0};
    std::atomic<bool> stop{false};
    std::exception_ptr first_error;
    std::mutex error_mutex;

    auto worker = [&] {
        while (!stop.load(std::memory_order_relaxed)) {
            const std::uint64_t i = next.fetch_add(1, std::memory_order_relaxed);
            if (i >= count) return;
            try {
                job(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                stop.store(true, std::memory_order_relaxed);
                return;
            }
        }
    };

    std::vector<std::thread> pool;
    const unsigned n_workers = std::min<std::uint64_t>(threads, count);
    pool.reserve(n_workers);
    for (unsigned w = 0; w < n_workers; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

ReplicaSet run_polymer_ensemble(const PolymerRunParams& params) {
    const Kernel kernel = Kernel::make(params.kernel);
    kernel.update_radius();  // build the shared derivative table before fan-out
    const std::vector<std::uint64_t> steps = schedule_steps(params.output_times, params.dt);

    ReplicaSet set;
    set.times = params.output_times;
    set.records.resize(params.replicas);

    parallel_for_indexed(params.replicas, params.threads, [&](std::uint64_t r) {
        const std::uint64_t replica_id = params.first_replica + r;
        RngStream field_rng(params.seed, replica_id, StreamPurpose::field_sample);
        RngStream path_rng(params.seed, replica_id, StreamPurpose::path_noise);
        try {
            PolymerReplica rep(kernel, params.grid, params.dt, params.mean_v, field_rng);
            PathRecord rec;
            rec.replica = replica_id;
            rec.x.reserve(steps.size());
            rec.brownian.reserve(steps.size());
            rec.drift_integral.reserve(steps.size());
            rec.drift.reserve(steps.size());
            for (const std::uint64_t target : steps) {
                while (rep.steps() < target) rep.step(path_rng);
                rec.x.push_back(rep.x());
                rec.brownian.push_back(rep.brownian_sum());
                rec.drift_integral.push_back(rep.phi_integral());
                rec.drift.push_back(rep.drift_at_particle());
            }
            set.records[r] = std::move(rec);
        } catch (const DomainExceeded& e) {
            throw DomainExceeded(e.position(), e.time(), replica_id);
        }
    });
    return set;
}

SceneryEnsemble run_scenery_ensemble(const SceneryRunParams& params) {
    const Kernel kernel = Kernel::make(params.kernel);
    const std::vector<std::uint64_t> steps = schedule_steps(params.output_times, params.dt);

    SceneryEnsemble ens;
    ens.times = params.output_times;
    ens.records.resize(params.replicas);

    parallel_for_indexed(params.replicas, params.threads, [&](std::uint64_t r) {
        const std::uint64_t replica_id = params.first_replica + r;
        RngStream field_rng(params.seed, replica_id, StreamPurpose::scenery);
        RngStream path_rng(params.seed, replica_id, StreamPurpose::path_noise);
        try {
            SceneryReplica rep(kernel, params.grid, params.dt, field_rng);
            SceneryRecord rec;
            rec.replica = replica_id;
            rec.z.reserve(steps.size());
            rec.accum.reserve(steps.size());
            std::uint64_t done = 0;
            for (const std::uint64_t target : steps) {
                while (done < target) {
                    rep.step(path_rng);
                    ++done;
                }
                rec.z.push_back(rep.z());
                rec.accum.push_back(rep.accum());
            }
            ens.records[r] = std::move(rec);
        } catch (const DomainExceeded& e) {
            throw DomainExceeded(e.position(), e.time(), replica_id);
        }
    });
    return ens;
}

StationaryEnsemble run_stationary_ensemble(const StationaryRunParams& params) {
    const Kernel kernel = Kernel::make(params.kernel);
    kernel.update_radius();
    const std::vector<std::uint64_t> steps = schedule_steps(params.t_checks, params.dt);

    const double h = params.grid.spacing();
    const auto n = static_cast<long>(params.grid.num_points_N);
    std::vector<std::size_t> lag_nodes;
    lag_nodes.reserve(params.lags.size());
    for (const double lag : params.lags) {
        const long node = std::lround(lag / h);
        if (std::fabs(static_cast<double>(node) * h - lag) > 1e-9 * std::max(1.0, std::fabs(lag)))
            throw std::invalid_argument("runner: lag is not a multiple of the grid spacing");
        long wrapped = node % n;
        if (wrapped < 0) wrapped += n;
        lag_nodes.push_back(static_cast<std::size_t>(wrapped));
    }

    StationaryEnsemble ens;
    ens.grid = params.grid;
    ens.mean_v = params.mean_v;
    ens.t_checks = params.t_checks;
    ens.lags = params.lags;
    ens.records.resize(params.replicas);

    parallel_for_indexed(params.replicas, params.threads, [&](std::uint64_t r) {
        const std::uint64_t replica_id = params.first_replica + r;
        RngStream field_rng(params.seed, replica_id, StreamPurpose::field_sample);
        RngStream path_rng(params.seed, replica_id, StreamPurpose::path_noise);
        try {
            PolymerReplica rep(kernel, params.grid, params.dt, params.mean_v, field_rng);
            StationaryObservation obs;
            obs.replica = replica_id;
            obs.eta.reserve(steps.size());
            obs.phi.reserve(steps.size());
            obs.x.reserve(steps.size());
            for (const std::uint64_t target : steps) {
                while (rep.steps() < target) rep.step(path_rng);
                const FieldGrid eta = rep.eta_view();
                std::vector<double> at_lags;
                at_lags.reserve(lag_nodes.size());
                for (const std::size_t node : lag_nodes) at_lags.push_back(eta.values[node]);
                obs.eta.push_back(std::move(at_lags));
                obs.phi.push_back(rep.drift_at_particle());
                obs.x.push_back(rep.x());
            }
            ens.records[r] = std::move(obs);
        } catch (const DomainExceeded& e) {
            throw DomainExceeded(e.position(), e.time(), replica_id);
        }
    });
    return ens;
}

double mean_local_time_residual(const LocalTimeRunParams& params) {
    const Kernel kernel = Kernel::make(params.kernel);
    kernel.update_radius();
    const auto total_steps = static_cast<std::uint64_t>(std::llround(params.horizon / params.dt));

    std::vector<double> residuals(params.replicas, 0.0);
    parallel_for_indexed(params.replicas, params.threads, [&](std::uint64_t r) {
        RngStream field_rng(params.seed, r, StreamPurpose::field_sample);
        RngStream path_rng(params.seed, r, StreamPurpose::path_noise);
        PolymerReplica rep(kernel, params.grid, params.dt, 0.0, field_rng);
        const FieldGrid zeta0 = rep.zeta();
        for (std::uint64_t i = 0; i < total_steps; ++i) rep.step(path_rng);
        residuals[r] = local_time_consistency(rep, zeta0);
    });

    double acc = 0.0;
    for (const double v : residuals) acc += v;
    return params.replicas > 0 ? acc / static_cast<double>(params.replicas) : 0.0;
}

double scenery_rate_reference(const Kernel& k, double t) {
    if (k.is_zero()) return 0.0;
    if (!(t > 0.0)) throw std::invalid_argument("scenery_rate_reference: need t > 0");
    auto averaged_b = [&](double tau) {
        auto r = integrate(
            [&](double p) { return k.b_hat(p) * std::exp(-0.5 * p * p * tau); }, 0.0,
            k.spectral_cutoff() + 2.0, {}, {1e-10, 1e-13, 200});
        return r.value / std::numbers::pi;  // half line doubled, then /(2 pi)
    };
    auto outer = integrate([&](double tau) { return (t - tau) * averaged_b(tau); }, 0.0, t, {},
                           {1e-9, 1e-12, 200});
    return 2.0 * outer.value / t;
}

}  // namespace polymer
