#include <benchmark/benchmark.h>

#include "polymerlab/bounds.hpp"
#include "polymerlab/dynamics.hpp"
#include "polymerlab/field.hpp"
#include "polymerlab/kernels.hpp"
#include "polymerlab/rng.hpp"

using namespace polymer;

namespace {

const Kernel& gaussian_kernel() {
    static const Kernel k = Kernel::make("gaussian", 1.0, 0.0, 1.0);
    return k;
}

// Cost of one coupled particle/environment step; the field update over the
// kernel's support window dominates.
void BM_polymer_step(benchmark::State& state) {
    const GridSpec spec{256.0, static_cast<std::size_t>(state.range(0))};
    const double dt = 0.25 * spec.spacing() * spec.spacing();
    RngStream field_rng(2024, 0, StreamPurpose::field_sample);
    RngStream path_rng(2024, 0, StreamPurpose::path_noise);
    PolymerReplica replica(gaussian_kernel(), spec, dt, 0.0, field_rng);
    for (auto _ : state) {
        replica.step(path_rng);
        benchmark::DoNotOptimize(replica.x());
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()));
}

// Scenery reference step: interpolation plus a Brownian increment only.
void BM_scenery_step(benchmark::State& state) {
    const GridSpec spec{256.0, 4096};
    RngStream field_rng(2024, 1, StreamPurpose::scenery);
    RngStream path_rng(2024, 1, StreamPurpose::path_noise);
    SceneryReplica replica(gaussian_kernel(), spec, 1e-3, field_rng);
    for (auto _ : state) {
        replica.step(path_rng);
        benchmark::DoNotOptimize(replica.accum());
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()));
}

// Spectral synthesis of one stationary field draw (FFT-bound).
void BM_field_synthesis(benchmark::State& state) {
    const GridSpec spec{256.0, static_cast<std::size_t>(state.range(0))};
    RngStream rng(2024, 2, StreamPurpose::field_sample);
    for (auto _ : state) {
        const FieldGrid f = sample_stationary(gaussian_kernel(), spec, rng);
        benchmark::DoNotOptimize(f.values.data());
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()));
}

// Tabulated derivative lookup on the dynamics hot path.
void BM_kernel_derivative(benchmark::State& state) {
    const Kernel& k = gaussian_kernel();
    double x = -4.0;
    double acc = 0.0;
    for (auto _ : state) {
        acc += k.b_prime_fast(x);
        x += 1e-4;
        if (x > 4.0) x = -4.0;
    }
    benchmark::DoNotOptimize(acc);
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()));
}

// Resolvent quadrature at a moderately small rate.
void BM_resolvent(benchmark::State& state) {
    for (auto _ : state) {
        const double v = resolvent_upper(gaussian_kernel(), 1e-3);
        benchmark::DoNotOptimize(v);
    }
}

// Variational lower bound: grid assembly plus a dense symmetric solve.
void BM_variational_bound(benchmark::State& state) {
    const auto per_side = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) {
        const FrequencyGrid grid = variational_grid(gaussian_kernel(), 1e-3, per_side);
        const double v = lower_bound_variational(gaussian_kernel(), 1e-3, grid);
        benchmark::DoNotOptimize(v);
    }
}

BENCHMARK(BM_polymer_step)->Arg(2048)->Arg(4096)->Arg(8192);
BENCHMARK(BM_scenery_step);
BENCHMARK(BM_field_synthesis)->Arg(4096)->Arg(16384);
BENCHMARK(BM_kernel_derivative);
BENCHMARK(BM_resolvent);
BENCHMARK(BM_variational_bound)->Arg(128)->Arg(256);

}  // namespace

BENCHMARK_MAIN();
