#pragma once

#include <cstdint>
#include <random>

namespace polymer {

// Purpose tags separate the substreams a replica consumes (environment
// synthesis, path noise, ...) so that adding draws to one never perturbs
// another, and so that replica r is reproducible in isolation.
enum class StreamPurpose : std::uint64_t {
    field_sample = 1,
    path_noise = 2,
    test_function = 3,
    scenery = 4,
};

// splitmix64 finalizer; full-avalanche 64-bit mixer.
std::uint64_t mix64(std::uint64_t z) noexcept;

// Counter-based stream derivation: the generator state depends only on
// (master seed, replica index, purpose), never on scheduling order.
std::uint64_t derive_stream_seed(std::uint64_t master_seed, std::uint64_t replica,
                                 StreamPurpose purpose) noexcept;

class RngStream {
  public:
    RngStream(std::uint64_t master_seed, std::uint64_t replica, StreamPurpose purpose)
        : gen_(derive_stream_seed(master_seed, replica, purpose)) {}

    double normal() { return normal_(gen_); }
    double uniform() { return uniform_(gen_); }
    std::uint64_t raw() { return gen_(); }

  private:
    std::mt19937_64 gen_;
    std::normal_distribution<double> normal_{0.0, 1.0};
    std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

}  // namespace polymer
