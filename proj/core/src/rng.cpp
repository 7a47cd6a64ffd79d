#include "polymerlab/rng.hpp"

namespace polymer {

std::uint64_t mix64(std::uint64_t z) noexcept {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

std::uint64_t derive_stream_seed(std::uint64_t master_seed, std::uint64_t replica,
                                 StreamPurpose purpose) noexcept {
    std::uint64_t h = mix64(master_seed);
    h = mix64(h ^ replica);
    h = mix64(h ^ static_cast<std::uint64_t>(purpose));
    return h;
}

}  // namespace polymer
