#pragma once

#include <cstdint>

namespace becphase {

/// Finalizer of the splitmix64 generator; a 64-bit bijective mixer.
std::uint64_t mix64(std::uint64_t z);

/// Small deterministic PRNG (splitmix64). Chosen over std::mt19937_64 for
/// byte-stable results across platforms and trivially splittable streams.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next();

    /// Uniform double in [0, 1) with 53 random bits.
    double next_double();

    /// +1 with probability p_plus, else -1.
    int next_sign(double p_plus);

private:
    std::uint64_t state_;
};

/// Counter-based stream derivation: stream i of a master seed. Streams are
/// independent of the order in which they are created or consumed, so
/// ensemble members can run in any schedule and still reproduce bytes.
SplitMix64 stream_for(std::uint64_t master_seed, std::uint64_t stream_index);

}  // namespace becphase
