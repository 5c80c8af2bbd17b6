#include "becphase/rng.hpp"

namespace becphase {

namespace {
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;
}

std::uint64_t mix64(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ull;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBull;
    z ^= z >> 31;
    return z;
}

std::uint64_t SplitMix64::next() {
    state_ += kGolden;
    return mix64(state_);
}

double SplitMix64::next_double() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

int SplitMix64::next_sign(double p_plus) {
    return next_double() < p_plus ? +1 : -1;
}

SplitMix64 stream_for(std::uint64_t master_seed, std::uint64_t stream_index) {
    // The seed of stream i is the i-th output of a splitmix sequence rooted
    // at the master seed, so streams never overlap and are order-independent.
    return SplitMix64(mix64(master_seed + (stream_index + 1) * kGolden));
}

}  // namespace becphase
