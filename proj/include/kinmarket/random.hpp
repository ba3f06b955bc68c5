#pragma once

#include <cstdint>
#include <limits>

namespace kinmarket {

/// Counter-based random stream keyed by (seed, step, agent).
///
/// Every (seed, step, agent) triple owns an independent SplitMix64 sequence,
/// so the draws an agent sees at a given step do not depend on how the agent
/// loop is scheduled across threads. Satisfies UniformRandomBitGenerator.
class RandomStream {
public:
    using result_type = std::uint64_t;

    explicit RandomStream(std::uint64_t seed, std::uint64_t step = 0, std::uint64_t agent = 0) noexcept
        : state_(mix(mix(mix(seed) ^ (step + 0x632be59bd9b4e019ULL)) ^ (agent + 0x8cb92ba72f3d8dd7ULL))) {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    result_type operator()() noexcept {
        state_ += 0x9e3779b97f4a7c15ULL;
        return mix(state_);
    }

private:
    static constexpr std::uint64_t mix(std::uint64_t z) noexcept {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::uint64_t state_;
};

} // namespace kinmarket
