#pragma once

#include <cstdint>
#include <random>

namespace voldens {

/// Sub-stream identifiers. A seed plus a stream id selects an independent
/// mt19937_64 sequence, so one ScenarioConfig seed can drive several
/// processes without overlap.
enum class Stream : std::uint32_t {
    OuFactor0 = 1,
    OuFactor1 = 2,
    RegimeChain = 3,
    Brownian = 4,
    ArInnovation = 5,
    LogChiNoise = 6,
    Signal = 7,
};

/// Seeded random source used throughout the simulators. Draws go through
/// Boost.Random distributions, whose algorithms are fixed across platforms.
class RandomStream {
public:
    RandomStream(std::uint64_t seed, Stream stream);

    double normal();
    double uniform();  ///< in [0, 1)

    std::mt19937_64& engine() noexcept { return engine_; }

private:
    std::mt19937_64 engine_;
};

/// SplitMix64 finaliser; used to derive per-replication seeds from a base seed.
std::uint64_t mix_seed(std::uint64_t value) noexcept;

}  // namespace voldens
