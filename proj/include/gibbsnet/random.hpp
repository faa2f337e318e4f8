#pragma once

#include <array>
#include <cstdint>

namespace gibbsnet {

/// Philox4x32-10 block function (Salmon et al., "Parallel random numbers: as easy as 1, 2, 3").
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

/// Identifies the random substream of one sampled network.
struct SeedSpec {
    std::uint64_t master_seed = 0;
    std::uint64_t sample_index = 0;

    bool operator==(const SeedSpec&) const = default;
};

/// Separates the draws made for different purposes at the same sample index.
enum class StreamPurpose : std::uint32_t {
    Params = 1,
    Architecture = 2,
    Split = 3,
    Aux = 4,
};

/// Sequential reader over the Philox counter space of one (seed, index, purpose).
///
/// The counter is (index lo, index hi, purpose, block) and the key is the
/// master seed, so each substream is a pure function of its SeedSpec and
/// independent of every other index.
class Substream {
public:
    Substream(SeedSpec seed, StreamPurpose purpose);

    std::uint32_t next_u32();
    std::uint64_t next_u64();
    /// Uniform on [0, 1) with 53 random bits.
    double uniform01();
    /// Uniform on (0, 1].
    double uniform01_open_low();
    /// Unbiased integer in [0, bound); bound must be positive.
    std::uint64_t below(std::uint64_t bound);
    /// Standard normal via Box-Muller (one variate per call).
    double normal();

private:
    void refill();

    std::array<std::uint32_t, 2> key_;
    std::array<std::uint32_t, 4> counter_;
    std::array<std::uint32_t, 4> buffer_{};
    unsigned used_ = 4;
};

}  // namespace gibbsnet
