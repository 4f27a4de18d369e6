#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string_view>

namespace wfoot {

// One round-10 Philox4x32 block (Salmon et al., SC 2011). Exposed for
// known-answer tests.
std::array<std::uint32_t, 4> philox4x32_block(std::array<std::uint32_t, 4> counter,
                                              std::array<std::uint32_t, 2> key);

// A counter-based random stream. Streams are addressed as
// (seed, stream_hi, stream_lo); distinct addresses yield statistically
// independent sequences, and a stream's output depends only on its address
// and the number of draws consumed, never on other streams. This makes
// replicated experiments reproducible under any parallel schedule.
class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint32_t stream_hi, std::uint32_t stream_lo);

    std::uint32_t next_u32();
    std::uint64_t next_u64();

    // Uniform double strictly inside (0,1): 53 random bits, with the
    // (probability 2^-53) exact zero nudged up one step.
    double next_unit();

    // Standard normal via inverse-CDF of next_unit().
    double next_normal();

    // Exponential(1) via inversion.
    double next_exponential();

private:
    void refill();

    std::array<std::uint32_t, 2> key_;
    std::uint64_t block_ = 0;
    std::uint32_t stream_lo_ = 0;
    std::uint32_t stream_hi_ = 0;
    std::array<std::uint32_t, 4> buffer_{};
    int buffered_ = 0;
};

// 64-bit FNV-1a, used to derive stable stream identifiers from scenario
// descriptions.
std::uint64_t fnv1a64(const void* data, std::size_t size);
std::uint64_t fnv1a64(std::string_view text);

}  // namespace wfoot
