#pragma once

#include <array>
#include <cstdint>

namespace uqbench {

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
///
/// The block function is a pure map (counter, key) -> 128 random bits, so any
/// position of any stream can be computed without touching global state.
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> counter,
                                           std::array<std::uint32_t, 2> key);

/// SplitMix64 finalizer; used for hashing stream tags, never as a generator.
std::uint64_t mix64(std::uint64_t x);

/// Identifies one reproducible substream.
///
/// The key of the Philox block function is the seed, the upper half of the
/// counter is the stream id and the lower half counts blocks. Streams with
/// different ids therefore never share a counter value.
struct RngStream {
    std::uint64_t seed = 0;
    std::uint64_t stream_id = 0;

    /// Child stream for a sub-task (e.g. the residual points of a control
    /// variate run). The child id is a hash of (stream_id, tag).
    RngStream derive(std::uint64_t tag) const;

    bool operator==(const RngStream&) const = default;
};

/// Sequential reader over an RngStream.
class Philox {
public:
    explicit Philox(RngStream stream);

    std::uint64_t next_u64();
    std::uint32_t next_u32();

    /// 53-bit uniform in [0, 1).
    double uniform();

    /// Uniform integer in [0, bound) by rejection (no modulo bias).
    std::uint64_t below(std::uint64_t bound);

    /// Standard normal via Box-Muller on two uniforms.
    double normal();

    // UniformRandomBitGenerator interface.
    using result_type = std::uint64_t;
    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return ~result_type{0}; }
    result_type operator()() { return next_u64(); }

private:
    void refill();

    RngStream stream_;
    std::uint64_t block_ = 0;
    std::array<std::uint32_t, 4> buffer_{};
    int used_ = 4;
    bool has_spare_normal_ = false;
    double spare_normal_ = 0.0;
};

} // namespace uqbench
