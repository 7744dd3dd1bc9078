#pragma once

#include <array>
#include <cstdint>

namespace halfsphere {

namespace detail {
// One Philox4x32-10 block; exposed for known-answer tests.
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> counter, std::array<std::uint32_t, 2> key);
}  // namespace detail

// Counter-based random stream (Philox4x32-10) keyed by (seed, stream).
//
// Two sources built from the same (seed, stream) produce the same sequence on
// every platform. Sources are cheap to copy but must not be shared between
// threads; derive independent ones with fork().
class RandomSource {
public:
    RandomSource(std::uint64_t seed, std::uint64_t stream);

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream() const { return stream_; }

    // Independent child stream; identical (parent, tag) pairs give identical children.
    RandomSource fork(std::uint64_t tag) const;

    std::uint32_t next_u32();
    std::uint64_t next_u64();
    // Uniform on [0, 1) with 53 random bits.
    double uniform();
    // Uniform on (0, 1].
    double uniform_open_low();
    // Standard normal via Box-Muller.
    double normal();

private:
    void refill();

    std::uint64_t seed_;
    std::uint64_t stream_;
    std::array<std::uint32_t, 2> key_;
    std::uint64_t counter_ = 0;
    std::array<std::uint32_t, 4> block_{};
    int used_ = 4;
    double spare_normal_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace halfsphere
