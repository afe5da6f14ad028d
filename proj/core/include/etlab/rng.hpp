#pragma once

#include <array>
#include <cstdint>

namespace etlab {

/// Philox4x32-10 block function (Salmon et al., SC'11).
struct Philox4x32 {
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static constexpr Counter apply(Counter ctr, Key key) noexcept {
        for (int round = 0; round < 10; ++round) {
            if (round > 0) {
                key[0] += 0x9E3779B9u;
                key[1] += 0xBB67AE85u;
            }
            const std::uint64_t p0 = std::uint64_t{0xD2511F53u} * ctr[0];
            const std::uint64_t p1 = std::uint64_t{0xCD9E8D57u} * ctr[2];
            ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0],
                   static_cast<std::uint32_t>(p1),
                   static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1],
                   static_cast<std::uint32_t>(p0)};
        }
        return ctr;
    }
};

constexpr std::uint64_t splitmix64(std::uint64_t z) noexcept {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

/// Labels for the independent streams drawn from one user seed. They are
/// recorded in sample-store manifests, so values must never be reused.
enum class Stream : std::uint32_t {
    model_phase = 1,
    grid_jitter = 2,
    grid_uniform = 3,
    relation_search = 4,
};

/// Counter-based generator: every draw is a pure function of
/// (seed, index, lane, stream), so parallel consumers need no shared state.
class CounterRng {
  public:
    constexpr explicit CounterRng(std::uint64_t seed) noexcept : seed_(seed) {}

    constexpr std::uint64_t seed() const noexcept { return seed_; }

    constexpr std::array<std::uint32_t, 4> block(std::uint64_t index, std::uint32_t lane,
                                                 Stream stream) const noexcept {
        return Philox4x32::apply(
            {static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32), lane,
             static_cast<std::uint32_t>(stream)},
            {static_cast<std::uint32_t>(seed_), static_cast<std::uint32_t>(seed_ >> 32)});
    }

    /// Uniform on [0, 1) with 53 random bits.
    constexpr double uniform(std::uint64_t index, std::uint32_t lane, Stream stream) const noexcept {
        const auto b = block(index, lane, stream);
        const std::uint64_t bits = (std::uint64_t{b[0]} << 32) | b[1];
        return static_cast<double>(bits >> 11) * 0x1.0p-53;
    }

    constexpr std::uint64_t bits64(std::uint64_t index, std::uint32_t lane, Stream stream) const noexcept {
        const auto b = block(index, lane, stream);
        return (std::uint64_t{b[2]} << 32) | b[3];
    }

    /// Derived generator for a labelled sub-experiment.
    constexpr CounterRng split(std::uint64_t label) const noexcept {
        return CounterRng(splitmix64(seed_ ^ splitmix64(label)));
    }

  private:
    std::uint64_t seed_;
};

}  // namespace etlab
