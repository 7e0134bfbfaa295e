#pragma once

#include <cstdint>

namespace cmh {

/// Purpose tags used to split one master seed into independent streams.
enum class Purpose : std::uint64_t {
    Sigma = 0x5349474d41ULL,
    Pi = 0x5049ULL,
    MinHash = 0x4d494e48ULL,
    Synth = 0x53594e54ULL,
    Trial = 0x545249414cULL,
    Dataset = 0x44415441ULL,
};

inline constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Derive a child key from (parent, tag, index). Pure function, no state.
inline constexpr std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t tag,
                                           std::uint64_t index = 0) noexcept {
    return splitmix64(splitmix64(parent ^ splitmix64(tag)) + index);
}

inline constexpr std::uint64_t derive_seed(std::uint64_t parent, Purpose tag,
                                           std::uint64_t index = 0) noexcept {
    return derive_seed(parent, static_cast<std::uint64_t>(tag), index);
}

/// Counter-based generator: output n is splitmix64(key + n * golden).
/// Streams with different keys are independent for all practical purposes and
/// output depends only on (key, counter), never on platform or library version.
class CounterRng {
public:
    explicit constexpr CounterRng(std::uint64_t key) noexcept : key_(key) {}

    constexpr std::uint64_t next() noexcept {
        return splitmix64(key_ + 0x9e3779b97f4a7c15ULL * counter_++);
    }

    /// Uniform integer in [0, bound). bound must be > 0. Lemire's multiply-shift with rejection.
    std::uint64_t below(std::uint64_t bound) noexcept {
        unsigned __int128 m = static_cast<unsigned __int128>(next()) * bound;
        auto low = static_cast<std::uint64_t>(m);
        if (low < bound) {
            const std::uint64_t threshold = (0 - bound) % bound;
            while (low < threshold) {
                m = static_cast<unsigned __int128>(next()) * bound;
                low = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    std::uint64_t key() const noexcept { return key_; }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

}  // namespace cmh
