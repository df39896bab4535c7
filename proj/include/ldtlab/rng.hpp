#pragma once

#include <cstdint>

namespace ldtlab {

// Stream ids. Each consumer of randomness draws from its own stream so
// changing one stage never shifts the draws of another.
enum class Stream : std::uint64_t {
    plant_poly = 1,
    plant_points = 2,
    plant_values = 3,
    sampler = 4,
    grid = 5,
    advice = 6,
    test = 7,
};

inline constexpr std::uint64_t splitmix64_mix(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Counter-based generator: output i is a pure function of (seed, stream,
// substream, i), so any draw can be reproduced without replaying others.
class CounterRng {
public:
    CounterRng(std::uint64_t seed, Stream stream, std::uint64_t substream = 0) noexcept;

    std::uint64_t at(std::uint64_t counter) const noexcept {
        return splitmix64_mix(key_ + (counter + 1) * 0x9e3779b97f4a7c15ULL);
    }
    std::uint64_t next() noexcept { return at(counter_++); }
    // Uniform in [0, n), n > 0. Lemire multiply-shift with rejection.
    std::uint64_t below(std::uint64_t n) noexcept;
    // Uniform double in [0, 1).
    double uniform01() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
    std::uint64_t counter() const noexcept { return counter_; }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

} // namespace ldtlab
