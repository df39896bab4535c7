#include "ldtlab/rng.hpp"

namespace ldtlab {

CounterRng::CounterRng(std::uint64_t seed, Stream stream, std::uint64_t substream) noexcept {
    std::uint64_t k = splitmix64_mix(seed ^ 0x6a09e667f3bcc909ULL);
    k = splitmix64_mix(k ^ (static_cast<std::uint64_t>(stream) * 0xbb67ae8584caa73bULL));
    key_ = splitmix64_mix(k ^ (substream * 0x3c6ef372fe94f82bULL));
}

std::uint64_t CounterRng::below(std::uint64_t n) noexcept {
    unsigned __int128 m = static_cast<unsigned __int128>(next()) * n;
    std::uint64_t lo = static_cast<std::uint64_t>(m);
    if (lo < n) {
        std::uint64_t t = (0 - n) % n;
        while (lo < t) {
            m = static_cast<unsigned __int128>(next()) * n;
            lo = static_cast<std::uint64_t>(m);
        }
    }
    return static_cast<std::uint64_t>(m >> 64);
}

} // namespace ldtlab
