#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace klim {

using Rng = std::mt19937_64;

/// Uniform draw from [0, n) by rejection; unlike std::uniform_int_distribution
/// the sequence is the same on every standard library.
inline std::size_t uniform_index(Rng& rng, std::size_t n)
{
    if (n <= 1)
        return 0;
    const std::uint64_t bound = static_cast<std::uint64_t>(n);
    const std::uint64_t limit = Rng::max() - (Rng::max() % bound);
    std::uint64_t x;
    do
        x = rng();
    while (x >= limit);
    return static_cast<std::size_t>(x % bound);
}

inline bool coin(Rng& rng)
{
    return (rng() >> 63) != 0;
}

} // namespace klim
