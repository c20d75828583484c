#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <random>

namespace hitdim {

// splitmix64 step; used only for seed derivation, orbits never touch it.
inline std::uint64_t splitmix64(std::uint64_t& state)
{
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

// Deterministic seed for a named sub-stream: trials, spec draws and targets
// each get an independent generator so thread scheduling cannot reorder draws.
inline std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path)
{
    std::uint64_t s = master;
    (void)splitmix64(s);
    for (std::uint64_t v : path) {
        s ^= v + 0x9e3779b97f4a7c15ull + (s << 6) + (s >> 2);
        (void)splitmix64(s);
    }
    std::uint64_t t = s;
    return splitmix64(t);
}

inline std::mt19937_64 make_rng(std::uint64_t master, std::initializer_list<std::uint64_t> path)
{
    return std::mt19937_64(derive_seed(master, path));
}

// Uniform double in (0,1); never returns an exact endpoint.
inline double unit_open(std::mt19937_64& rng)
{
    return (static_cast<double>(rng() >> 11) + 0.5) * 0x1p-53;
}

inline double exp_draw(std::mt19937_64& rng)
{
    return -std::log(unit_open(rng));
}

// Unbiased integer in [0, m) by rejection.
inline std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t m)
{
    const std::uint64_t limit = m * ((~std::uint64_t{0}) / m);
    for (;;) {
        std::uint64_t u = rng();
        if (u < limit) return u % m;
    }
}

} // namespace hitdim
