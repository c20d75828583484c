#pragma once

#include <cmath>
#include <cstdint>

namespace hitdim {

// One circle coordinate as a 64-bit fixed-point fraction: value = raw / 2^64,
// always in [0,1). The maps that matter here (cat map, doubling map, dyadic
// interval exchanges) act exactly on this lattice, so orbits never drift.
struct Frac {
    std::uint64_t raw = 0;

    double value() const { return std::ldexp(static_cast<double>(raw), -64); }

    // Reduces mod 1 and truncates to the lattice.
    static Frac from_double(double v)
    {
        double u = v - std::floor(v);
        if (u >= 1.0) u = 0.0;
        return Frac{static_cast<std::uint64_t>(std::ldexp(u, 64))};
    }

    // floor(num * 2^64 / den); exact when den is a power of two.
    static Frac from_ratio(std::uint64_t num, std::uint64_t den)
    {
        num %= den;
        return Frac{static_cast<std::uint64_t>(((unsigned __int128)num << 64) / den)};
    }

    friend bool operator==(Frac a, Frac b) { return a.raw == b.raw; }
};

// Point on the 2-torus, sup metric.
struct Pt2 {
    Frac x, y;
    friend bool operator==(Pt2 a, Pt2 b) { return a.x == b.x && a.y == b.y; }
};

// Circular distance in lattice units: min(|a-b|, 1-|a-b|) * 2^64. Exact.
inline std::uint64_t dist_raw(Frac a, Frac b)
{
    std::uint64_t d = a.raw - b.raw; // wraps mod 2^64
    std::uint64_t e = std::uint64_t{0} - d;
    return d < e ? d : e;
}

inline std::uint64_t dist_raw(Pt2 a, Pt2 b)
{
    std::uint64_t dx = dist_raw(a.x, b.x);
    std::uint64_t dy = dist_raw(a.y, b.y);
    return dx > dy ? dx : dy;
}

inline double circle_distance(Frac a, Frac b)
{
    return std::ldexp(static_cast<double>(dist_raw(a, b)), -64);
}

inline double torus_distance(Pt2 a, Pt2 b)
{
    return std::ldexp(static_cast<double>(dist_raw(a, b)), -64);
}

// Open-ball membership test, resolved to an exact integer compare:
// dist < r  <=>  dist_raw < thresh (or the ball is the whole space).
struct Ball {
    std::uint64_t thresh = 0;
    bool whole = false;

    bool contains_raw(std::uint64_t d) const { return whole || d < thresh; }
};

inline Ball ball_radius(double r)
{
    if (r >= 1.0 - 0x1p-53) return Ball{0, true};
    if (r <= 0.0) return Ball{0, false};
    // r * 2^64 is exact (scaling by a power of two); ceil handles the
    // sub-lattice case r < 2^-11 where the product is not integral.
    double t = std::ceil(std::ldexp(r, 64));
    return Ball{static_cast<std::uint64_t>(t), false};
}

// r = 2^-k for k in [1, 63].
inline Ball ball_radius_dyadic(int k)
{
    if (k <= 0) return Ball{0, true};
    if (k >= 64) return Ball{1, false};
    return Ball{std::uint64_t{1} << (64 - k), false};
}

} // namespace hitdim
