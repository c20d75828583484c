#pragma once

#include <cstdint>
#include <random>
#include <string>

#include "hitdim/fixed.hpp"

namespace hitdim {

// Hyperbolic toral automorphism (x,y) -> (2x+y, x+y) mod 1 on 64-bit
// fixed-point pairs. The integer matrix acts exactly on the lattice and is
// invertible there; Lebesgue is the invariant measure.
class CatMap {
public:
    static Pt2 forward(Pt2 p)
    {
        return Pt2{Frac{p.x.raw * 2 + p.y.raw}, Frac{p.x.raw + p.y.raw}};
    }

    // inverse matrix ((1,-1),(-1,2))
    static Pt2 backward(Pt2 p)
    {
        return Pt2{Frac{p.x.raw - p.y.raw}, Frac{p.y.raw * 2 - p.x.raw}};
    }

    class CatCursor {
    public:
        using point_t = Pt2;

        CatCursor() = default;
        explicit CatCursor(Pt2 p) : p_(p) {}

        void advance() { p_ = forward(p_); }
        Pt2 point() const { return p_; }

    private:
        Pt2 p_;
    };

    using cursor_t = CatCursor;

    CatCursor cursor_at(Pt2 p) const { return CatCursor(p); }

    CatCursor sample_cursor(std::mt19937_64& rng) const { return CatCursor(sample_point(rng)); }

    Pt2 sample_point(std::mt19937_64& rng) const
    {
        std::uint64_t a = rng();
        std::uint64_t b = rng();
        return Pt2{Frac{a}, Frac{b}};
    }

    Pt2 map_point(Pt2 p) const { return forward(p); }

    std::string name() const { return "catmap"; }
};

} // namespace hitdim
