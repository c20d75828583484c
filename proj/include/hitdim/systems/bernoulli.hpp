#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string>

#include "hitdim/errors.hpp"
#include "hitdim/fixed.hpp"
#include "hitdim/rational.hpp"
#include "hitdim/rng.hpp"

namespace hitdim {

// Doubling map x -> 2x mod 1 realized as a left shift on a lazily extended
// binary digit stream. Gives exact dynamics (a plain float orbit collapses
// to 0 within 53 steps) and exact Bernoulli(p) sampling in one mechanism:
// fresh digits are i.i.d. Bernoulli(p) from a seeded generator, or the exact
// binary expansion of a rational for deterministic test orbits.
class Doubling {
public:
    explicit Doubling(double p) : p_(p)
    {
        if (!(p > 0.0 && p < 1.0)) throw DomainError("doubling digit probability must be in (0,1)");
        p_thresh_ = static_cast<std::uint64_t>(std::ldexp(p, 64));
    }

    double p() const { return p_; }

    class DigitCursor {
    public:
        using point_t = Frac;

        void advance() { window_ = (window_ << 1) | next_digit(); }

        // value of the next 64 digits; exact to the working precision
        Frac point() const { return Frac{window_}; }

        friend class Doubling;

    private:
        enum class Source { random, rational };

        std::uint64_t next_digit()
        {
            if (source_ == Source::random)
                return rng_() < p_thresh_ ? 1u : 0u;
            // exact long division: next binary digit of num/den
            num_ <<= 1;
            if (num_ >= den_) {
                num_ -= den_;
                return 1u;
            }
            return 0u;
        }

        std::uint64_t window_ = 0;
        Source source_ = Source::random;
        std::uint64_t p_thresh_ = 0;
        std::mt19937_64 rng_;
        std::uint64_t num_ = 0, den_ = 1;
    };

    using cursor_t = DigitCursor;

    // Stream of i.i.d. Bernoulli(p) digits: a point distributed per the
    // invariant measure, with its whole symbolic future determined by rng.
    DigitCursor sample_cursor(std::mt19937_64& rng) const
    {
        DigitCursor c;
        c.source_ = DigitCursor::Source::random;
        c.p_thresh_ = p_thresh_;
        c.rng_ = std::mt19937_64(rng());
        for (int i = 0; i < 64; ++i) c.advance();
        return c;
    }

    Frac sample_point(std::mt19937_64& rng) const
    {
        std::mt19937_64 own(rng());
        std::uint64_t w = 0;
        for (int i = 0; i < 64; ++i) w = (w << 1) | (own() < p_thresh_ ? 1u : 0u);
        return Frac{w};
    }

    // Exact orbit of a rational point (binary expansion by long division).
    DigitCursor cursor_at_rat(const Rat& x) const
    {
        Rat v = x.mod1();
        if (v.den > (1ll << 62)) throw OverflowError("doubling rational denominator too large");
        DigitCursor c;
        c.source_ = DigitCursor::Source::rational;
        c.num_ = static_cast<std::uint64_t>(v.num);
        c.den_ = static_cast<std::uint64_t>(v.den);
        for (int i = 0; i < 64; ++i) c.advance();
        return c;
    }

    // Snapshot-level map (shifts a zero in; only the deepest digit differs
    // from the true image, fine for ball centers at observable radii).
    Frac map_point(Frac x) const { return Frac{x.raw << 1}; }

    std::string name() const
    {
        char buf[48];
        std::snprintf(buf, sizeof buf, "doubling(p=%g)", p_);
        return std::string(buf);
    }

private:
    double p_;
    std::uint64_t p_thresh_;
};

} // namespace hitdim
