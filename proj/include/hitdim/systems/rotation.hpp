#pragma once

#include <cstdint>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "hitdim/errors.hpp"
#include "hitdim/fixed.hpp"
#include "hitdim/rational.hpp"

namespace hitdim {

// Circle rotation by an exact rational p/q, realized as the final convergent
// of a continued fraction [0; a_1, a_2, ...]. Fast-growing quotient lists
// reproduce the anomalous hitting behavior of badly-approximated rotation
// numbers at every observable scale; experiments must keep radii well above
// the resolution 1/q^2 of the convergent.
class Rotation {
public:
    static Rotation from_quotients(const std::vector<std::uint64_t>& quotients)
    {
        if (quotients.empty()) throw DomainError("rotation needs at least one partial quotient");
        unsigned __int128 p_prev = 1, q_prev = 0; // k = -1
        unsigned __int128 p = 0, q = 1;           // k = 0
        for (std::uint64_t a : quotients) {
            if (a == 0) throw DomainError("rotation partial quotients must be positive");
            unsigned __int128 pn = (unsigned __int128)a * p + p_prev;
            unsigned __int128 qn = (unsigned __int128)a * q + q_prev;
            if (qn > ((unsigned __int128)1 << 62)) throw OverflowError("rotation convergent overflow");
            p_prev = p; q_prev = q;
            p = pn; q = qn;
        }
        Rotation r(static_cast<std::uint64_t>(p), static_cast<std::uint64_t>(q));
        r.quotients_ = quotients;
        return r;
    }

    static Rotation from_fraction(std::uint64_t p, std::uint64_t q)
    {
        if (q == 0 || p >= q) throw DomainError("rotation number must lie in (0,1)");
        std::uint64_t g = std::gcd(p, q);
        return Rotation(p / g, q / g);
    }

    std::uint64_t p() const { return p_; }
    std::uint64_t q() const { return q_; }
    Rat alpha() const { return Rat(static_cast<long long>(p_), static_cast<long long>(q_)); }

    Rat apply(const Rat& x) const { return (x + alpha()).mod1(); }

    class RotCursor {
    public:
        using point_t = Frac;

        RotCursor() = default;
        RotCursor(const Rotation* spec, unsigned __int128 num) : spec_(spec), num_(num) {}

        void advance()
        {
            num_ += spec_->stepQ_;
            if (num_ >= spec_->Q_) num_ -= spec_->Q_;
        }

        Frac point() const
        {
            if (spec_->scaleQ_ == 1) return Frac{static_cast<std::uint64_t>(num_)};
            return Frac{static_cast<std::uint64_t>(num_ / spec_->scaleQ_)};
        }

    private:
        const Rotation* spec_ = nullptr;
        unsigned __int128 num_ = 0;
    };

    using cursor_t = RotCursor;

    RotCursor cursor_at(Frac x) const
    {
        return RotCursor(this, (unsigned __int128)x.raw * scaleQ_);
    }

    RotCursor cursor_at_rat(const Rat& x) const
    {
        // exact embedding when the denominator divides q (e.g. orbit of 0)
        Rat v = x.mod1();
        if (q_ % static_cast<std::uint64_t>(v.den) != 0)
            throw DomainError("rotation cursor requires denominator dividing q");
        unsigned __int128 numQ =
            (unsigned __int128)(v.num * static_cast<long long>(q_ / v.den)) * (Q_ / q_);
        return RotCursor(this, numQ);
    }

    Frac map_point(Frac x) const
    {
        RotCursor c = cursor_at(x);
        c.advance();
        return c.point();
    }

    // Lebesgue is the invariant measure.
    RotCursor sample_cursor(std::mt19937_64& rng) const { return cursor_at(Frac{rng()}); }
    Frac sample_point(std::mt19937_64& rng) const { return Frac{rng()}; }

    std::string name() const
    {
        return "rotation(" + std::to_string(p_) + "/" + std::to_string(q_) + ")";
    }

    const std::vector<std::uint64_t>& quotients() const { return quotients_; }

private:
    Rotation(std::uint64_t p, std::uint64_t q) : p_(p), q_(q)
    {
        std::uint64_t g2 = q_ & (~q_ + 1); // power-of-two part of q
        scaleQ_ = q_ / g2;
        Q_ = (unsigned __int128)scaleQ_ << 64;
        // step = alpha * Q = p * 2^64 / g2
        stepQ_ = ((unsigned __int128)p_ << 64) / g2;
    }

    std::uint64_t p_ = 0, q_ = 1;
    std::vector<std::uint64_t> quotients_;
    std::uint64_t scaleQ_ = 1;
    unsigned __int128 Q_ = 0;
    unsigned __int128 stepQ_ = 0;
};

} // namespace hitdim
