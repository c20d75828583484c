#pragma once

#include <cstdint>
#include <numeric>
#include <string>

#include "hitdim/errors.hpp"
#include "hitdim/fixed.hpp"

namespace hitdim {

// Exact rational on int64 with 128-bit intermediates. Interval-exchange
// machinery keeps every value over one shared denominator, so reduced
// results stay far below the overflow guard; the guard throws rather than
// silently wrapping if a caller strays.
struct Rat {
    long long num = 0;
    long long den = 1;

    Rat() = default;
    Rat(long long n, long long d)
    {
        if (d == 0) throw DomainError("rational with zero denominator");
        if (d < 0) { n = -n; d = -d; }
        long long g = std::gcd(n < 0 ? -n : n, d);
        if (g > 1) { n /= g; d /= g; }
        num = n;
        den = d;
    }
    static Rat from_int(long long n) { return Rat(n, 1); }

    double value() const { return static_cast<double>(num) / static_cast<double>(den); }

    Frac to_frac() const
    {
        Rat r = mod1();
        return Frac::from_ratio(static_cast<std::uint64_t>(r.num), static_cast<std::uint64_t>(r.den));
    }

    Rat mod1() const
    {
        long long n = num % den;
        if (n < 0) n += den;
        Rat r;
        r.num = n;
        r.den = den;
        return r;
    }

    std::string str() const { return std::to_string(num) + "/" + std::to_string(den); }

private:
    static Rat make_checked(__int128 n, __int128 d)
    {
        if (d < 0) { n = -n; d = -d; }
        __int128 a = n < 0 ? -n : n;
        // binary gcd on __int128 via std::gcd of chunks is unavailable; use Euclid
        __int128 x = a, y = d;
        while (y != 0) { __int128 t = x % y; x = y; y = t; }
        if (x > 1) { n /= x; d /= x; }
        const __int128 lim = static_cast<__int128>(0x7fffffffffffffffll);
        if (n > lim || n < -lim || d > lim)
            throw OverflowError("rational overflow");
        Rat r;
        r.num = static_cast<long long>(n);
        r.den = static_cast<long long>(d);
        return r;
    }

public:
    friend Rat operator+(const Rat& a, const Rat& b)
    {
        return make_checked((__int128)a.num * b.den + (__int128)b.num * a.den,
                            (__int128)a.den * b.den);
    }
    friend Rat operator-(const Rat& a, const Rat& b)
    {
        return make_checked((__int128)a.num * b.den - (__int128)b.num * a.den,
                            (__int128)a.den * b.den);
    }
    friend Rat operator*(const Rat& a, const Rat& b)
    {
        return make_checked((__int128)a.num * b.num, (__int128)a.den * b.den);
    }
    friend bool operator==(const Rat& a, const Rat& b) { return a.num == b.num && a.den == b.den; }
    friend bool operator!=(const Rat& a, const Rat& b) { return !(a == b); }
    friend bool operator<(const Rat& a, const Rat& b)
    {
        return (__int128)a.num * b.den < (__int128)b.num * a.den;
    }
    friend bool operator<=(const Rat& a, const Rat& b) { return !(b < a); }
    friend bool operator>(const Rat& a, const Rat& b) { return b < a; }
    friend bool operator>=(const Rat& a, const Rat& b) { return !(a < b); }
};

// min(|a-b|, 1-|a-b|) for a, b in [0,1).
inline Rat circle_gap(const Rat& a, const Rat& b)
{
    Rat d = (a < b ? b - a : a - b);
    Rat e = Rat(1, 1) - d;
    return d < e ? d : e;
}

} // namespace hitdim
