#pragma once

#include <cmath>

#include "hitdim/errors.hpp"

namespace hitdim {

// Dyadic radius schedule r_k = 2^-k for k = k_min..k_max. At least four
// scales so tail statistics are defined.
struct DyadicSchedule {
    int k_min = 0;
    int k_max = 0;

    DyadicSchedule() = default;
    DyadicSchedule(int kmin, int kmax) : k_min(kmin), k_max(kmax)
    {
        if (kmin < 1) throw DomainError("schedule k_min must be >= 1");
        if (kmax <= kmin) throw DomainError("schedule k_max must be > k_min");
        if (kmax - kmin < 3) throw DomainError("schedule needs at least 4 scales");
        if (kmax > 60) throw DomainError("schedule k_max must be <= 60");
    }

    int size() const { return k_max - k_min + 1; }
    static double radius(int k) { return std::ldexp(1.0, -k); }
};

} // namespace hitdim
