#pragma once

#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

#include "hitdim/errors.hpp"
#include "hitdim/fixed.hpp"
#include "hitdim/scaling.hpp"

namespace hitdim {

// Observable f(x) = distance(x, pole)^-alpha, the power law exactly.
// alpha = 0 degenerates to the constant 1 and is admitted for bounded-case
// tests. Distances below floor_dist contribute the capped value
// floor_dist^-alpha; an exact landing on the pole is possible in exact
// arithmetic and flags the trace instead of aborting it.
struct SingularObservable {
    double alpha = 1.0;
    double floor_dist = 0x1p-60;

    double eval_raw(std::uint64_t draw) const
    {
        if (alpha == 0.0) return 1.0;
        double d = std::ldexp(static_cast<double>(draw), -64);
        if (d < floor_dist) d = floor_dist;
        return pow_neg_alpha(d);
    }

    double pow_neg_alpha(double d) const
    {
        if (alpha == 2.0) {
            double inv = 1.0 / d;
            return inv * inv;
        }
        if (alpha == 3.0) {
            double inv = 1.0 / d;
            return inv * inv * inv;
        }
        if (alpha == 1.0) return 1.0 / d;
        if (alpha == 1.5) return 1.0 / (d * std::sqrt(d));
        return std::pow(d, -alpha);
    }
};

// Running sums S_n = sum_{i=0..n} f(T^i(x)) recorded at the dyadic
// checkpoints n = 2^j; O(log N) memory for an N-step orbit.
struct BirkhoffTrace {
    std::vector<std::pair<int, double>> checkpoints; // (j, S_{2^j})
    bool pole_hit = false;
    std::uint64_t n_steps = 0;
};

// Kahan-compensated accumulation: the sums span many orders of magnitude
// when the orbit shadows the pole.
template <class Cursor, class Pt>
BirkhoffTrace birkhoff_trace(Cursor cur, Pt pole, const SingularObservable& obs, std::uint64_t n_final)
{
    if (n_final < (1u << 8)) throw DomainError("birkhoff_trace needs at least 2^8 steps");
    std::uint64_t d0 = dist_raw(cur.point(), pole);
    if (d0 == 0 && obs.alpha != 0.0)
        throw DomainError("birkhoff_trace start point coincides with the pole");

    BirkhoffTrace trace;
    trace.n_steps = n_final;

    double sum = obs.eval_raw(d0); // i = 0 term
    double comp = 0.0;
    std::uint64_t next_checkpoint = 1;
    int j = 0;
    for (std::uint64_t n = 1; n <= n_final; ++n) {
        cur.advance();
        std::uint64_t d = dist_raw(cur.point(), pole);
        if (d == 0) trace.pole_hit = true;
        double term = obs.eval_raw(d) - comp;
        double t = sum + term;
        comp = (t - sum) - term;
        sum = t;
        if (n == next_checkpoint) {
            trace.checkpoints.emplace_back(j, sum);
            ++j;
            next_checkpoint <<= 1;
        }
    }
    return trace;
}

// Plain double accumulation over a re-run of the same orbit; reference for
// the compensated kernel.
template <class Cursor, class Pt>
double birkhoff_sum_naive(Cursor cur, Pt pole, const SingularObservable& obs, std::uint64_t n_final)
{
    double sum = obs.eval_raw(dist_raw(cur.point(), pole));
    for (std::uint64_t n = 1; n <= n_final; ++n) {
        cur.advance();
        sum += obs.eval_raw(dist_raw(cur.point(), pole));
    }
    return sum;
}

// Growth exponent of S_n: fit of log2 S_{2^j} against j. slope_tail_max is
// the limsup surrogate. Checkpoint j = 0 is skipped (ratio undefined).
inline ScalingEstimate growth_exponent(const BirkhoffTrace& trace, double tail_fraction)
{
    std::vector<std::pair<int, double>> samples;
    for (const auto& [j, s] : trace.checkpoints)
        if (j >= 1) samples.emplace_back(j, std::log2(s));
    if (samples.size() < 4)
        throw InsufficientData("growth_exponent needs at least 4 checkpoints", 0);
    return fit_scaling(std::move(samples), tail_fraction);
}

// Two-sided test of the growth exponent against the hitting-indicator band
// [alpha / R_upper, alpha / R_lower + 1] with the configured slack.
struct SandwichVerdict {
    bool pass = false;
    double exponent = 0.0;
    double lower_req = 0.0;
    double upper_req = 0.0;
};

inline SandwichVerdict sandwich_check(const ScalingEstimate& growth, const ScalingEstimate& R,
                                      double alpha, double tol = 0.25)
{
    if (!(alpha > 1.0)) throw DomainError("sandwich_check requires alpha > 1");
    if (R.slope_tail_min <= 0.0)
        throw UndefinedBound("sandwich_check: nonpositive lower hitting estimate");
    SandwichVerdict v;
    v.exponent = growth.slope_tail_max;
    v.lower_req = alpha / R.slope_tail_max;
    v.upper_req = alpha / R.slope_tail_min + 1.0;
    v.pass = (v.exponent >= v.lower_req - tol) && (v.exponent <= v.upper_req + tol);
    return v;
}

} // namespace hitdim
