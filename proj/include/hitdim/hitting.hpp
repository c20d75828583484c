#pragma once

#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

#include "hitdim/errors.hpp"
#include "hitdim/fixed.hpp"
#include "hitdim/scaling.hpp"
#include "hitdim/schedule.hpp"

namespace hitdim {

enum class HitMode { hitting, recurrence };

// First entrance time of one orbit into one shrinking ball.
struct HitRecord {
    int k = 0;
    double radius = 0.0;
    std::uint64_t tau = 0; // valid when !censored
    bool censored = false;
    std::uint64_t n_max = 0;
};

struct HitProfile {
    std::vector<HitRecord> records;
    HitMode mode = HitMode::hitting;
    double source[2] = {0, 0};
    double target[2] = {0, 0};
    int dim = 1;
};

namespace detail {
inline void fill_coords(double out[2], Frac p)
{
    out[0] = p.value();
    out[1] = 0.0;
}
inline void fill_coords(double out[2], Pt2 p)
{
    out[0] = p.x.value();
    out[1] = p.y.value();
}
inline constexpr int point_dim(Frac) { return 1; }
inline constexpr int point_dim(Pt2) { return 2; }
} // namespace detail

// Least n in [1, n_max] with distance(T^n(x), y) < r; n = 0 is excluded
// even when the source already sits inside the ball. Returns 0 for
// censored (no entry within the cap).
template <class Cursor, class Pt>
std::uint64_t hitting_time(Cursor cur, Pt target, double r, std::uint64_t n_max)
{
    const Ball ball = ball_radius(r);
    for (std::uint64_t n = 1; n <= n_max; ++n) {
        cur.advance();
        if (ball.contains_raw(dist_raw(cur.point(), target))) return n;
    }
    return 0;
}

// Single pass over one orbit, recording the first entry per shrinking ball.
// The per-step test short-circuits on the largest unhit ball, and the pass
// stops as soon as the smallest ball has been entered.
template <class Cursor, class Pt>
HitProfile hit_profile(Cursor cur, Pt target, const DyadicSchedule& sched,
                       std::uint64_t n_max, HitMode mode = HitMode::hitting)
{
    HitProfile prof;
    prof.mode = mode;
    detail::fill_coords(prof.source, cur.point());
    if (mode == HitMode::recurrence) target = cur.point();
    detail::fill_coords(prof.target, target);
    prof.dim = detail::point_dim(target);

    const int n_scales = sched.size();
    std::vector<std::uint64_t> thresh(n_scales);
    for (int i = 0; i < n_scales; ++i)
        thresh[i] = ball_radius_dyadic(sched.k_min + i).thresh;

    prof.records.resize(n_scales);
    for (int i = 0; i < n_scales; ++i) {
        prof.records[i].k = sched.k_min + i;
        prof.records[i].radius = DyadicSchedule::radius(sched.k_min + i);
        prof.records[i].censored = true;
        prof.records[i].n_max = n_max;
    }

    int next = 0; // first scale not yet hit (balls are nested: hit in order)
    for (std::uint64_t n = 1; n <= n_max && next < n_scales; ++n) {
        cur.advance();
        std::uint64_t d = dist_raw(cur.point(), target);
        while (next < n_scales && d < thresh[next]) {
            prof.records[next].tau = n;
            prof.records[next].censored = false;
            ++next;
        }
    }
    return prof;
}

// Serial reference: an independent fresh scan of the orbit per radius.
// Kept for oracle-equivalence tests and the kernel benchmark.
template <class Cursor, class Pt>
HitProfile hit_profile_naive(Cursor cur, Pt target, const DyadicSchedule& sched,
                             std::uint64_t n_max, HitMode mode = HitMode::hitting)
{
    HitProfile prof;
    prof.mode = mode;
    detail::fill_coords(prof.source, cur.point());
    if (mode == HitMode::recurrence) target = cur.point();
    detail::fill_coords(prof.target, target);
    prof.dim = detail::point_dim(target);

    for (int k = sched.k_min; k <= sched.k_max; ++k) {
        const Ball ball = ball_radius_dyadic(k);
        HitRecord rec;
        rec.k = k;
        rec.radius = DyadicSchedule::radius(k);
        rec.n_max = n_max;
        rec.censored = true;
        Cursor scan = cur;
        for (std::uint64_t n = 1; n <= n_max; ++n) {
            scan.advance();
            if (ball.contains_raw(dist_raw(scan.point(), target))) {
                rec.tau = n;
                rec.censored = false;
                break;
            }
        }
        prof.records.push_back(rec);
    }
    return prof;
}

// Feeds (k, log2 tau) into fit_scaling. slope_tail_max estimates the upper
// hitting indicator, slope_tail_min the lower one; censored records are
// excluded and counted.
inline ScalingEstimate estimate_R(const HitProfile& prof, double tail_fraction)
{
    std::vector<std::pair<int, double>> samples;
    int censored = 0;
    for (const auto& rec : prof.records) {
        if (rec.censored)
            ++censored;
        else
            samples.emplace_back(rec.k, std::log2(static_cast<double>(rec.tau)));
    }
    if (samples.size() < 4)
        throw InsufficientData("estimate_R: fewer than 4 non-censored records", censored);
    ScalingEstimate est = fit_scaling(std::move(samples), tail_fraction);
    est.n_censored = censored;
    return est;
}

} // namespace hitdim
