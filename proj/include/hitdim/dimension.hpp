#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "hitdim/fixed.hpp"
#include "hitdim/scaling.hpp"
#include "hitdim/schedule.hpp"

namespace hitdim {

// Analytic ball-measure model of an invariant measure: Lebesgue on the
// circle or the torus (sup metric, so balls are squares), or the singular
// Bernoulli(p) product measure for the doubling map.
struct MeasureModel {
    enum class Kind { lebesgue_1d, lebesgue_2d, bernoulli };
    Kind kind = Kind::lebesgue_1d;
    double p = 0.5; // bernoulli only

    static MeasureModel lebesgue1() { return MeasureModel{Kind::lebesgue_1d, 0.5}; }
    static MeasureModel lebesgue2() { return MeasureModel{Kind::lebesgue_2d, 0.5}; }
    static MeasureModel bernoulli(double p) { return MeasureModel{Kind::bernoulli, p}; }
};

// CDF of the Bernoulli(p) measure, evaluated exactly on the dyadic lattice
// by walking the binary digits of t (digit 1 carries weight p, digit 0
// carries 1-p). t = raw/2^64, or exactly 1 when is_one is set.
double bernoulli_cdf(double p, std::uint64_t t_raw, bool is_one = false);

// Measure of the open ball B(y, r) on the circle; wraps around 0 when
// needed. r in (0, 1/2].
double ball_measure_analytic(const MeasureModel& model, Frac y, double r);
double ball_measure_analytic(const MeasureModel& model, Pt2 y, double r);

// Birkhoff frequency estimate of ball measures from a single long orbit:
// one pass counts hits for every dyadic scale in the schedule at once.
// counts[i] is the number of the first N orbit points inside
// B(y, 2^-(k_min+i)).
template <class Cursor, class Pt>
std::vector<std::uint64_t> orbit_ball_counts(Cursor cur, Pt y, const DyadicSchedule& sched,
                                             std::uint64_t n_points)
{
    const int n_scales = sched.size();
    std::vector<std::uint64_t> thresh(n_scales), counts(n_scales, 0);
    for (int i = 0; i < n_scales; ++i)
        thresh[i] = ball_radius_dyadic(sched.k_min + i).thresh;
    // deepest scale containing the point via downward scan (balls nested)
    for (std::uint64_t n = 0; n < n_points; ++n) {
        if (n > 0) cur.advance();
        std::uint64_t d = dist_raw(cur.point(), y);
        int i = 0;
        while (i < n_scales && d < thresh[i]) {
            ++counts[i];
            ++i;
        }
    }
    return counts;
}

template <class Cursor, class Pt>
double ball_measure_empirical(Cursor cur, Pt y, double r, std::uint64_t n_points)
{
    const Ball ball = ball_radius(r);
    std::uint64_t hits = 0;
    for (std::uint64_t n = 0; n < n_points; ++n) {
        if (n > 0) cur.advance();
        if (ball.contains_raw(dist_raw(cur.point(), y))) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(n_points);
}

// Scaling fit over (k, -log2 mu(B(y, 2^-k))). d_lower / d_upper are the
// tail ratio extremes (lower / upper local dimension surrogates).
struct DimensionEstimate {
    ScalingEstimate est;
    double d_lower = 0.0;
    double d_upper = 0.0;
    std::vector<int> dropped_scales; // empirical mode: empty or under-hit balls
};

DimensionEstimate estimate_local_dimension(const MeasureModel& model, Frac y,
                                           const DyadicSchedule& sched, double tail_fraction);
DimensionEstimate estimate_local_dimension(const MeasureModel& model, Pt2 y,
                                           const DyadicSchedule& sched, double tail_fraction);

// Empirical mode from precomputed per-scale counts. Scales with fewer than
// min_hits orbit hits are dropped (reported in dropped_scales) instead of
// entering the fit with huge variance.
DimensionEstimate estimate_local_dimension_counts(const std::vector<std::uint64_t>& counts,
                                                  const DyadicSchedule& sched,
                                                  std::uint64_t n_points, double tail_fraction,
                                                  std::uint64_t min_hits = 100);

} // namespace hitdim
