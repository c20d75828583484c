#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "hitdim/dimension.hpp"
#include "hitdim/errors.hpp"
#include "hitdim/fixed.hpp"
#include "hitdim/rng.hpp"
#include "hitdim/schedule.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace hitdim {

// Monte-Carlo estimate of the measure of the survivor set: the fraction of
// measure-sampled starting points whose orbit stays outside B(center, r) at
// every step 0..n_steps. Step 0 is included: a start already inside the
// ball does not survive (contrast with hitting_time, which counts from 1).
//
// Each sample owns a private generator derived from (seed, index), so the
// estimate is independent of thread count and scheduling; the merge is an
// integer sum.
template <class System, class Pt>
double survival_measure(const System& sys, Pt center, double r, std::uint64_t n_steps,
                        int sample_count, std::uint64_t seed)
{
    if (sample_count < 100) throw DomainError("survival_measure needs at least 100 samples");
    const Ball ball = ball_radius(r);
    long long survivors = 0;

#pragma omp parallel for schedule(static) reduction(+ : survivors)
    for (int i = 0; i < sample_count; ++i) {
        auto rng = make_rng(seed, {0x5afeu, static_cast<std::uint64_t>(i)});
        auto cur = sys.sample_cursor(rng);
        bool alive = !ball.contains_raw(dist_raw(cur.point(), center));
        for (std::uint64_t n = 1; alive && n <= n_steps; ++n) {
            cur.advance();
            alive = !ball.contains_raw(dist_raw(cur.point(), center));
        }
        if (alive) survivors += 1;
    }
    return static_cast<double>(survivors) / static_cast<double>(sample_count);
}

// Serial reference for the kernel benchmark and equivalence tests.
template <class System, class Pt>
double survival_measure_serial(const System& sys, Pt center, double r, std::uint64_t n_steps,
                               int sample_count, std::uint64_t seed)
{
    if (sample_count < 100) throw DomainError("survival_measure needs at least 100 samples");
    const Ball ball = ball_radius(r);
    long long survivors = 0;
    for (int i = 0; i < sample_count; ++i) {
        auto rng = make_rng(seed, {0x5afeu, static_cast<std::uint64_t>(i)});
        auto cur = sys.sample_cursor(rng);
        bool alive = !ball.contains_raw(dist_raw(cur.point(), center));
        for (std::uint64_t n = 1; alive && n <= n_steps; ++n) {
            cur.advance();
            alive = !ball.contains_raw(dist_raw(cur.point(), center));
        }
        if (alive) survivors += 1;
    }
    return static_cast<double>(survivors) / static_cast<double>(sample_count);
}

// One row per dyadic scale n: ball measure, the survival horizon
// round(mu^-(1+epsilon)), the Monte-Carlo survivor estimate at that horizon
// and the running partial sum of the estimates. A summable tail certifies
// the hitting/dimension equality route; a stalled tail flags the
// non-mixing counterexamples.
struct SummabilityRow {
    int n = 0;
    double radius = 0.0;
    double ball_measure = 0.0;
    std::uint64_t horizon = 0;
    bool capped = false;
    double survival = 0.0;
    double partial_sum = 0.0;
};

template <class System, class Pt>
std::vector<SummabilityRow> summability_diagnostic(const System& sys, const MeasureModel& model,
                                                   Pt center, const DyadicSchedule& sched,
                                                   double epsilon, int sample_count,
                                                   std::uint64_t seed, std::uint64_t horizon_cap)
{
    std::vector<SummabilityRow> rows;
    double partial = 0.0;
    for (int n = sched.k_min; n <= sched.k_max; ++n) {
        SummabilityRow row;
        row.n = n;
        row.radius = DyadicSchedule::radius(n);
        row.ball_measure = ball_measure_analytic(model, center, row.radius);
        double h = std::pow(row.ball_measure, -1.0 - epsilon);
        std::uint64_t horizon = static_cast<std::uint64_t>(std::llround(h));
        if (horizon > horizon_cap) {
            horizon = horizon_cap;
            row.capped = true;
        }
        row.horizon = horizon;
        row.survival = survival_measure(sys, center, row.radius, horizon, sample_count,
                                        derive_seed(seed, {0x5u, static_cast<std::uint64_t>(n)}));
        partial += row.survival;
        row.partial_sum = partial;
        rows.push_back(row);
    }
    return rows;
}

} // namespace hitdim
