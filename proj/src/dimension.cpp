#include "hitdim/dimension.hpp"

#include <algorithm>
#include <cmath>

#include "hitdim/errors.hpp"

namespace hitdim {

double bernoulli_cdf(double p, std::uint64_t t_raw, bool is_one)
{
    if (is_one) return 1.0;
    const double q = 1.0 - p;
    double acc = 0.0;    // mass strictly below the prefix walked so far
    double weight = 1.0; // mass of the cylinder of the walked prefix
    for (int i = 63; i >= 0; --i) {
        if ((t_raw >> i) & 1u) {
            acc += weight * q; // everything with digit 0 here lies below t
            weight *= p;
        } else {
            weight *= q;
        }
        if (weight == 0.0) break;
    }
    return acc;
}

namespace {

// raw endpoints of (y-r, y+r); overflow-free because r <= 1/2
struct Arc {
    std::uint64_t lo, hi;
    bool wraps;
};

Arc ball_arc(Frac y, double r)
{
    const std::uint64_t rr = ball_radius(r).thresh; // ceil(r * 2^64)
    std::uint64_t lo = y.raw - rr;                  // wraps mod 2^64
    std::uint64_t hi = y.raw + rr;
    bool wraps = (lo > y.raw) || (hi < y.raw);
    return Arc{lo, hi, wraps};
}

double bernoulli_ball(double p, Frac y, double r)
{
    if (r >= 0.5) return 1.0;
    Arc a = ball_arc(y, r);
    if (!a.wraps) return bernoulli_cdf(p, a.hi) - bernoulli_cdf(p, a.lo);
    return (1.0 - bernoulli_cdf(p, a.lo)) + bernoulli_cdf(p, a.hi);
}

} // namespace

double ball_measure_analytic(const MeasureModel& model, Frac y, double r)
{
    if (!(r > 0.0)) throw DomainError("ball radius must be positive");
    switch (model.kind) {
    case MeasureModel::Kind::lebesgue_1d:
        return std::min(2.0 * r, 1.0);
    case MeasureModel::Kind::bernoulli:
        return bernoulli_ball(model.p, y, r);
    case MeasureModel::Kind::lebesgue_2d:
        throw DomainError("2-d measure model applied to a circle point");
    }
    return 0.0;
}

double ball_measure_analytic(const MeasureModel& model, Pt2 y, double r)
{
    (void)y;
    if (!(r > 0.0)) throw DomainError("ball radius must be positive");
    if (model.kind != MeasureModel::Kind::lebesgue_2d)
        throw DomainError("circle measure model applied to a torus point");
    double side = std::min(2.0 * r, 1.0);
    return side * side;
}

namespace {

template <class Pt>
DimensionEstimate analytic_dimension(const MeasureModel& model, Pt y,
                                     const DyadicSchedule& sched, double tail_fraction)
{
    std::vector<std::pair<int, double>> samples;
    for (int k = sched.k_min; k <= sched.k_max; ++k) {
        double mu = ball_measure_analytic(model, y, DyadicSchedule::radius(k));
        samples.emplace_back(k, -std::log2(mu));
    }
    DimensionEstimate out;
    out.est = fit_scaling(std::move(samples), tail_fraction);
    out.d_lower = out.est.slope_tail_min;
    out.d_upper = out.est.slope_tail_max;
    return out;
}

} // namespace

DimensionEstimate estimate_local_dimension(const MeasureModel& model, Frac y,
                                           const DyadicSchedule& sched, double tail_fraction)
{
    return analytic_dimension(model, y, sched, tail_fraction);
}

DimensionEstimate estimate_local_dimension(const MeasureModel& model, Pt2 y,
                                           const DyadicSchedule& sched, double tail_fraction)
{
    return analytic_dimension(model, y, sched, tail_fraction);
}

DimensionEstimate estimate_local_dimension_counts(const std::vector<std::uint64_t>& counts,
                                                  const DyadicSchedule& sched,
                                                  std::uint64_t n_points, double tail_fraction,
                                                  std::uint64_t min_hits)
{
    DimensionEstimate out;
    std::vector<std::pair<int, double>> samples;
    for (int i = 0; i < sched.size(); ++i) {
        int k = sched.k_min + i;
        if (counts[i] < min_hits) {
            out.dropped_scales.push_back(k);
            continue;
        }
        double mu = static_cast<double>(counts[i]) / static_cast<double>(n_points);
        samples.emplace_back(k, -std::log2(mu));
    }
    if (samples.size() < 4)
        throw InsufficientData("empirical dimension: fewer than 4 usable scales",
                               static_cast<int>(out.dropped_scales.size()));
    out.est = fit_scaling(std::move(samples), tail_fraction);
    out.d_lower = out.est.slope_tail_min;
    out.d_upper = out.est.slope_tail_max;
    return out;
}

} // namespace hitdim
