#include <doctest.h>

#include <cmath>

#include "hitdim/birkhoff.hpp"
#include "hitdim/rng.hpp"
#include "hitdim/systems/bernoulli.hpp"
#include "hitdim/systems/rotation.hpp"

using namespace hitdim;

TEST_CASE("constant observable sums to n + 1")
{
    Rotation rot = Rotation::from_fraction(1, 4);
    SingularObservable obs;
    obs.alpha = 0.0;
    auto cur = rot.cursor_at(Frac::from_double(0.3));
    BirkhoffTrace trace = birkhoff_trace(cur, Frac{0}, obs, 1 << 10);
    for (const auto& [j, S] : trace.checkpoints)
        CHECK(S == doctest::Approx(std::pow(2.0, j) + 1.0).epsilon(1e-14));
}

TEST_CASE("two-point orbit with a quarter-distance pole")
{
    // rotation by 1/2 from 0: orbit alternates 0, 1/2; both at distance 1/4
    // from the pole, every term is 4
    Rotation half = Rotation::from_quotients({2});
    CHECK(half.p() == 1);
    CHECK(half.q() == 2);
    SingularObservable obs;
    obs.alpha = 1.0;
    auto cur = half.cursor_at(Frac{0});
    BirkhoffTrace trace = birkhoff_trace(cur, Rat(1, 4).to_frac(), obs, 1 << 9);
    for (const auto& [j, S] : trace.checkpoints)
        CHECK(S == doctest::Approx((std::pow(2.0, j) + 1.0) * 4.0).epsilon(1e-12));
    CHECK(!trace.pole_hit);
}

TEST_CASE("compensated and naive sums agree to 1e-9 relative")
{
    Doubling sys(0.5);
    std::mt19937_64 rng(31337);
    SingularObservable obs;
    obs.alpha = 2.0;
    for (int rep = 0; rep < 3; ++rep) {
        auto cur = sys.sample_cursor(rng);
        Frac pole = sys.sample_point(rng);
        BirkhoffTrace trace = birkhoff_trace(cur, pole, obs, 1 << 20);
        double naive = birkhoff_sum_naive(cur, pole, obs, 1 << 20);
        double S = trace.checkpoints.back().second;
        CHECK(std::abs(S - naive) / S < 1e-9);
    }
}

TEST_CASE("checkpoints are monotone and deterministic")
{
    Doubling sys(0.5);
    std::mt19937_64 rng(5150);
    SingularObservable obs;
    obs.alpha = 1.5;
    auto cur = sys.sample_cursor(rng);
    Frac pole = sys.sample_point(rng);
    BirkhoffTrace a = birkhoff_trace(cur, pole, obs, 1 << 14);
    BirkhoffTrace b = birkhoff_trace(cur, pole, obs, 1 << 14);
    REQUIRE(a.checkpoints.size() == b.checkpoints.size());
    double prev = 0.0;
    for (std::size_t i = 0; i < a.checkpoints.size(); ++i) {
        CHECK(a.checkpoints[i].second == b.checkpoints[i].second); // bit identical
        CHECK(a.checkpoints[i].second >= prev);
        prev = a.checkpoints[i].second;
    }
}

TEST_CASE("growth exponent on synthetic traces")
{
    BirkhoffTrace linear, quadratic;
    for (int j = 0; j <= 20; ++j) {
        double n = std::pow(2.0, j);
        linear.checkpoints.emplace_back(j, n);
        quadratic.checkpoints.emplace_back(j, n * n);
    }
    ScalingEstimate e1 = growth_exponent(linear, 0.5);
    CHECK(e1.slope_ols == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(e1.slope_tail_max == doctest::Approx(1.0).epsilon(1e-12));
    ScalingEstimate e2 = growth_exponent(quadratic, 0.5);
    CHECK(e2.slope_tail_max == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("bounded observable grows linearly")
{
    Doubling sys(0.5);
    std::mt19937_64 rng(99);
    SingularObservable obs;
    obs.alpha = 0.0;
    auto cur = sys.sample_cursor(rng);
    BirkhoffTrace trace = birkhoff_trace(cur, Frac{0}, obs, 1 << 20);
    ScalingEstimate e = growth_exponent(trace, 0.5);
    CHECK(std::abs(e.slope_tail_max - 1.0) < 0.05);
}

TEST_CASE("pole underflow is floored and flagged")
{
    // rational orbit that lands exactly on the pole: 1/4 -> 1/2 under doubling
    Doubling sys(0.5);
    auto cur = sys.cursor_at_rat(Rat(1, 4));
    SingularObservable obs;
    obs.alpha = 1.0;
    BirkhoffTrace trace = birkhoff_trace(cur, Rat(1, 2).to_frac(), obs, 1 << 8);
    CHECK(trace.pole_hit);
    // the flagged step contributed the floor value 2^60, not infinity
    CHECK(std::isfinite(trace.checkpoints.back().second));
    CHECK(trace.checkpoints.front().second >= std::ldexp(1.0, 60));
}

TEST_CASE("sandwich bands")
{
    ScalingEstimate growth;
    growth.slope_tail_max = 2.0;

    ScalingEstimate R;
    R.slope_tail_min = 1.0;
    R.slope_tail_max = 1.0;
    SandwichVerdict v = sandwich_check(growth, R, 1.5, 0.25);
    CHECK(v.lower_req == doctest::Approx(1.5));
    CHECK(v.upper_req == doctest::Approx(2.5));
    CHECK(v.pass);

    R.slope_tail_min = 2.0;
    R.slope_tail_max = 2.0;
    v = sandwich_check(growth, R, 3.0, 0.25);
    CHECK(v.lower_req == doctest::Approx(1.5));
    CHECK(v.upper_req == doctest::Approx(2.5));
    CHECK(v.pass);

    growth.slope_tail_max = 5.0;
    v = sandwich_check(growth, R, 3.0, 0.25);
    CHECK(!v.pass);

    R.slope_tail_min = 0.0;
    CHECK_THROWS_AS((void)sandwich_check(growth, R, 3.0, 0.25), UndefinedBound);
    R.slope_tail_min = 1.0;
    CHECK_THROWS_AS((void)sandwich_check(growth, R, 1.0, 0.25), DomainError);
}

TEST_CASE("trace preconditions")
{
    Rotation rot = Rotation::from_fraction(1, 4);
    SingularObservable obs;
    obs.alpha = 1.0;
    CHECK_THROWS_AS((void)birkhoff_trace(rot.cursor_at(Frac{0}), Frac{0}, obs, 1 << 10),
                    DomainError);
    CHECK_THROWS_AS((void)birkhoff_trace(rot.cursor_at(Frac{1}), Frac{0}, obs, 100), DomainError);
}
