#include <doctest.h>

#include <cmath>

#include "hitdim/dimension.hpp"
#include "hitdim/rng.hpp"
#include "hitdim/systems/bernoulli.hpp"
#include "hitdim/systems/catmap.hpp"

using namespace hitdim;

TEST_CASE("analytic ball measures")
{
    MeasureModel leb = MeasureModel::lebesgue1();
    CHECK(ball_measure_analytic(leb, Frac::from_double(0.77), 0.125) == doctest::Approx(0.25));
    CHECK(ball_measure_analytic(leb, Frac{0}, 0.5) == doctest::Approx(1.0));

    MeasureModel leb2 = MeasureModel::lebesgue2();
    Pt2 y{Frac::from_double(0.2), Frac::from_double(0.9)};
    CHECK(ball_measure_analytic(leb2, y, 0.125) == doctest::Approx(0.0625));
}

TEST_CASE("digit-walk ball measure, worked case")
{
    // B(1/8, 1/8) = [0, 1/4): both leading digits 0, so (1-p)^2
    MeasureModel b14 = MeasureModel::bernoulli(0.25);
    double mu = ball_measure_analytic(b14, Rat(1, 8).to_frac(), 0.125);
    CHECK(mu == doctest::Approx(0.75 * 0.75).epsilon(1e-12));
}

TEST_CASE("singular CDF endpoints and monotonicity")
{
    for (double p : {0.25, 0.5, 0.7}) {
        CHECK(bernoulli_cdf(p, 0) == 0.0);
        CHECK(bernoulli_cdf(p, 0, true) == 1.0);
        double prev = 0.0;
        for (std::uint64_t i = 0; i <= (1u << 12); ++i) {
            bool is_one = i == (1u << 12);
            double f = bernoulli_cdf(p, static_cast<std::uint64_t>(i) << 52, is_one);
            CHECK(f >= prev);
            prev = f;
        }
        CHECK(prev == 1.0);
    }
}

TEST_CASE("symmetric digits reduce to Lebesgue on dyadic balls")
{
    MeasureModel half = MeasureModel::bernoulli(0.5);
    MeasureModel leb = MeasureModel::lebesgue1();
    for (int k = 2; k <= 20; ++k) {
        double r = DyadicSchedule::radius(k);
        for (std::uint64_t yraw : {std::uint64_t{0}, std::uint64_t{1} << 62,
                                   (std::uint64_t{3} << 60) + (std::uint64_t{1} << 40)}) {
            Frac y{yraw};
            CHECK(ball_measure_analytic(half, y, r) ==
                  doctest::Approx(ball_measure_analytic(leb, y, r)).epsilon(1e-12));
        }
    }
}

TEST_CASE("local dimension of the uniform laws is exact")
{
    DyadicSchedule sched(4, 14);
    DimensionEstimate d1 = estimate_local_dimension(MeasureModel::lebesgue1(),
                                                    Frac::from_double(0.3), sched, 0.5);
    CHECK(d1.est.slope_ols == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(d1.d_lower <= d1.d_upper);
    CHECK(d1.d_upper <= 1.0);
    CHECK(d1.d_lower >= 1.0 - 2.0 / sched.k_min);

    Pt2 y{Frac::from_double(0.1), Frac::from_double(0.7)};
    DimensionEstimate d2 =
        estimate_local_dimension(MeasureModel::lebesgue2(), y, sched, 0.5);
    CHECK(d2.est.slope_ols == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("biased digit dimension matches the entropy value")
{
    // oracle: -(p log2 p + (1-p) log2 (1-p)) for p = 1/4
    const double p = 0.25;
    const double entropy = -(p * std::log2(p) + (1 - p) * std::log2(1 - p));
    CHECK(entropy == doctest::Approx(0.811278).epsilon(1e-5));

    Doubling sys(p);
    std::mt19937_64 rng(2525);
    DyadicSchedule sched(6, 20);
    std::vector<double> slopes;
    for (int rep = 0; rep < 15; ++rep) {
        Frac y = sys.sample_point(rng);
        DimensionEstimate d =
            estimate_local_dimension(MeasureModel::bernoulli(p), y, sched, 0.5);
        slopes.push_back(d.est.slope_ols);
        CHECK(d.d_lower <= d.d_upper);
    }
    std::sort(slopes.begin(), slopes.end());
    CHECK(slopes[slopes.size() / 2] == doctest::Approx(entropy).epsilon(0.07));
}

TEST_CASE("self-similar cases have tight tail spread")
{
    DyadicSchedule sched(6, 20);
    DimensionEstimate leb = estimate_local_dimension(MeasureModel::lebesgue1(),
                                                     Frac::from_double(0.37), sched, 0.5);
    CHECK(leb.d_upper - leb.d_lower <= 0.1);

    // dyadic center: digits of y eventually constant
    DimensionEstimate ber = estimate_local_dimension(MeasureModel::bernoulli(0.25),
                                                     Rat(3, 16).to_frac(), sched, 0.5);
    CHECK(ber.d_upper - ber.d_lower <= 0.1);
}

TEST_CASE("empirical frequencies agree with analytic measures")
{
    SUBCASE("doubling map")
    {
        Doubling sys(0.5);
        std::mt19937_64 rng(112);
        auto cur = sys.sample_cursor(rng);
        double mu = ball_measure_empirical(cur, Frac::from_double(0.3), 0.125, 1'000'000);
        CHECK(std::abs(mu - 0.25) < 0.005);
    }

    SUBCASE("cat map")
    {
        CatMap sys;
        std::mt19937_64 rng(113);
        auto cur = sys.sample_cursor(rng);
        Pt2 y{Frac::from_double(0.6), Frac::from_double(0.2)};
        double mu = ball_measure_empirical(cur, y, 0.125, 1'000'000);
        CHECK(std::abs(mu - 0.0625) < 0.003);
    }

    SUBCASE("five-sigma agreement across random balls")
    {
        Doubling sys(0.5);
        std::mt19937_64 rng(114);
        const std::uint64_t N = 200'000;
        for (int rep = 0; rep < 20; ++rep) {
            Frac y = sys.sample_point(rng);
            int k = 2 + static_cast<int>(uniform_below(rng, 5));
            double r = DyadicSchedule::radius(k);
            double want = ball_measure_analytic(MeasureModel::lebesgue1(), y, r);
            auto cur = sys.sample_cursor(rng);
            double got = ball_measure_empirical(cur, y, r, N);
            double sigma = std::sqrt(want * (1 - want) / static_cast<double>(N));
            // mixing inflates the effective variance a bit; 5 sigma plus slack
            CHECK(std::abs(got - want) < 5.0 * sigma + 0.002);
        }
    }

    SUBCASE("full-space ball has frequency one")
    {
        Doubling sys(0.5);
        std::mt19937_64 rng(115);
        auto cur = sys.sample_cursor(rng);
        CHECK(ball_measure_empirical(cur, Frac{0}, 0.51, 10'000) == 1.0);
    }
}

TEST_CASE("empirical dimension via one shared orbit")
{
    Doubling sys(0.5);
    std::mt19937_64 rng(116);
    DyadicSchedule sched(3, 9);
    Frac y = sys.sample_point(rng);

    auto counts = orbit_ball_counts(sys.sample_cursor(rng), y, sched, 1'000'000);
    DimensionEstimate d = estimate_local_dimension_counts(counts, sched, 1'000'000, 0.5);
    CHECK(d.est.slope_ols == doctest::Approx(1.0).epsilon(0.1));
    CHECK(d.dropped_scales.empty());

    // two independent starts agree within tolerance
    auto counts2 = orbit_ball_counts(sys.sample_cursor(rng), y, sched, 1'000'000);
    DimensionEstimate d2 = estimate_local_dimension_counts(counts2, sched, 1'000'000, 0.5);
    CHECK(std::abs(d.est.slope_ols - d2.est.slope_ols) <= 0.1);
}

TEST_CASE("under-hit scales are dropped and flagged")
{
    DyadicSchedule sched(2, 8);
    std::vector<std::uint64_t> counts = {50'000, 25'000, 12'000, 6'000, 3'000, 40, 0};
    DimensionEstimate d = estimate_local_dimension_counts(counts, sched, 100'000, 0.5);
    CHECK(d.dropped_scales == std::vector<int>{7, 8});

    std::vector<std::uint64_t> sparse = {50'000, 25'000, 12'000, 50, 3, 0, 0};
    CHECK_THROWS_AS(
        (void)estimate_local_dimension_counts(sparse, sched, 100'000, 0.5), InsufficientData);
}
