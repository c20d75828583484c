#include <doctest.h>

#include <cmath>
#include <vector>

#include "hitdim/rng.hpp"
#include "hitdim/systems/bernoulli.hpp"
#include "hitdim/systems/catmap.hpp"
#include "hitdim/systems/iet.hpp"
#include "hitdim/systems/rotation.hpp"
#include "oracles.hpp"

using namespace hitdim;

namespace {
constexpr double kKsFactor = 1.63; // 1% level
constexpr double kChi2_99dof_1pct = 134.642;
} // namespace

TEST_CASE("circle sampling is uniform at the 1% KS level")
{
    Rotation rot = Rotation::from_fraction(1, 4);
    std::mt19937_64 rng(2024);
    const int n = 100'000;
    std::vector<double> xs;
    xs.reserve(n);
    for (int i = 0; i < n; ++i) xs.push_back(rot.sample_point(rng).value());
    CHECK(oracle::ks_uniform(xs) < kKsFactor / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("torus sampling passes a chi-square grid test")
{
    CatMap sys;
    std::mt19937_64 rng(77);
    std::vector<Pt2> pts;
    const int n = 100'000;
    pts.reserve(n);
    for (int i = 0; i < n; ++i) pts.push_back(sys.sample_point(rng));
    CHECK(oracle::chi2_grid(pts, 10) < kChi2_99dof_1pct);
}

TEST_CASE("symmetric digit sampling reduces to the uniform law")
{
    Doubling sys(0.5);
    std::mt19937_64 rng(31);
    const int n = 100'000;
    std::vector<double> xs;
    xs.reserve(n);
    long high = 0;
    for (int i = 0; i < n; ++i) {
        Frac p = sys.sample_point(rng);
        xs.push_back(p.value());
        high += (p.raw >> 63);
    }
    CHECK(oracle::ks_uniform(xs) < kKsFactor / std::sqrt(static_cast<double>(n)));
    // leading digit frequency 0.5 within 3 binomial sigmas
    double freq = static_cast<double>(high) / n;
    CHECK(std::abs(freq - 0.5) < 3.0 * 0.5 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("measure preservation: one map application keeps the fit")
{
    const int n = 100'000;
    const double ks_bound = kKsFactor / std::sqrt(static_cast<double>(n));

    SUBCASE("interval exchange preserves the uniform law")
    {
        Iet t = random_iet(4, 5);
        std::mt19937_64 rng(8);
        std::vector<double> xs;
        xs.reserve(n);
        for (int i = 0; i < n; ++i) {
            auto cur = t.sample_cursor(rng);
            cur.advance();
            xs.push_back(cur.point().value());
        }
        CHECK(oracle::ks_uniform(xs) < ks_bound);
    }

    SUBCASE("rotation preserves the uniform law")
    {
        Rotation rot = Rotation::from_quotients({1, 1, 1, 1, 1, 1, 1, 1, 1, 1});
        std::mt19937_64 rng(9);
        std::vector<double> xs;
        xs.reserve(n);
        for (int i = 0; i < n; ++i) {
            auto cur = rot.sample_cursor(rng);
            cur.advance();
            xs.push_back(cur.point().value());
        }
        CHECK(oracle::ks_uniform(xs) < ks_bound);
    }

    SUBCASE("cat map preserves the product law")
    {
        CatMap sys;
        std::mt19937_64 rng(10);
        std::vector<Pt2> pts;
        pts.reserve(n);
        for (int i = 0; i < n; ++i) {
            auto cur = sys.sample_cursor(rng);
            cur.advance();
            pts.push_back(cur.point());
        }
        CHECK(oracle::chi2_grid(pts, 10) < kChi2_99dof_1pct);
    }

    SUBCASE("digit streams shift to digit streams by construction")
    {
        Doubling sys(0.25);
        std::mt19937_64 rng(11);
        long ones = 0;
        const int m = 200'000;
        for (int i = 0; i < m; ++i) {
            auto cur = sys.sample_cursor(rng);
            cur.advance();
            ones += cur.point().raw & 1u;
        }
        double freq = static_cast<double>(ones) / m;
        CHECK(std::abs(freq - 0.25) < 3.0 * std::sqrt(0.25 * 0.75 / m));
    }
}

TEST_CASE("seed derivation separates streams")
{
    auto a = derive_seed(1, {1, 2});
    auto b = derive_seed(1, {1, 3});
    auto c = derive_seed(1, {2, 2});
    auto d = derive_seed(2, {1, 2});
    CHECK(a != b);
    CHECK(a != c);
    CHECK(a != d);
    CHECK(derive_seed(1, {1, 2}) == a);
}
