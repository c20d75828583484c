#include <doctest.h>

#include <algorithm>

#include "hitdim/errors.hpp"
#include "hitdim/lab/config.hpp"

using namespace hitdim;
using namespace hitdim::lab;

namespace {

const char* kGood = R"(
experiment: theorem2
seed: 123
trials: 10
schedule: { k_min: 4, k_max: 14 }
n_max: 100000
tail_fraction: 0.5
system:
  kind: doubling
  p: 0.5
theorem2:
  mode: hitting
  tol_median: 0.15
  tol_trial: 0.3
  frac_min: 0.95
)";

} // namespace

TEST_CASE("well-formed config parses and validates")
{
    ExperimentConfig cfg = parse_config(kGood);
    CHECK(cfg.kind == ExperimentKind::theorem2);
    CHECK(cfg.seed == 123);
    CHECK(cfg.seed_set);
    CHECK(cfg.k_max == 14);
    CHECK(cfg.system.kind == "doubling");
    CHECK(cfg.mode == "hitting");
    validate_config(cfg);
}

TEST_CASE("missing seed is rejected: no wall-clock seeding")
{
    std::string text(kGood);
    auto pos = text.find("seed: 123\n");
    text.erase(pos, 10);
    ExperimentConfig cfg = parse_config(text);
    CHECK_THROWS_AS(validate_config(cfg), ConfigError);
    try {
        validate_config(cfg);
    } catch (const ConfigError& e) {
        REQUIRE(!e.fields.empty());
        CHECK(e.fields[0].find("seed") != std::string::npos);
    }
}

TEST_CASE("structured error lists every offending field")
{
    const char* bad = R"(
experiment: theorem2
seed: 1
trials: 0
schedule: { k_min: 9, k_max: 10 }
tail_fraction: 1.5
system:
  kind: doubling
  p: 2.0
)";
    ExperimentConfig cfg = parse_config(bad);
    try {
        validate_config(cfg);
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        auto has = [&](const char* frag) {
            return std::any_of(e.fields.begin(), e.fields.end(), [&](const std::string& f) {
                return f.find(frag) != std::string::npos;
            });
        };
        CHECK(has("trials"));
        CHECK(has("schedule"));
        CHECK(has("tail_fraction"));
        CHECK(has("system.p"));
    }
}

TEST_CASE("unknown keys are rejected at parse time")
{
    std::string text(kGood);
    text += "\nbogus_key: 1\n";
    CHECK_THROWS_AS((void)parse_config(text), ConfigError);
}

TEST_CASE("unknown experiment kind is rejected")
{
    std::string text(kGood);
    auto pos = text.find("theorem2");
    text.replace(pos, 8, "theorem9");
    CHECK_THROWS_AS((void)parse_config(text), ConfigError);
}

TEST_CASE("system descriptors for every family")
{
    const char* iet = R"(
experiment: theorem3
seed: 5
trials: 4
schedule: { k_min: 4, k_max: 8 }
system:
  kind: iet
  lengths: [[1, 5], [3, 10], [1, 2]]
  permutation: [3, 2, 1]
theorem3: { estimator: ols, band: [0.5, 1.5] }
)";
    ExperimentConfig c1 = parse_config(iet);
    validate_config(c1);
    CHECK(c1.system.lengths.size() == 3);

    const char* rot = R"(
experiment: theorem3
seed: 5
trials: 4
schedule: { k_min: 4, k_max: 8 }
system:
  kind: rotation
  quotients: [10, 100, 1000]
theorem3: { estimator: upper, band: [1.0, 9.0] }
)";
    validate_config(parse_config(rot));

    const char* riet = R"(
experiment: theorem4
seed: 5
trials: 4
schedule: { k_min: 4, k_max: 8 }
system: { kind: random_iet, d: 4 }
theorem4: { iet_count: 2, sources_per_iet: 2, band: [0.5, 1.5] }
)";
    validate_config(parse_config(riet));

    const char* cat = R"(
experiment: prop1-identities
seed: 5
trials: 4
schedule: { k_min: 4, k_max: 8 }
system: { kind: catmap }
prop1: { k_lo: 2, k_hi: 6 }
)";
    validate_config(parse_config(cat));
}

TEST_CASE("registered kinds cover the experiment registry")
{
    auto kinds = registered_kinds();
    CHECK(kinds.size() == 7);
    CHECK(std::find(kinds.begin(), kinds.end(), "birkhoff-sandwich") != kinds.end());
    CHECK(std::find(kinds.begin(), kinds.end(), "prop1-identities") != kinds.end());
}
