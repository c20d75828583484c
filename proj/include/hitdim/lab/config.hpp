#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace hitdim::lab {

enum class ExperimentKind {
    theorem2,
    theorem3,
    theorem4,
    lemma1,
    lemma2,
    birkhoff_sandwich,
    prop1_identities,
};

const char* kind_name(ExperimentKind k);
std::vector<std::string> registered_kinds();

// System descriptor as it appears in the config file.
struct SystemDesc {
    std::string kind; // doubling | catmap | rotation | iet | random_iet
    double p = 0.5;   // doubling

    std::vector<std::uint64_t> quotients; // rotation (continued fraction)
    std::uint64_t frac_p = 0, frac_q = 0; // rotation given directly as p/q

    std::vector<std::pair<long long, long long>> lengths; // iet, num/den pairs
    std::vector<int> permutation;                          // iet

    int d = 4;                    // random_iet
    std::uint64_t spec_seed = 0;  // random_iet (single spec; theorem4 derives its own)
};

struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::theorem2;
    SystemDesc system;

    int k_min = 4, k_max = 14;
    std::uint64_t n_max = 10'000'000;
    int trials = 100;
    double tail_fraction = 0.5;
    std::uint64_t seed = 0;
    bool seed_set = false;
    std::string out_dir = "out";
    int threads = 0; // 0 = library default

    // theorem2
    std::string mode = "hitting"; // hitting | recurrence
    double tol_median = 0.15;
    double tol_trial = 0.3;
    double frac_min = 0.95;
    double d_expected = 1.0; // recurrence comparison level

    // theorem3 (also runs the indicator-separation configs)
    std::string estimator = "ols"; // ols | upper | lower
    double band_lo = 0.0, band_hi = 0.0;

    // theorem4
    int iet_count = 20;
    int sources_per_iet = 50;
    std::uint64_t boshernitzan_n_cap = 10'000;

    // lemma1
    double epsilon = 0.2;
    int samples = 10'000;
    std::uint64_t horizon_cap = 1'000'000;
    std::string expectation = "summable"; // summable | nondecay
    double tol_increment = 0.01;
    int knee = 6;
    double nondecay_floor = 0.1;

    // lemma2
    std::vector<double> m_values;
    long long lemma2_n_max = 10'000;

    // birkhoff-sandwich
    double alpha = 2.0;
    std::uint64_t n_birkhoff = 1ull << 24;
    std::string pole = "measure"; // measure | discontinuity
    double sandwich_tol = 0.25;

    // prop1-identities
    int k_lo = 2, k_hi = 7;
    int hoelder_trials = 20;
    double hoelder_tol = 0.2;

    std::string source_path; // config file this was loaded from
};

// Parses the YAML document; throws ConfigError listing offending fields.
ExperimentConfig load_config(const std::string& path);
ExperimentConfig parse_config(const std::string& yaml_text, const std::string& path_hint = "");

// Range/consistency validation; throws ConfigError listing offending fields.
void validate_config(const ExperimentConfig& cfg);

} // namespace hitdim::lab
