#include "hitdim/lab/config.hpp"

#include <set>
#include <yaml-cpp/yaml.h>

#include "hitdim/errors.hpp"

namespace hitdim::lab {

const char* kind_name(ExperimentKind k)
{
    switch (k) {
    case ExperimentKind::theorem2: return "theorem2";
    case ExperimentKind::theorem3: return "theorem3";
    case ExperimentKind::theorem4: return "theorem4";
    case ExperimentKind::lemma1: return "lemma1";
    case ExperimentKind::lemma2: return "lemma2";
    case ExperimentKind::birkhoff_sandwich: return "birkhoff-sandwich";
    case ExperimentKind::prop1_identities: return "prop1-identities";
    }
    return "?";
}

std::vector<std::string> registered_kinds()
{
    return {"theorem2", "theorem3",          "theorem4",         "lemma1",
            "lemma2",   "birkhoff-sandwich", "prop1-identities"};
}

namespace {

ExperimentKind parse_kind(const std::string& s, std::vector<std::string>& bad)
{
    for (const auto& name : registered_kinds()) {
        if (s == name) {
            if (s == "theorem2") return ExperimentKind::theorem2;
            if (s == "theorem3") return ExperimentKind::theorem3;
            if (s == "theorem4") return ExperimentKind::theorem4;
            if (s == "lemma1") return ExperimentKind::lemma1;
            if (s == "lemma2") return ExperimentKind::lemma2;
            if (s == "birkhoff-sandwich") return ExperimentKind::birkhoff_sandwich;
            return ExperimentKind::prop1_identities;
        }
    }
    bad.push_back("experiment: unknown kind '" + s + "'");
    return ExperimentKind::theorem2;
}

void check_keys(const YAML::Node& node, const std::set<std::string>& allowed,
                const std::string& where, std::vector<std::string>& bad)
{
    if (!node || !node.IsMap()) return;
    for (const auto& kv : node) {
        std::string key = kv.first.as<std::string>();
        if (!allowed.count(key)) bad.push_back(where + key + ": unknown key");
    }
}

template <class T>
void read(const YAML::Node& node, const char* key, T& out, std::vector<std::string>& bad,
          const std::string& where = "")
{
    if (!node[key]) return;
    try {
        out = node[key].as<T>();
    } catch (const YAML::Exception&) {
        bad.push_back(where + std::string(key) + ": bad value");
    }
}

void parse_system(const YAML::Node& node, SystemDesc& sys, std::vector<std::string>& bad)
{
    if (!node) return; // requiredness is per experiment kind, checked in validate
    check_keys(node, {"kind", "p", "quotients", "fraction", "lengths", "permutation", "d",
                      "spec_seed"},
               "system.", bad);
    read(node, "kind", sys.kind, bad, "system.");
    read(node, "p", sys.p, bad, "system.");
    read(node, "d", sys.d, bad, "system.");
    read(node, "spec_seed", sys.spec_seed, bad, "system.");
    if (node["quotients"]) {
        try {
            sys.quotients = node["quotients"].as<std::vector<std::uint64_t>>();
        } catch (const YAML::Exception&) {
            bad.push_back("system.quotients: bad value");
        }
    }
    if (node["fraction"]) {
        try {
            auto v = node["fraction"].as<std::vector<std::uint64_t>>();
            if (v.size() != 2) throw YAML::Exception(YAML::Mark(), "size");
            sys.frac_p = v[0];
            sys.frac_q = v[1];
        } catch (const YAML::Exception&) {
            bad.push_back("system.fraction: expected [p, q]");
        }
    }
    if (node["lengths"]) {
        try {
            for (const auto& item : node["lengths"]) {
                auto v = item.as<std::vector<long long>>();
                if (v.size() != 2) throw YAML::Exception(YAML::Mark(), "size");
                sys.lengths.emplace_back(v[0], v[1]);
            }
        } catch (const YAML::Exception&) {
            bad.push_back("system.lengths: expected list of [num, den]");
        }
    }
    if (node["permutation"]) {
        try {
            sys.permutation = node["permutation"].as<std::vector<int>>();
        } catch (const YAML::Exception&) {
            bad.push_back("system.permutation: bad value");
        }
    }
}

} // namespace

ExperimentConfig parse_config(const std::string& yaml_text, const std::string& path_hint)
{
    std::vector<std::string> bad;
    YAML::Node root;
    try {
        root = YAML::Load(yaml_text);
    } catch (const YAML::Exception& e) {
        throw ConfigError("config parse error: " + std::string(e.what()), {"<document>"});
    }
    if (!root.IsMap()) throw ConfigError("config must be a mapping", {"<document>"});

    check_keys(root,
               {"experiment", "system", "schedule", "n_max", "trials", "tail_fraction", "seed",
                "out_dir", "threads", "theorem2", "theorem3", "theorem4", "lemma1", "lemma2",
                "birkhoff", "prop1"},
               "", bad);

    ExperimentConfig cfg;
    cfg.source_path = path_hint;

    std::string kind_str;
    read(root, "experiment", kind_str, bad);
    if (kind_str.empty())
        bad.push_back("experiment: missing");
    else
        cfg.kind = parse_kind(kind_str, bad);

    parse_system(root["system"], cfg.system, bad);

    if (root["schedule"]) {
        check_keys(root["schedule"], {"k_min", "k_max"}, "schedule.", bad);
        read(root["schedule"], "k_min", cfg.k_min, bad, "schedule.");
        read(root["schedule"], "k_max", cfg.k_max, bad, "schedule.");
    }
    read(root, "n_max", cfg.n_max, bad);
    read(root, "trials", cfg.trials, bad);
    read(root, "tail_fraction", cfg.tail_fraction, bad);
    if (root["seed"]) {
        read(root, "seed", cfg.seed, bad);
        cfg.seed_set = true;
    }
    read(root, "out_dir", cfg.out_dir, bad);
    read(root, "threads", cfg.threads, bad);

    if (root["theorem2"]) {
        auto n = root["theorem2"];
        check_keys(n, {"mode", "tol_median", "tol_trial", "frac_min", "d_expected"}, "theorem2.",
                   bad);
        read(n, "mode", cfg.mode, bad, "theorem2.");
        read(n, "tol_median", cfg.tol_median, bad, "theorem2.");
        read(n, "tol_trial", cfg.tol_trial, bad, "theorem2.");
        read(n, "frac_min", cfg.frac_min, bad, "theorem2.");
        read(n, "d_expected", cfg.d_expected, bad, "theorem2.");
    }
    if (root["theorem3"]) {
        auto n = root["theorem3"];
        check_keys(n, {"estimator", "band"}, "theorem3.", bad);
        read(n, "estimator", cfg.estimator, bad, "theorem3.");
        if (n["band"]) {
            try {
                auto v = n["band"].as<std::vector<double>>();
                if (v.size() != 2) throw YAML::Exception(YAML::Mark(), "size");
                cfg.band_lo = v[0];
                cfg.band_hi = v[1];
            } catch (const YAML::Exception&) {
                bad.push_back("theorem3.band: expected [lo, hi]");
            }
        }
    }
    if (root["theorem4"]) {
        auto n = root["theorem4"];
        check_keys(n, {"iet_count", "sources_per_iet", "band", "boshernitzan_n_cap"}, "theorem4.",
                   bad);
        read(n, "iet_count", cfg.iet_count, bad, "theorem4.");
        read(n, "sources_per_iet", cfg.sources_per_iet, bad, "theorem4.");
        read(n, "boshernitzan_n_cap", cfg.boshernitzan_n_cap, bad, "theorem4.");
        if (n["band"]) {
            try {
                auto v = n["band"].as<std::vector<double>>();
                if (v.size() != 2) throw YAML::Exception(YAML::Mark(), "size");
                cfg.band_lo = v[0];
                cfg.band_hi = v[1];
            } catch (const YAML::Exception&) {
                bad.push_back("theorem4.band: expected [lo, hi]");
            }
        }
    }
    if (root["lemma1"]) {
        auto n = root["lemma1"];
        check_keys(n,
                   {"epsilon", "samples", "horizon_cap", "expectation", "tol_increment", "knee",
                    "nondecay_floor"},
                   "lemma1.", bad);
        read(n, "epsilon", cfg.epsilon, bad, "lemma1.");
        read(n, "samples", cfg.samples, bad, "lemma1.");
        read(n, "horizon_cap", cfg.horizon_cap, bad, "lemma1.");
        read(n, "expectation", cfg.expectation, bad, "lemma1.");
        read(n, "tol_increment", cfg.tol_increment, bad, "lemma1.");
        read(n, "knee", cfg.knee, bad, "lemma1.");
        read(n, "nondecay_floor", cfg.nondecay_floor, bad, "lemma1.");
    }
    if (root["lemma2"]) {
        auto n = root["lemma2"];
        check_keys(n, {"m_values", "n_max"}, "lemma2.", bad);
        if (n["m_values"]) {
            try {
                cfg.m_values = n["m_values"].as<std::vector<double>>();
            } catch (const YAML::Exception&) {
                bad.push_back("lemma2.m_values: bad value");
            }
        }
        read(n, "n_max", cfg.lemma2_n_max, bad, "lemma2.");
    }
    if (root["birkhoff"]) {
        auto n = root["birkhoff"];
        check_keys(n, {"alpha", "n_birkhoff", "pole", "band", "sandwich_tol"}, "birkhoff.", bad);
        read(n, "alpha", cfg.alpha, bad, "birkhoff.");
        read(n, "n_birkhoff", cfg.n_birkhoff, bad, "birkhoff.");
        read(n, "pole", cfg.pole, bad, "birkhoff.");
        read(n, "sandwich_tol", cfg.sandwich_tol, bad, "birkhoff.");
        if (n["band"]) {
            try {
                auto v = n["band"].as<std::vector<double>>();
                if (v.size() != 2) throw YAML::Exception(YAML::Mark(), "size");
                cfg.band_lo = v[0];
                cfg.band_hi = v[1];
            } catch (const YAML::Exception&) {
                bad.push_back("birkhoff.band: expected [lo, hi]");
            }
        }
    }
    if (root["prop1"]) {
        auto n = root["prop1"];
        check_keys(n, {"k_lo", "k_hi", "hoelder_trials", "hoelder_tol"}, "prop1.", bad);
        read(n, "k_lo", cfg.k_lo, bad, "prop1.");
        read(n, "k_hi", cfg.k_hi, bad, "prop1.");
        read(n, "hoelder_trials", cfg.hoelder_trials, bad, "prop1.");
        read(n, "hoelder_tol", cfg.hoelder_tol, bad, "prop1.");
    }

    if (!bad.empty()) throw ConfigError("invalid config", bad);
    return cfg;
}

ExperimentConfig load_config(const std::string& path)
{
    YAML::Node root;
    try {
        root = YAML::LoadFile(path);
    } catch (const YAML::BadFile&) {
        throw IoError("cannot read config file: " + path);
    } catch (const YAML::Exception& e) {
        throw ConfigError("config parse error: " + std::string(e.what()), {"<document>"});
    }
    YAML::Emitter out;
    out << root;
    return parse_config(out.c_str(), path);
}

void validate_config(const ExperimentConfig& cfg)
{
    std::vector<std::string> bad;

    if (!cfg.seed_set) bad.push_back("seed: mandatory (no wall-clock seeding)");
    if (cfg.k_min < 1) bad.push_back("schedule.k_min: must be >= 1");
    if (cfg.k_max <= cfg.k_min) bad.push_back("schedule.k_max: must be > k_min");
    if (cfg.k_max - cfg.k_min < 3) bad.push_back("schedule: needs at least 4 scales");
    if (cfg.k_max > 60) bad.push_back("schedule.k_max: must be <= 60");
    if (cfg.n_max < 1) bad.push_back("n_max: must be >= 1");
    if (cfg.trials < 1) bad.push_back("trials: must be >= 1");
    if (!(cfg.tail_fraction > 0.0 && cfg.tail_fraction <= 1.0))
        bad.push_back("tail_fraction: must be in (0,1]");
    if (cfg.threads < 0) bad.push_back("threads: must be >= 0");

    const std::string& sk = cfg.system.kind;
    const bool needs_system = cfg.kind != ExperimentKind::lemma2;
    if (needs_system) {
        if (sk.empty()) {
            bad.push_back("system.kind: missing");
        } else if (sk == "doubling") {
            if (!(cfg.system.p > 0.0 && cfg.system.p < 1.0))
                bad.push_back("system.p: must be in (0,1)");
        } else if (sk == "rotation") {
            if (cfg.system.quotients.empty() && cfg.system.frac_q == 0)
                bad.push_back("system: rotation needs quotients or fraction");
        } else if (sk == "iet") {
            if (cfg.system.lengths.size() < 2) bad.push_back("system.lengths: need >= 2 entries");
            if (cfg.system.permutation.size() != cfg.system.lengths.size())
                bad.push_back("system.permutation: size must match lengths");
        } else if (sk == "random_iet") {
            if (cfg.system.d < 2 || cfg.system.d > 6) bad.push_back("system.d: must be in 2..6");
        } else if (sk != "catmap") {
            bad.push_back("system.kind: unknown '" + sk + "'");
        }
    }

    switch (cfg.kind) {
    case ExperimentKind::theorem2:
        if (cfg.mode != "hitting" && cfg.mode != "recurrence")
            bad.push_back("theorem2.mode: must be hitting or recurrence");
        if (cfg.tol_median < 0) bad.push_back("theorem2.tol_median: must be >= 0");
        if (cfg.tol_trial < 0) bad.push_back("theorem2.tol_trial: must be >= 0");
        if (!(cfg.frac_min > 0.0 && cfg.frac_min <= 1.0))
            bad.push_back("theorem2.frac_min: must be in (0,1]");
        break;
    case ExperimentKind::theorem3:
        if (cfg.estimator != "ols" && cfg.estimator != "upper" && cfg.estimator != "lower")
            bad.push_back("theorem3.estimator: must be ols, upper or lower");
        if (!(cfg.band_lo < cfg.band_hi)) bad.push_back("theorem3.band: lo must be < hi");
        break;
    case ExperimentKind::theorem4:
        if (sk != "random_iet") bad.push_back("system.kind: theorem4 requires random_iet");
        if (cfg.iet_count < 1) bad.push_back("theorem4.iet_count: must be >= 1");
        if (cfg.sources_per_iet < 1) bad.push_back("theorem4.sources_per_iet: must be >= 1");
        if (!(cfg.band_lo < cfg.band_hi)) bad.push_back("theorem4.band: lo must be < hi");
        break;
    case ExperimentKind::lemma1:
        if (!(cfg.epsilon > 0.0)) bad.push_back("lemma1.epsilon: must be > 0");
        if (cfg.samples < 100) bad.push_back("lemma1.samples: must be >= 100");
        if (cfg.horizon_cap < 1) bad.push_back("lemma1.horizon_cap: must be >= 1");
        if (cfg.expectation != "summable" && cfg.expectation != "nondecay")
            bad.push_back("lemma1.expectation: must be summable or nondecay");
        if (sk == "catmap" || sk == "iet" || sk == "random_iet")
            bad.push_back("system.kind: lemma1 supports doubling and rotation");
        break;
    case ExperimentKind::lemma2:
        if (cfg.m_values.empty()) bad.push_back("lemma2.m_values: missing");
        for (double m : cfg.m_values)
            if (!(m > 0.0 && m < 1.0)) {
                bad.push_back("lemma2.m_values: entries must be in (0,1)");
                break;
            }
        if (cfg.lemma2_n_max < 2) bad.push_back("lemma2.n_max: must be >= 2");
        break;
    case ExperimentKind::birkhoff_sandwich:
        if (cfg.alpha < 0.0) bad.push_back("birkhoff.alpha: must be >= 0");
        if (cfg.n_birkhoff < (1u << 8)) bad.push_back("birkhoff.n_birkhoff: must be >= 256");
        if (cfg.pole != "measure" && cfg.pole != "discontinuity")
            bad.push_back("birkhoff.pole: must be measure or discontinuity");
        if (cfg.pole == "discontinuity" && sk != "iet" && sk != "random_iet")
            bad.push_back("birkhoff.pole: discontinuity requires an interval exchange");
        if (!(cfg.band_lo < cfg.band_hi)) bad.push_back("birkhoff.band: lo must be < hi");
        break;
    case ExperimentKind::prop1_identities:
        if (cfg.k_lo < 1) bad.push_back("prop1.k_lo: must be >= 1");
        if (cfg.k_hi < cfg.k_lo) bad.push_back("prop1.k_hi: must be >= k_lo");
        if (cfg.k_hi > 60) bad.push_back("prop1.k_hi: must be <= 60");
        break;
    }

    if (!bad.empty()) throw ConfigError("config validation failed", bad);
}

} // namespace hitdim::lab
