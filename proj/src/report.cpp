#include "hitdim/lab/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "hitdim/errors.hpp"

namespace hitdim::lab {

std::string fmt_num(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return std::string(buf);
}

std::string fmt_int(std::uint64_t v)
{
    return std::to_string(v);
}

nlohmann::ordered_json config_to_json(const ExperimentConfig& cfg)
{
    nlohmann::ordered_json j;
    j["experiment"] = kind_name(cfg.kind);
    j["seed"] = cfg.seed;
    j["trials"] = cfg.trials;
    j["threads"] = cfg.threads;
    j["out_dir"] = cfg.out_dir;
    j["schedule"] = {{"k_min", cfg.k_min}, {"k_max", cfg.k_max}};
    j["n_max"] = cfg.n_max;
    j["tail_fraction"] = cfg.tail_fraction;

    nlohmann::ordered_json sys;
    sys["kind"] = cfg.system.kind;
    if (cfg.system.kind == "doubling") sys["p"] = cfg.system.p;
    if (cfg.system.kind == "rotation") {
        if (!cfg.system.quotients.empty()) sys["quotients"] = cfg.system.quotients;
        if (cfg.system.frac_q != 0)
            sys["fraction"] = {cfg.system.frac_p, cfg.system.frac_q};
    }
    if (cfg.system.kind == "iet") {
        auto lengths = nlohmann::ordered_json::array();
        for (const auto& [n, d] : cfg.system.lengths) lengths.push_back({n, d});
        sys["lengths"] = lengths;
        sys["permutation"] = cfg.system.permutation;
    }
    if (cfg.system.kind == "random_iet") {
        sys["d"] = cfg.system.d;
        sys["spec_seed"] = cfg.system.spec_seed;
    }
    j["system"] = sys;

    switch (cfg.kind) {
    case ExperimentKind::theorem2:
        j["theorem2"] = {{"mode", cfg.mode},
                         {"tol_median", cfg.tol_median},
                         {"tol_trial", cfg.tol_trial},
                         {"frac_min", cfg.frac_min},
                         {"d_expected", cfg.d_expected}};
        break;
    case ExperimentKind::theorem3:
        j["theorem3"] = {{"estimator", cfg.estimator}, {"band", {cfg.band_lo, cfg.band_hi}}};
        break;
    case ExperimentKind::theorem4:
        j["theorem4"] = {{"iet_count", cfg.iet_count},
                         {"sources_per_iet", cfg.sources_per_iet},
                         {"band", {cfg.band_lo, cfg.band_hi}},
                         {"boshernitzan_n_cap", cfg.boshernitzan_n_cap}};
        break;
    case ExperimentKind::lemma1:
        j["lemma1"] = {{"epsilon", cfg.epsilon},
                       {"samples", cfg.samples},
                       {"horizon_cap", cfg.horizon_cap},
                       {"expectation", cfg.expectation},
                       {"tol_increment", cfg.tol_increment},
                       {"knee", cfg.knee},
                       {"nondecay_floor", cfg.nondecay_floor}};
        break;
    case ExperimentKind::lemma2:
        j["lemma2"] = {{"m_values", cfg.m_values}, {"n_max", cfg.lemma2_n_max}};
        break;
    case ExperimentKind::birkhoff_sandwich:
        j["birkhoff"] = {{"alpha", cfg.alpha},
                         {"n_birkhoff", cfg.n_birkhoff},
                         {"pole", cfg.pole},
                         {"band", {cfg.band_lo, cfg.band_hi}},
                         {"sandwich_tol", cfg.sandwich_tol}};
        break;
    case ExperimentKind::prop1_identities:
        j["prop1"] = {{"k_lo", cfg.k_lo},
                      {"k_hi", cfg.k_hi},
                      {"hoelder_trials", cfg.hoelder_trials},
                      {"hoelder_tol", cfg.hoelder_tol}};
        break;
    }
    return j;
}

std::string render_csv(const ExperimentReport& rep)
{
    std::string out(kCsvHeader);
    out += '\n';
    for (const auto& r : rep.rows) {
        out += rep.experiment;
        out += ',';
        out += std::to_string(r.trial);
        out += ',';
        out += rep.system_name;
        out += ',';
        out += r.kind;
        out += ',';
        out += r.k;
        out += ',';
        out += r.radius;
        out += ',';
        out += r.tau_or_measure;
        out += ',';
        out += r.censored;
        out += ',';
        out += r.estimate_kind;
        out += ',';
        out += r.value;
        out += ',';
        out += r.flag;
        out += '\n';
    }
    return out;
}

nlohmann::ordered_json report_to_json(const ExperimentReport& rep)
{
    nlohmann::ordered_json j;
    j["config"] = rep.config_echo;
    auto trials = nlohmann::ordered_json::array();
    for (const auto& t : rep.trials) {
        nlohmann::ordered_json tj;
        tj["trial"] = t.trial;
        nlohmann::ordered_json est;
        for (const auto& [k, v] : t.estimates) est[k] = v;
        tj["estimates"] = est;
        tj["flags"] = t.flags;
        trials.push_back(tj);
    }
    j["trials"] = trials;
    j["summary"] = rep.summary;
    auto verdicts = nlohmann::ordered_json::array();
    for (const auto& v : rep.verdicts) {
        verdicts.push_back({{"name", v.name},
                            {"pass", v.pass},
                            {"observed", v.observed},
                            {"lo", v.lo},
                            {"hi", v.hi},
                            {"detail", v.detail}});
    }
    j["verdicts"] = verdicts;
    j["duration_seconds"] = rep.duration_seconds;
    return j;
}

namespace {
void write_file(const std::string& path, const std::string& content)
{
    std::filesystem::path p(path);
    if (p.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(p.parent_path(), ec);
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open for writing: " + path);
    f << content;
    if (!f) throw IoError("write failed: " + path);
}
} // namespace

void write_csv(const ExperimentReport& rep, const std::string& path)
{
    write_file(path, render_csv(rep));
}

void write_json(const ExperimentReport& rep, const std::string& path)
{
    write_file(path, report_to_json(rep).dump(2) + "\n");
}

double quantile_sorted(const std::vector<double>& sorted, double q)
{
    if (sorted.empty()) return std::nan("");
    if (sorted.size() == 1) return sorted[0];
    double pos = q * (static_cast<double>(sorted.size()) - 1.0);
    std::size_t lo = static_cast<std::size_t>(pos);
    if (lo + 1 >= sorted.size()) return sorted.back();
    double frac = pos - static_cast<double>(lo);
    return sorted[lo] * (1.0 - frac) + sorted[lo + 1] * frac;
}

double median(std::vector<double> values)
{
    std::sort(values.begin(), values.end());
    return quantile_sorted(values, 0.5);
}

double iqr(std::vector<double> values)
{
    std::sort(values.begin(), values.end());
    return quantile_sorted(values, 0.75) - quantile_sorted(values, 0.25);
}

} // namespace hitdim::lab
