#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "hitdim/lab/config.hpp"

namespace hitdim::lab {

// One CSV observation row. Cells are pre-rendered strings so the emitted
// bytes are a pure function of the report content.
struct CsvRow {
    std::string kind; // row flavor within the experiment
    long trial = 0;
    std::string k;
    std::string radius;
    std::string tau_or_measure;
    std::string censored;
    std::string estimate_kind;
    std::string value;
    std::string flag;
};

struct TrialSummary {
    long trial = 0;
    std::map<std::string, double> estimates;
    std::vector<std::string> flags;
};

struct Verdict {
    std::string name;
    bool pass = false;
    double observed = 0.0;
    double lo = 0.0;
    double hi = 0.0;
    std::string detail;
};

struct ExperimentReport {
    std::string experiment;
    std::string system_name;
    nlohmann::ordered_json config_echo;
    std::vector<CsvRow> rows;
    std::vector<TrialSummary> trials;
    nlohmann::ordered_json summary;
    std::vector<Verdict> verdicts;
    double duration_seconds = 0.0;

    bool all_pass() const
    {
        for (const auto& v : verdicts)
            if (!v.pass) return false;
        return true;
    }
};

inline constexpr const char* kCsvHeader =
    "experiment,trial,system,kind,k,radius,tau_or_measure,censored,estimate_kind,value,flag";

// Deterministic number rendering for CSV cells.
std::string fmt_num(double v);
std::string fmt_int(std::uint64_t v);

nlohmann::ordered_json config_to_json(const ExperimentConfig& cfg);
nlohmann::ordered_json report_to_json(const ExperimentReport& rep);

std::string render_csv(const ExperimentReport& rep);
void write_csv(const ExperimentReport& rep, const std::string& path);
void write_json(const ExperimentReport& rep, const std::string& path);

// Small order statistics used by the experiment verdicts: hitting-time
// estimators are heavy-tailed, so summaries are median/IQR, never moments.
double quantile_sorted(const std::vector<double>& sorted, double q);
double median(std::vector<double> values);
double iqr(std::vector<double> values);

} // namespace hitdim::lab
