#include <cstdio>
#include <filesystem>
#include <string>

#include <CLI11.hpp>

#include "hitdim/errors.hpp"
#include "hitdim/lab/config.hpp"
#include "hitdim/lab/experiments.hpp"
#include "hitdim/lab/report.hpp"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitVerdictFail = 1;
constexpr int kExitConfigError = 2;

void print_config_error(const hitdim::ConfigError& e)
{
    std::fprintf(stderr, "error: %s\n", e.what());
    for (const auto& f : e.fields) std::fprintf(stderr, "  - %s\n", f.c_str());
}

int do_validate(const std::string& path)
{
    try {
        auto cfg = hitdim::lab::load_config(path);
        hitdim::lab::validate_config(cfg);
        std::printf("ok: %s (%s)\n", path.c_str(), hitdim::lab::kind_name(cfg.kind));
        return kExitPass;
    } catch (const hitdim::ConfigError& e) {
        print_config_error(e);
        return kExitConfigError;
    } catch (const hitdim::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitConfigError;
    }
}

int do_run(const std::string& path, bool has_seed, std::uint64_t seed_override,
           const std::string& out_override, int threads_override)
{
    hitdim::lab::ExperimentConfig cfg;
    try {
        cfg = hitdim::lab::load_config(path);
        if (has_seed) {
            cfg.seed = seed_override;
            cfg.seed_set = true;
        }
        if (!out_override.empty()) cfg.out_dir = out_override;
        if (threads_override > 0) cfg.threads = threads_override;
        hitdim::lab::validate_config(cfg);
    } catch (const hitdim::ConfigError& e) {
        print_config_error(e);
        return kExitConfigError;
    } catch (const hitdim::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitConfigError;
    }

    try {
        auto report = hitdim::lab::run_experiment(cfg);
        std::filesystem::path out(cfg.out_dir);
        hitdim::lab::write_csv(report, (out / "report.csv").string());
        hitdim::lab::write_json(report, (out / "report.json").string());

        std::printf("experiment: %s  system: %s  trials: %zu  duration: %.2fs\n",
                    report.experiment.c_str(), report.system_name.c_str(), report.trials.size(),
                    report.duration_seconds);
        for (const auto& v : report.verdicts) {
            std::printf("[%s] %s observed=%.6g band=[%.6g, %.6g]\n", v.pass ? "PASS" : "FAIL",
                        v.name.c_str(), v.observed, v.lo, v.hi);
        }
        std::printf("report: %s\n", (out / "report.csv").string().c_str());
        return report.all_pass() ? kExitPass : kExitVerdictFail;
    } catch (const hitdim::IoError& e) {
        std::fprintf(stderr, "io error: %s\n", e.what());
        return kExitConfigError;
    } catch (const hitdim::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitConfigError;
    }
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"hitting-time and local-dimension experiment runner"};
    app.require_subcommand(1);

    std::string config_path;
    std::uint64_t seed_override = 0;
    bool has_seed = false;
    std::string out_override;
    int threads_override = 0;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("config", config_path, "experiment config file")->required();
        cmd->add_option_function<std::uint64_t>(
               "--seed", [&](std::uint64_t s) { seed_override = s; has_seed = true; },
               "override the master seed");
        cmd->add_option("--out", out_override, "override the output directory");
        cmd->add_option("--threads", threads_override, "worker pool size (0 = default)");
    };

    auto* run_cmd = app.add_subcommand("run", "execute an experiment and write its report");
    add_common(run_cmd);

    auto* validate_cmd = app.add_subcommand("validate", "check a config without running");
    validate_cmd->add_option("config", config_path, "experiment config file")->required();

    auto* list_cmd = app.add_subcommand("list", "list registered experiment kinds");

    CLI11_PARSE(app, argc, argv);

    if (app.got_subcommand(list_cmd)) {
        for (const auto& k : hitdim::lab::registered_kinds()) std::printf("%s\n", k.c_str());
        return kExitPass;
    }
    if (app.got_subcommand(validate_cmd)) return do_validate(config_path);
    return do_run(config_path, has_seed, seed_override, out_override, threads_override);
}
