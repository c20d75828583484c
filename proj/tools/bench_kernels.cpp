// Kernel benchmark: the production paths against the serial references.
//   - single-pass hit profile vs. per-radius rescans of the same orbit
//   - OpenMP survival Monte-Carlo vs. the serial loop
//   - parallel trial sweep vs. a one-thread sweep
// Every comparison also asserts that both sides produce identical results.

#include <chrono>
#include <cstdio>
#include <cstdlib>

#include "hitdim/hitting.hpp"
#include "hitdim/lab/config.hpp"
#include "hitdim/lab/experiments.hpp"
#include "hitdim/lab/report.hpp"
#include "hitdim/rng.hpp"
#include "hitdim/survival.hpp"
#include "hitdim/systems/bernoulli.hpp"
#include "hitdim/systems/catmap.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace hitdim;

namespace {

double now_ms()
{
    using clk = std::chrono::steady_clock;
    return std::chrono::duration<double, std::milli>(clk::now().time_since_epoch()).count();
}

bool profiles_equal(const HitProfile& a, const HitProfile& b)
{
    if (a.records.size() != b.records.size()) return false;
    for (std::size_t i = 0; i < a.records.size(); ++i) {
        if (a.records[i].censored != b.records[i].censored) return false;
        if (!a.records[i].censored && a.records[i].tau != b.records[i].tau) return false;
    }
    return true;
}

void bench_profile(int trials, std::uint64_t n_max)
{
    Doubling sys(0.5);
    DyadicSchedule sched(4, 14);
    double t_fast = 0, t_naive = 0;
    bool equal = true;
    for (int i = 0; i < trials; ++i) {
        auto rng = make_rng(42, {1u, static_cast<std::uint64_t>(i)});
        auto cur = sys.sample_cursor(rng);
        Frac y = sys.sample_point(rng);

        double t0 = now_ms();
        auto fast = hit_profile(cur, y, sched, n_max);
        double t1 = now_ms();
        auto naive = hit_profile_naive(cur, y, sched, n_max);
        double t2 = now_ms();
        t_fast += t1 - t0;
        t_naive += t2 - t1;
        equal = equal && profiles_equal(fast, naive);
    }
    std::printf("hit_profile        single-pass %8.1f ms   per-radius %8.1f ms   x%.1f   %s\n",
                t_fast, t_naive, t_naive / t_fast, equal ? "identical" : "MISMATCH");
    if (!equal) std::exit(1);
}

void bench_survival(int samples, std::uint64_t steps)
{
    Doubling sys(0.5);
    auto rng = make_rng(7, {2u});
    Frac center = sys.sample_point(rng);

    double t0 = now_ms();
    double par = survival_measure(sys, center, 0x1p-6, steps, samples, 99);
    double t1 = now_ms();
    double ser = survival_measure_serial(sys, center, 0x1p-6, steps, samples, 99);
    double t2 = now_ms();
    std::printf("survival_measure   parallel    %8.1f ms   serial     %8.1f ms   x%.1f   %s\n",
                t1 - t0, t2 - t1, (t2 - t1) / (t1 - t0), par == ser ? "identical" : "MISMATCH");
    if (par != ser) std::exit(1);
}

void bench_sweep(int trials)
{
    lab::ExperimentConfig cfg;
    cfg.kind = lab::ExperimentKind::theorem3;
    cfg.system.kind = "catmap";
    cfg.k_min = 3;
    cfg.k_max = 10;
    cfg.n_max = 1'000'000;
    cfg.trials = trials;
    cfg.seed = 5;
    cfg.seed_set = true;
    cfg.estimator = "ols";
    cfg.band_lo = 1.5;
    cfg.band_hi = 2.5;

    cfg.threads = 1;
    double t0 = now_ms();
    auto serial = lab::run_experiment(cfg);
    double t1 = now_ms();
    cfg.threads = 0;
#ifdef _OPENMP
    omp_set_num_threads(omp_get_num_procs());
#endif
    double t2 = now_ms();
    auto parallel = lab::run_experiment(cfg);
    double t3 = now_ms();

    cfg.threads = 1; // render_csv drops the duration, so outputs must match
    bool equal = lab::render_csv(serial) == lab::render_csv(parallel);
    std::printf("trial sweep        parallel    %8.1f ms   serial     %8.1f ms   x%.1f   %s\n",
                t3 - t2, t1 - t0, (t1 - t0) / (t3 - t2), equal ? "identical" : "MISMATCH");
    if (!equal) std::exit(1);
}

} // namespace

int main(int argc, char** argv)
{
    int trials = argc > 1 ? std::atoi(argv[1]) : 40;
    std::uint64_t n_max = argc > 2 ? std::strtoull(argv[2], nullptr, 10) : 100'000;

#ifdef _OPENMP
    std::printf("threads: %d\n", omp_get_max_threads());
#endif
    bench_profile(trials, n_max);
    bench_survival(20'000, 512);
    bench_sweep(trials);
    return 0;
}
