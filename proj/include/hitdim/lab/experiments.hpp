#pragma once

#include "hitdim/lab/config.hpp"
#include "hitdim/lab/report.hpp"

namespace hitdim::lab {

// Executes one experiment described by a validated config and assembles the
// reproducible report. Per-trial failures (censoring storms, pole hits,
// degenerate specs) degrade to flagged rows; only config errors abort.
ExperimentReport run_experiment(const ExperimentConfig& cfg);

} // namespace hitdim::lab
