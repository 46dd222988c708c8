#pragma once

#include <string>

#include "experiment/config.hpp"
#include "experiment/report.hpp"

namespace steinkit::experiment {

/// Runs the configured check. Throws ConfigError for configurations the
/// models reject (including degenerate variance).
Report run_experiment(const ExperimentConfig& cfg);

/// Header fields embedded in every summary: config hash, seed, kind, model
/// and the canonical config.
json report_header(const ExperimentConfig& cfg);

/// Exit status of a finished run: 0 when every assertion passed, else 1.
int exit_status(const Report& report);

}  // namespace steinkit::experiment
