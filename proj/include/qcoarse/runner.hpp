// Orchestration: dispatches a validated configuration to the owning module,
// assembles the report, and persists it. One run per call.

#pragma once

#include "qcoarse/config.hpp"
#include "qcoarse/report.hpp"

namespace qcoarse {

// Runs the configured experiment and returns the finished report. Writes it
// to config.out_path when set (atomically; the path is probed before any
// computation). Throws ConfigError for configuration problems and
// std::runtime_error for compute problems.
RunReport run(const ExperimentConfig& config);

} // namespace qcoarse
