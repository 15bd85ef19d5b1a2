#pragma once

#include "worldtube/config.hpp"

#include <json.hpp>

#include <filesystem>

namespace worldtube {

/** Exit status and the report that was written to report.json. */
struct RunResult
{
    int exit_code = 0;
    nlohmann::json report;
};

/**
Each command writes report.json and results.csv into out_dir (created if
needed). CSV rows are flushed as they are produced, and if a run throws,
report.json records the error before the exception propagates.
*/

/** Invariant suites; exit code 1 if any check fails. */
RunResult run_verify(const ExperimentConfig& config, const std::filesystem::path& out_dir);

/** Shell against point charge at the configured eps, one row per test function. */
RunResult run_compare(const ExperimentConfig& config, const std::filesystem::path& out_dir);

/** eps sweep with slope fit; throws ConfigError for fewer than three eps values. */
RunResult run_sweep(const ExperimentConfig& config, const std::filesystem::path& out_dir);

/** %.17g */
std::string format_double(double x);

} // namespace worldtube
