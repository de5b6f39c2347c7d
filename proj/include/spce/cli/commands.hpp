#pragma once

#include "spce/cli/config.hpp"

#include <string>

namespace spce::cli {

enum class OutputFormat { Csv, Json };

/// Accepts "csv" and "json"; anything else throws ConfigError.
OutputFormat parse_output_format(const std::string& name);

/// Every command yields a human-readable report (config echo plus summary)
/// and a machine-readable data table. The caller decides where each goes:
/// with --out the data lands in the file and the report on stdout, without
/// it the data goes to stdout and the report to stderr.
struct CommandOutput {
    std::string report;
    std::string data;
};

/// Closed-form predictions per setting pair: coincidence probability,
/// smeared correlation, conditional correlation, kappa factors. No
/// randomness involved.
CommandOutput cmd_predict(const ExperimentConfig& config,
                          OutputFormat format = OutputFormat::Csv);

/// CHSH experiment in the configured mode. Settings come either from a
/// 4-entry settings list in canonical order or from analyzers named
/// A, A', B, B'. Data columns: run_index, E1..E4, S.
CommandOutput cmd_chsh(const ExperimentConfig& config,
                       OutputFormat format = OutputFormat::Csv);

/// Message-disagreement scan over the configured theta list, with Wilson
/// confidence intervals on both rates.
CommandOutput cmd_herbert(const ExperimentConfig& config,
                          OutputFormat format = OutputFormat::Csv);

/// Correlation curve over a theta grid: quantum closed form next to the
/// configured model's Monte Carlo estimate.
CommandOutput cmd_scan(const ExperimentConfig& config,
                       OutputFormat format = OutputFormat::Csv);

} // namespace spce::cli
