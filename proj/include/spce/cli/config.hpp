#pragma once

#include "spce/engine.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace spce::cli {

struct HerbertOptions {
    std::vector<double> thetas;
    std::optional<std::int64_t> pairs;
};

struct ScanOptions {
    double start = 0.0;
    double stop = 0.0;
    std::int64_t steps = 0;
    std::optional<std::int64_t> pairs;
};

/// A parsed experiment file plus any command-line overrides. Analyzers are
/// kept in file order and referenced by name from the settings list.
struct ExperimentConfig {
    std::optional<std::string> model;
    std::optional<std::uint64_t> seed;
    std::int64_t pairs = 10000;
    std::int64_t runs = 100;
    SamplingMode mode = SamplingMode::FreshSample;
    std::optional<bool> record_pairs;
    int workers = 1;
    std::vector<std::pair<std::string, AnalyzerSpec>> analyzers;
    std::vector<std::pair<std::string, std::string>> settings;
    std::optional<HerbertOptions> herbert;
    std::optional<ScanOptions> scan;

    bool has_analyzer(const std::string& name) const;

    /// Throws ConfigError when the name is not defined.
    const AnalyzerSpec& analyzer(const std::string& name) const;

    /// The settings list resolved to analyzer pairs. Throws ConfigError on
    /// an undefined name or an empty list.
    std::vector<SettingPair> resolved_settings() const;

    /// Model name, seed; throw ConfigError when missing. Commands that
    /// draw samples call both.
    const std::string& require_model() const;
    std::uint64_t require_seed() const;
};

struct CliOverrides {
    std::optional<std::string> model;
    std::optional<std::string> mode;
    std::optional<std::uint64_t> seed;
    std::optional<std::int64_t> pairs;
    std::optional<std::int64_t> runs;
    std::optional<int> workers;
};

/// Angle literal: a bare number is radians; a string needs an explicit
/// unit suffix, "45deg" or "0.7854rad". Throws ConfigError on anything
/// else.
double parse_angle_text(const std::string& text, const std::string& context);

/// Strict parse of an experiment file: schema-checked, unknown keys
/// rejected, every error message carrying the offending key path. origin
/// names the source in messages (file path or "<inline>").
ExperimentConfig parse_experiment_json(const std::string& text,
                                       const std::string& origin);

ExperimentConfig load_experiment_file(const std::string& path);

/// Command-line flags win over file fields.
void apply_overrides(ExperimentConfig& config, const CliOverrides& overrides);

} // namespace spce::cli
