#include "spce/cli/commands.hpp"

#include "spce/error.hpp"

#include <json.hpp>

#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace spce::cli {

namespace {

using ordered_json = nlohmann::ordered_json;

/// Confidence level used for the Wilson intervals in herbert output,
/// chosen to line up with the artifact-wide 4-sigma convention.
constexpr double kHerbertCiLevel = 0.9999;

/// Shortest round-trip decimal form, locale-independent. CSV cells and
/// JSON numbers both go through here-compatible paths, so equal doubles
/// always print as equal bytes.
std::string fmt_full(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

/// Compact form for human-readable report lines.
std::string fmt_g(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return std::string(buf);
}

std::string csv_field(const std::string& value) {
    if (value.find_first_of(",\"\n\r") == std::string::npos) {
        return value;
    }
    std::string quoted = "\"";
    for (char c : value) {
        if (c == '"') {
            quoted += '"';
        }
        quoted += c;
    }
    quoted += '"';
    return quoted;
}

/// A value-polymorphic table that serializes to CSV (header mandatory,
/// LF endings) or to a JSON array of row objects.
class Table {
public:
    explicit Table(std::vector<std::string> columns)
        : columns_(std::move(columns)) {}

    Table& cell(const std::string& text) {
        row_.push_back(text);
        json_row_.push_back(text);
        return *this;
    }
    Table& cell(double v) {
        row_.push_back(fmt_full(v));
        json_row_.push_back(v);
        return *this;
    }
    Table& cell(std::int64_t v) {
        row_.push_back(std::to_string(v));
        json_row_.push_back(v);
        return *this;
    }
    Table& cell(bool v) {
        row_.push_back(v ? "1" : "0");
        json_row_.push_back(v);
        return *this;
    }

    void end_row() {
        if (row_.size() != columns_.size()) {
            throw Error("internal: table row width mismatch");
        }
        rows_.push_back(std::move(row_));
        json_rows_.push_back(std::move(json_row_));
        row_.clear();
        json_row_.clear();
    }

    std::string render(OutputFormat format) const {
        if (format == OutputFormat::Json) {
            ordered_json out = ordered_json::array();
            for (const auto& row : json_rows_) {
                ordered_json obj = ordered_json::object();
                for (std::size_t i = 0; i < columns_.size(); ++i) {
                    obj[columns_[i]] = row[i];
                }
                out.push_back(std::move(obj));
            }
            return out.dump() + "\n";
        }
        std::string out;
        for (std::size_t i = 0; i < columns_.size(); ++i) {
            if (i > 0) {
                out += ',';
            }
            out += csv_field(columns_[i]);
        }
        out += '\n';
        for (const auto& row : rows_) {
            for (std::size_t i = 0; i < row.size(); ++i) {
                if (i > 0) {
                    out += ',';
                }
                out += csv_field(row[i]);
            }
            out += '\n';
        }
        return out;
    }

private:
    std::vector<std::string> columns_;
    std::vector<std::vector<std::string>> rows_;
    std::vector<ordered_json> json_rows_;
    std::vector<std::string> row_;
    ordered_json json_row_ = ordered_json::array();
};

std::string describe_direction(const Direction& d) {
    return "[" + fmt_g(d.x()) + ", " + fmt_g(d.y()) + ", " + fmt_g(d.z()) + "]";
}

std::string describe_analyzer(const AnalyzerSpec& spec) {
    std::string out = describe_direction(spec.orientation());
    if (spec.kind() == SmearingKind::UniformCap) {
        out += " uniform-cap eps=" + fmt_g(spec.epsilon());
    } else {
        out += " delta";
    }
    out += " eta=" + fmt_g(spec.efficiency());
    return out;
}

void echo_analyzers(std::ostringstream& report,
                    const std::vector<std::pair<std::string, AnalyzerSpec>>& analyzers) {
    for (const auto& [name, spec] : analyzers) {
        report << "  analyzer " << name << ": " << describe_analyzer(spec) << "\n";
    }
}

std::string seed_text(const ExperimentConfig& config) {
    return config.seed.has_value() ? std::to_string(*config.seed) : "none";
}

/// The four CHSH analyzers: an explicit 4-entry settings list in canonical
/// order wins; otherwise analyzers named A, A', B, B' are used.
ChshSettings chsh_quad(const ExperimentConfig& config) {
    if (!config.settings.empty()) {
        return chsh_settings_from_pairs(config.resolved_settings());
    }
    for (const char* name : {"A", "A'", "B", "B'"}) {
        if (!config.has_analyzer(name)) {
            throw ConfigError(
                "chsh needs either a settings list of the four pairs "
                "(A,B), (A,B'), (A',B'), (A',B) or analyzers named A, A', B, B'");
        }
    }
    return ChshSettings{config.analyzer("A"), config.analyzer("A'"),
                        config.analyzer("B"), config.analyzer("B'")};
}

} // namespace

OutputFormat parse_output_format(const std::string& name) {
    if (name == "csv") {
        return OutputFormat::Csv;
    }
    if (name == "json") {
        return OutputFormat::Json;
    }
    throw ConfigError("unknown output format '" + name + "', expected csv or json");
}

CommandOutput cmd_predict(const ExperimentConfig& config, OutputFormat format) {
    if (config.analyzers.empty()) {
        throw ConfigError("predict needs an 'analyzers' block");
    }
    std::vector<SettingPair> pairs = config.resolved_settings();

    Table table({"first", "second", "theta", "kappa_first", "kappa_second",
                 "p_coincidence", "E", "E_conditional"});
    std::ostringstream report;
    report << "predict: " << pairs.size() << " setting pair(s), seed="
           << seed_text(config) << " (closed forms, no sampling)\n";
    echo_analyzers(report, config.analyzers);
    for (std::size_t k = 0; k < pairs.size(); ++k) {
        const SettingPair& pair = pairs[k];
        const double theta = angle_between(pair.first.orientation(),
                                           pair.second.orientation());
        const double p = coincidence_probability(pair);
        const double e = smeared_correlation(pair);
        const double eta_product = pair.first.efficiency() * pair.second.efficiency();
        // With a dead detector there are no coincidences to condition on,
        // so the conditional column reads 0 rather than the eta-free
        // formula value.
        const double e_cond = eta_product == 0.0 ? 0.0 : conditional_correlation(pair);
        table.cell(config.settings[k].first)
            .cell(config.settings[k].second)
            .cell(theta)
            .cell(pair.first.shrink_factor())
            .cell(pair.second.shrink_factor())
            .cell(p)
            .cell(e)
            .cell(e_cond);
        table.end_row();
        report << "  " << config.settings[k].first << " x "
               << config.settings[k].second << ": Theta=" << fmt_g(theta)
               << " p=" << fmt_g(p) << " E=" << fmt_g(e)
               << " E|coincidence=" << fmt_g(e_cond) << "\n";
    }
    return {report.str(), table.render(format)};
}

CommandOutput cmd_chsh(const ExperimentConfig& config, OutputFormat format) {
    ChshSettings quad = chsh_quad(config);
    auto quad_pairs = quad.setting_pairs();

    RunConfig run_config;
    run_config.model = config.require_model();
    run_config.settings.assign(quad_pairs.begin(), quad_pairs.end());
    run_config.pairs_per_run = config.pairs;
    run_config.runs = config.runs;
    run_config.mode = config.mode;
    run_config.seed = config.require_seed();
    run_config.record_pairs = config.record_pairs;
    run_config.workers = config.workers;

    ExperimentReport rep = reproduce(run_config);
    const ChshResult& chsh = *rep.chsh;

    Table table({"run_index", "E1", "E2", "E3", "E4", "S"});
    for (std::size_t j = 0; j < chsh.per_run_s.size(); ++j) {
        table.cell(static_cast<std::int64_t>(j))
            .cell(chsh.per_run_e[j][0])
            .cell(chsh.per_run_e[j][1])
            .cell(chsh.per_run_e[j][2])
            .cell(chsh.per_run_e[j][3])
            .cell(chsh.per_run_s[j]);
        table.end_row();
    }

    std::int64_t coincidences = 0;
    std::int64_t total = 0;
    for (const SettingSummary& summary : rep.settings) {
        for (const RunResult& run : summary.runs) {
            coincidences += run.coincidence_count;
            total += run.total_pairs;
        }
    }

    std::ostringstream report;
    report << "chsh: model=" << rep.model_name << " mode="
           << sampling_mode_name(config.mode) << " pairs=" << config.pairs
           << " runs=" << config.runs << " seed=" << run_config.seed
           << " workers=" << config.workers << "\n";
    report << "  A=" << describe_analyzer(quad.a)
           << "  A'=" << describe_analyzer(quad.a_prime) << "\n";
    report << "  B=" << describe_analyzer(quad.b)
           << "  B'=" << describe_analyzer(quad.b_prime) << "\n";
    report << "  coincidences: " << coincidences << "/" << total << "\n";
    report << "  E_hat: ";
    for (std::size_t k = 0; k < 4; ++k) {
        report << "E" << (k + 1) << "=" << fmt_g(chsh.e_hat[k]) << " (se "
               << fmt_g(chsh.e_stderr[k]) << ") ";
    }
    report << "\n";
    report << "  S = " << fmt_g(chsh.s) << " (se " << fmt_g(chsh.stderr_s)
           << "), per-run mean S = " << fmt_g(chsh.mean_s) << " (se "
           << fmt_g(chsh.stderr_mean_s) << ")\n";
    if (chsh.stderr_mean_s > 0.0) {
        double z = violation_zscore(
            EstimateWithError{chsh.mean_s, chsh.stderr_mean_s,
                              static_cast<std::int64_t>(chsh.per_run_s.size())},
            2.0);
        report << "  z vs 2: " << fmt_g(z)
               << (z > 4.0 ? " (violates the bound)" : " (within the bound)") << "\n";
    } else {
        report << "  z vs 2: undefined (zero spread)\n";
    }
    return {report.str(), table.render(format)};
}

CommandOutput cmd_herbert(const ExperimentConfig& config, OutputFormat format) {
    if (!config.herbert.has_value()) {
        throw ConfigError("herbert needs a 'herbert' config block with a thetas list");
    }
    auto model = make_model(config.require_model());
    const std::int64_t n = config.herbert->pairs.value_or(config.pairs);
    RandomStream root(config.require_seed());
    std::vector<HerbertResult> results =
        herbert_scan(*model, config.herbert->thetas, n, root);

    Table table({"theta", "d_theta", "d_2theta", "two_d_theta", "violated",
                 "d_theta_ci_low", "d_theta_ci_high", "d_2theta_ci_low",
                 "d_2theta_ci_high"});
    std::ostringstream report;
    report << "herbert: model=" << model->name() << " pairs=" << n << " seed="
           << *config.seed << " ci_level=" << fmt_g(kHerbertCiLevel) << "\n";
    for (const HerbertResult& r : results) {
        Interval ci1 = binomial_ci(r.disagree_theta, r.pairs, kHerbertCiLevel);
        Interval ci2 = binomial_ci(r.disagree_2theta, r.pairs, kHerbertCiLevel);
        table.cell(r.theta)
            .cell(r.d_theta)
            .cell(r.d_2theta)
            .cell(2.0 * r.d_theta)
            .cell(!r.satisfied)
            .cell(ci1.lower)
            .cell(ci1.upper)
            .cell(ci2.lower)
            .cell(ci2.upper);
        table.end_row();
        report << "  theta=" << fmt_g(r.theta) << ": d(theta)=" << fmt_g(r.d_theta)
               << " d(2theta)=" << fmt_g(r.d_2theta) << " 2d(theta)="
               << fmt_g(2.0 * r.d_theta)
               << (r.satisfied ? "  inequality holds" : "  inequality VIOLATED")
               << "\n";
    }
    return {report.str(), table.render(format)};
}

CommandOutput cmd_scan(const ExperimentConfig& config, OutputFormat format) {
    if (!config.scan.has_value()) {
        throw ConfigError("scan needs a 'scan' config block with start/stop/steps");
    }
    const ScanOptions& scan = *config.scan;
    if (scan.steps < 1) {
        throw ConfigError("scan.steps must be >= 1");
    }
    auto model = make_model(config.require_model());
    const std::int64_t n = scan.pairs.value_or(config.pairs);
    RandomStream root(config.require_seed());

    Table table({"theta", "E_qm_closed", "E_model_mc", "stderr"});
    std::ostringstream report;
    report << "scan: model=" << model->name() << " points=" << scan.steps
           << " range=[" << fmt_g(scan.start) << ", " << fmt_g(scan.stop)
           << "] pairs=" << n << " seed=" << *config.seed << "\n";
    const Direction side1(0.0, 0.0, 1.0);
    for (std::int64_t i = 0; i < scan.steps; ++i) {
        const double theta =
            scan.steps == 1
                ? scan.start
                : scan.start + (scan.stop - scan.start) *
                                   static_cast<double>(i) /
                                   static_cast<double>(scan.steps - 1);
        const Direction side2 = Direction::from_spherical(theta, 0.0);
        SettingPair pair{AnalyzerSpec(side1, SmearingKind::Delta, 0.0, 1.0),
                         AnalyzerSpec(side2, SmearingKind::Delta, 0.0, 1.0)};
        RandomStream rs = root.substream(static_cast<std::uint64_t>(i));
        RunResult run = run_experiment(*model, pair, n, rs, false);
        table.cell(theta)
            .cell(singlet_correlation(side1, side2))
            .cell(run.r_n)
            .cell(run.stderr_r);
        table.end_row();
    }
    report << "  columns: theta, E_qm_closed, E_model_mc, stderr\n";
    return {report.str(), table.render(format)};
}

} // namespace spce::cli
