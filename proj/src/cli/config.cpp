#include "spce/cli/config.hpp"

#include "spce/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

namespace spce::cli {

namespace {

using json = nlohmann::ordered_json;

void reject_unknown(const json& obj, std::initializer_list<const char*> allowed,
                    const std::string& context) {
    for (const auto& item : obj.items()) {
        bool known = std::any_of(allowed.begin(), allowed.end(),
                                 [&](const char* k) { return item.key() == k; });
        if (!known) {
            throw ConfigError(context + ": unknown key '" + item.key() + "'");
        }
    }
}

double as_number(const json& v, const std::string& context) {
    if (!v.is_number()) {
        throw ConfigError(context + ": expected a number");
    }
    return v.get<double>();
}

std::int64_t as_positive_int(const json& v, const std::string& context) {
    if (!v.is_number_integer()) {
        throw ConfigError(context + ": expected an integer");
    }
    std::int64_t value = v.get<std::int64_t>();
    if (value < 1) {
        throw ConfigError(context + ": must be >= 1");
    }
    return value;
}

double parse_angle(const json& v, const std::string& context) {
    if (v.is_number()) {
        return v.get<double>();
    }
    if (v.is_string()) {
        return parse_angle_text(v.get<std::string>(), context);
    }
    throw ConfigError(context +
                      ": expected an angle (number in radians, or string with a "
                      "deg/rad suffix)");
}

Direction parse_orientation(const json& v, const std::string& context) {
    try {
        if (v.is_array()) {
            if (v.size() != 3 || !v[0].is_number() || !v[1].is_number() ||
                !v[2].is_number()) {
                throw ConfigError(context +
                                  ": orientation triple must be three numbers [x, y, z]");
            }
            return Direction(v[0].get<double>(), v[1].get<double>(),
                             v[2].get<double>());
        }
        if (v.is_object()) {
            reject_unknown(v, {"theta", "phi"}, context);
            if (!v.contains("theta")) {
                throw ConfigError(context + ": orientation object needs 'theta'");
            }
            double theta = parse_angle(v.at("theta"), context + ".theta");
            double phi = v.contains("phi")
                             ? parse_angle(v.at("phi"), context + ".phi")
                             : 0.0;
            return Direction::from_spherical(theta, phi);
        }
    } catch (const InvalidDirectionError& e) {
        throw ConfigError(context + ": " + e.what());
    } catch (const DomainError& e) {
        throw ConfigError(context + ": " + e.what());
    }
    throw ConfigError(context +
                      ": orientation must be [x, y, z] or {\"theta\": ..., \"phi\": ...}");
}

AnalyzerSpec parse_analyzer(const json& v, const std::string& context) {
    if (!v.is_object()) {
        throw ConfigError(context + ": analyzer must be an object");
    }
    reject_unknown(v, {"orientation", "smearing", "epsilon", "eta"}, context);
    if (!v.contains("orientation")) {
        throw ConfigError(context + ": analyzer needs an 'orientation'");
    }
    Direction orientation = parse_orientation(v.at("orientation"),
                                              context + ".orientation");
    SmearingKind kind = SmearingKind::Delta;
    if (v.contains("smearing")) {
        const json& s = v.at("smearing");
        if (!s.is_string()) {
            throw ConfigError(context + ".smearing: expected \"delta\" or \"uniform-cap\"");
        }
        std::string text = s.get<std::string>();
        if (text == "delta") {
            kind = SmearingKind::Delta;
        } else if (text == "uniform-cap") {
            kind = SmearingKind::UniformCap;
        } else {
            throw ConfigError(context + ".smearing: unknown kind '" + text +
                              "', expected \"delta\" or \"uniform-cap\"");
        }
    }
    double epsilon = 0.0;
    if (v.contains("epsilon")) {
        epsilon = as_number(v.at("epsilon"), context + ".epsilon");
        if (kind == SmearingKind::Delta && epsilon != 0.0) {
            throw ConfigError(context +
                              ": epsilon is only meaningful with uniform-cap smearing");
        }
    }
    double eta = 1.0;
    if (v.contains("eta")) {
        eta = as_number(v.at("eta"), context + ".eta");
    }
    try {
        return AnalyzerSpec(orientation, kind, epsilon, eta);
    } catch (const DomainError& e) {
        throw ConfigError(context + ": " + e.what());
    }
}

HerbertOptions parse_herbert(const json& v, const std::string& context) {
    if (!v.is_object()) {
        throw ConfigError(context + ": expected an object");
    }
    reject_unknown(v, {"thetas", "pairs"}, context);
    if (!v.contains("thetas") || !v.at("thetas").is_array() || v.at("thetas").empty()) {
        throw ConfigError(context + ": needs a non-empty 'thetas' array");
    }
    HerbertOptions out;
    std::size_t index = 0;
    for (const json& t : v.at("thetas")) {
        out.thetas.push_back(
            parse_angle(t, context + ".thetas[" + std::to_string(index) + "]"));
        ++index;
    }
    if (v.contains("pairs")) {
        out.pairs = as_positive_int(v.at("pairs"), context + ".pairs");
    }
    return out;
}

ScanOptions parse_scan(const json& v, const std::string& context) {
    if (!v.is_object()) {
        throw ConfigError(context + ": expected an object");
    }
    reject_unknown(v, {"start", "stop", "steps", "pairs"}, context);
    for (const char* key : {"start", "stop", "steps"}) {
        if (!v.contains(key)) {
            throw ConfigError(context + ": needs '" + std::string(key) + "'");
        }
    }
    ScanOptions out;
    out.start = parse_angle(v.at("start"), context + ".start");
    out.stop = parse_angle(v.at("stop"), context + ".stop");
    out.steps = as_positive_int(v.at("steps"), context + ".steps");
    if (v.contains("pairs")) {
        out.pairs = as_positive_int(v.at("pairs"), context + ".pairs");
    }
    return out;
}

} // namespace

bool ExperimentConfig::has_analyzer(const std::string& name) const {
    return std::any_of(analyzers.begin(), analyzers.end(),
                       [&](const auto& entry) { return entry.first == name; });
}

const AnalyzerSpec& ExperimentConfig::analyzer(const std::string& name) const {
    for (const auto& entry : analyzers) {
        if (entry.first == name) {
            return entry.second;
        }
    }
    throw ConfigError("settings reference undefined analyzer '" + name + "'");
}

std::vector<SettingPair> ExperimentConfig::resolved_settings() const {
    if (settings.empty()) {
        throw ConfigError("the settings list is empty");
    }
    std::vector<SettingPair> out;
    out.reserve(settings.size());
    for (const auto& ref : settings) {
        out.push_back(SettingPair{analyzer(ref.first), analyzer(ref.second)});
    }
    return out;
}

const std::string& ExperimentConfig::require_model() const {
    if (!model.has_value()) {
        throw ConfigError("a model name is required (file key 'model' or --model)");
    }
    return *model;
}

std::uint64_t ExperimentConfig::require_seed() const {
    if (!seed.has_value()) {
        throw ConfigError(
            "a seed is required (file key 'seed' or --seed); seeds are never defaulted");
    }
    return *seed;
}

double parse_angle_text(const std::string& text, const std::string& context) {
    std::string_view view(text);
    auto trim = [](std::string_view& v) {
        while (!v.empty() && v.front() == ' ') v.remove_prefix(1);
        while (!v.empty() && v.back() == ' ') v.remove_suffix(1);
    };
    trim(view);
    double factor = 0.0;
    if (view.size() > 3 && view.substr(view.size() - 3) == "deg") {
        factor = std::numbers::pi / 180.0;
    } else if (view.size() > 3 && view.substr(view.size() - 3) == "rad") {
        factor = 1.0;
    } else {
        throw ConfigError(context + ": angle string '" + text +
                          "' needs a unit suffix, e.g. \"45deg\" or \"0.785rad\" "
                          "(bare numbers are radians)");
    }
    view.remove_suffix(3);
    trim(view);
    double value = 0.0;
    auto res = std::from_chars(view.data(), view.data() + view.size(), value);
    if (res.ec != std::errc() || res.ptr != view.data() + view.size() || view.empty()) {
        throw ConfigError(context + ": cannot parse angle value in '" + text + "'");
    }
    return value * factor;
}

ExperimentConfig parse_experiment_json(const std::string& text,
                                       const std::string& origin) {
    json root;
    try {
        root = json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(origin + ": " + e.what());
    }
    if (!root.is_object()) {
        throw ConfigError(origin + ": config root must be an object");
    }
    reject_unknown(root,
                   {"model", "seed", "pairs", "runs", "mode", "record_pairs",
                    "workers", "analyzers", "settings", "herbert", "scan"},
                   origin);
    ExperimentConfig out;
    if (root.contains("model")) {
        if (!root.at("model").is_string()) {
            throw ConfigError(origin + ".model: expected a string");
        }
        out.model = root.at("model").get<std::string>();
    }
    if (root.contains("seed")) {
        const json& s = root.at("seed");
        if (!s.is_number_integer() ||
            (!s.is_number_unsigned() && s.get<std::int64_t>() < 0)) {
            throw ConfigError(origin + ".seed: expected a non-negative integer");
        }
        out.seed = s.get<std::uint64_t>();
    }
    if (root.contains("pairs")) {
        out.pairs = as_positive_int(root.at("pairs"), origin + ".pairs");
    }
    if (root.contains("runs")) {
        out.runs = as_positive_int(root.at("runs"), origin + ".runs");
    }
    if (root.contains("mode")) {
        if (!root.at("mode").is_string()) {
            throw ConfigError(origin + ".mode: expected \"shared\" or \"fresh\"");
        }
        out.mode = parse_sampling_mode(root.at("mode").get<std::string>());
    }
    if (root.contains("record_pairs")) {
        if (!root.at("record_pairs").is_boolean()) {
            throw ConfigError(origin + ".record_pairs: expected a boolean");
        }
        out.record_pairs = root.at("record_pairs").get<bool>();
    }
    if (root.contains("workers")) {
        std::int64_t w = as_positive_int(root.at("workers"), origin + ".workers");
        if (w > 1024) {
            throw ConfigError(origin + ".workers: implausibly large");
        }
        out.workers = static_cast<int>(w);
    }
    if (root.contains("analyzers")) {
        const json& a = root.at("analyzers");
        if (!a.is_object()) {
            throw ConfigError(origin + ".analyzers: expected an object of named analyzers");
        }
        for (const auto& item : a.items()) {
            if (out.has_analyzer(item.key())) {
                throw ConfigError(origin + ".analyzers: duplicate name '" + item.key() +
                                  "'");
            }
            out.analyzers.emplace_back(
                item.key(),
                parse_analyzer(item.value(), origin + ".analyzers." + item.key()));
        }
    }
    if (root.contains("settings")) {
        const json& s = root.at("settings");
        if (!s.is_array()) {
            throw ConfigError(origin + ".settings: expected an array of [first, second] "
                              "analyzer-name pairs");
        }
        std::size_t index = 0;
        for (const json& entry : s) {
            std::string context = origin + ".settings[" + std::to_string(index) + "]";
            if (!entry.is_array() || entry.size() != 2 || !entry[0].is_string() ||
                !entry[1].is_string()) {
                throw ConfigError(context + ": expected [\"first\", \"second\"]");
            }
            std::string first = entry[0].get<std::string>();
            std::string second = entry[1].get<std::string>();
            if (!out.has_analyzer(first)) {
                throw ConfigError(context + ": undefined analyzer '" + first + "'");
            }
            if (!out.has_analyzer(second)) {
                throw ConfigError(context + ": undefined analyzer '" + second + "'");
            }
            out.settings.emplace_back(std::move(first), std::move(second));
            ++index;
        }
    }
    if (root.contains("herbert")) {
        out.herbert = parse_herbert(root.at("herbert"), origin + ".herbert");
    }
    if (root.contains("scan")) {
        out.scan = parse_scan(root.at("scan"), origin + ".scan");
    }
    return out;
}

ExperimentConfig load_experiment_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError("cannot read config file '" + path + "'");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_experiment_json(buffer.str(), path);
}

void apply_overrides(ExperimentConfig& config, const CliOverrides& overrides) {
    if (overrides.model) {
        config.model = *overrides.model;
    }
    if (overrides.mode) {
        config.mode = parse_sampling_mode(*overrides.mode);
    }
    if (overrides.seed) {
        config.seed = *overrides.seed;
    }
    if (overrides.pairs) {
        if (*overrides.pairs < 1) {
            throw ConfigError("--pairs must be >= 1");
        }
        config.pairs = *overrides.pairs;
    }
    if (overrides.runs) {
        if (*overrides.runs < 1) {
            throw ConfigError("--runs must be >= 1");
        }
        config.runs = *overrides.runs;
    }
    if (overrides.workers) {
        if (*overrides.workers < 1) {
            throw ConfigError("--workers must be >= 1");
        }
        config.workers = *overrides.workers;
    }
}

} // namespace spce::cli
