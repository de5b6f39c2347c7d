#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "spce/cli/commands.hpp"
#include "spce/cli/config.hpp"
#include "spce/error.hpp"
#include "spce/stats.hpp"

#include <json.hpp>

#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

using namespace spce;
using namespace spce::cli;

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        out.push_back(line);
    }
    return out;
}

std::vector<std::string> fields_of(const std::string& line) {
    std::vector<std::string> out;
    std::string current;
    for (char c : line) {
        if (c == ',') {
            out.push_back(current);
            current.clear();
        } else {
            current += c;
        }
    }
    out.push_back(current);
    return out;
}

double num(const std::string& text) {
    return std::stod(text);
}

const std::filesystem::path& tmp_dir() {
    static const std::filesystem::path p = [] {
        auto d = std::filesystem::temp_directory_path() /
                 ("spce_cli_test_" + std::to_string(::getpid()));
        std::filesystem::create_directories(d);
        return d;
    }();
    return p;
}

std::string write_tmp(const std::string& name, const std::string& content) {
    const auto path = tmp_dir() / name;
    std::ofstream out(path, std::ios::binary);
    out << content;
    return path.string();
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

struct BinaryResult {
    int exit_code;
    std::string out;
    std::string err;
};

BinaryResult run_binary(const std::string& args) {
    static int counter = 0;
    const std::string out_path = (tmp_dir() / ("out" + std::to_string(counter))).string();
    const std::string err_path = (tmp_dir() / ("err" + std::to_string(counter))).string();
    ++counter;
    const std::string cmd = std::string(SPCE_LAB_BINARY) + " " + args + " > " +
                            out_path + " 2> " + err_path;
    const int raw = std::system(cmd.c_str());
    REQUIRE(raw != -1);
    return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, read_file(out_path),
            read_file(err_path)};
}

const char* kQuadConfig = R"json({
  "model": "qm-contextual",
  "seed": 11,
  "pairs": 2000,
  "runs": 4,
  "analyzers": {
    "A":  {"orientation": {"theta": "0deg"}},
    "A'": {"orientation": {"theta": "90deg"}},
    "B":  {"orientation": {"theta": "45deg"}},
    "B'": {"orientation": {"theta": "135deg"}}
  },
  "settings": [["A","B"], ["A","B'"], ["A'","B'"], ["A'","B"]]
})json";

void check_throws_config(const std::string& text, const std::string& needle) {
    try {
        parse_experiment_json(text, "test");
        FAIL("expected ConfigError for: " << needle);
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find(needle) != std::string::npos);
    }
}

} // namespace

TEST_CASE("parse_angle_text") {
    CHECK(std::abs(parse_angle_text("45deg", "t") - kPi / 4.0) <= 1e-12);
    CHECK(std::abs(parse_angle_text("180deg", "t") - kPi) <= 1e-12);
    CHECK(parse_angle_text("0.5rad", "t") == 0.5);
    CHECK(std::abs(parse_angle_text(" 90 deg ", "t") - kPi / 2.0) <= 1e-12);
    CHECK(parse_angle_text("-0.25rad", "t") == -0.25);

    CHECK_THROWS_AS(parse_angle_text("90", "t"), ConfigError);
    CHECK_THROWS_AS(parse_angle_text("deg", "t"), ConfigError);
    CHECK_THROWS_AS(parse_angle_text("45degrees", "t"), ConfigError);
    CHECK_THROWS_AS(parse_angle_text("xrad", "t"), ConfigError);
    CHECK_THROWS_AS(parse_angle_text("", "t"), ConfigError);
}

TEST_CASE("experiment files accept every documented field form") {
    const char* text = R"json({
      "model": "bell-sign",
      "seed": 7,
      "pairs": 500,
      "runs": 4,
      "mode": "shared",
      "record_pairs": true,
      "workers": 2,
      "analyzers": {
        "A":  {"orientation": [0, 0, 1]},
        "A'": {"orientation": {"theta": "90deg"}},
        "B":  {"orientation": {"theta": 0.78539816339744831, "phi": "0deg"},
               "smearing": "uniform-cap", "epsilon": 0.5, "eta": 0.8},
        "B'": {"orientation": {"theta": "135deg"}, "smearing": "delta"}
      },
      "settings": [["A","B"], ["A","B'"], ["A'","B'"], ["A'","B"]],
      "herbert": {"thetas": ["22.5deg", 0.78539816339744831], "pairs": 1000},
      "scan": {"start": "0deg", "stop": "90deg", "steps": 10, "pairs": 2000}
    })json";

    const ExperimentConfig config = parse_experiment_json(text, "test");
    CHECK(config.model.value() == "bell-sign");
    CHECK(config.seed.value() == 7);
    CHECK(config.pairs == 500);
    CHECK(config.runs == 4);
    CHECK(config.mode == SamplingMode::SharedSample);
    CHECK(config.record_pairs.value());
    CHECK(config.workers == 2);

    REQUIRE(config.analyzers.size() == 4);
    CHECK(config.analyzers[0].first == "A");
    CHECK(config.analyzers[1].first == "A'");
    CHECK(std::abs(config.analyzer("A'").orientation().x() - 1.0) <= 1e-12);
    CHECK(std::abs(config.analyzer("B").orientation().x() -
                   std::sin(kPi / 4.0)) <= 1e-12);
    CHECK(config.analyzer("B").kind() == SmearingKind::UniformCap);
    CHECK(config.analyzer("B").epsilon() == 0.5);
    CHECK(config.analyzer("B").efficiency() == 0.8);
    CHECK(config.analyzer("B'").kind() == SmearingKind::Delta);

    REQUIRE(config.settings.size() == 4);
    const auto resolved = config.resolved_settings();
    REQUIRE(resolved.size() == 4);
    CHECK(resolved[0].first.orientation() == config.analyzer("A").orientation());
    CHECK(resolved[2].second.orientation() == config.analyzer("B'").orientation());

    REQUIRE(config.herbert.has_value());
    REQUIRE(config.herbert->thetas.size() == 2);
    CHECK(std::abs(config.herbert->thetas[0] - kPi / 8.0) <= 1e-12);
    CHECK(std::abs(config.herbert->thetas[1] - kPi / 4.0) <= 1e-12);
    CHECK(config.herbert->pairs.value() == 1000);

    REQUIRE(config.scan.has_value());
    CHECK(config.scan->start == 0.0);
    CHECK(std::abs(config.scan->stop - kPi / 2.0) <= 1e-12);
    CHECK(config.scan->steps == 10);
    CHECK(config.scan->pairs.value() == 2000);
}

TEST_CASE("experiment files reject unknown keys with the offending path") {
    check_throws_config(R"({"modle": "bell-sign"})", "modle");
    check_throws_config(
        R"({"analyzers": {"A": {"orientation": [0,0,1], "epsilonn": 1}}})",
        "epsilonn");
    check_throws_config(
        R"({"analyzers": {"A": {"orientation": {"theta": 0, "psi": 0}}}})", "psi");
    check_throws_config(R"({"herbert": {"thetas": [0.1], "paris": 7}})", "paris");
    check_throws_config(R"({"scan": {"start": 0, "stop": 1, "steps": 2, "go": 1}})",
                        "go");
}

TEST_CASE("experiment files reject structural mistakes") {
    check_throws_config(R"([1, 2])", "object");
    check_throws_config(R"({"seed": -1})", "seed");
    check_throws_config(R"({"seed": 1.5})", "seed");
    check_throws_config(R"({"pairs": 0})", "pairs");
    check_throws_config(R"({"mode": "both"})", "mode");
    check_throws_config(R"({"workers": 0})", "workers");
    check_throws_config(R"({"workers": 5000})", "workers");
    check_throws_config(
        R"({"analyzers": {"A": {"orientation": [0,0,1], "epsilon": 0.5}}})",
        "epsilon");
    check_throws_config(R"({"analyzers": {"A": {"orientation": [0,0,0]}}})",
                        "orientation");
    check_throws_config(R"({"analyzers": {"A": {"orientation": [0,0,1], "eta": 1.5}}})",
                        "A");
    check_throws_config(R"({"settings": [["A","B"]]})", "undefined");
    check_throws_config(
        R"({"analyzers": {"A": {"orientation": [0,0,1]}}, "settings": [["A"]]})",
        "settings[0]");
    check_throws_config(R"({"herbert": {}})", "thetas");
    check_throws_config(R"({"scan": {"start": 0, "steps": 3}})", "stop");

    // Parse errors carry the origin and the line.
    try {
        parse_experiment_json("{ nope", "broken.json");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        const std::string what = e.what();
        CHECK(what.find("broken.json") != std::string::npos);
        CHECK(what.find("line") != std::string::npos);
    }
}

TEST_CASE("command-line overrides beat file values") {
    ExperimentConfig config = parse_experiment_json(kQuadConfig, "test");

    CliOverrides none;
    apply_overrides(config, none);
    CHECK(config.model.value() == "qm-contextual");
    CHECK(config.seed.value() == 11);

    CliOverrides all;
    all.model = "bell-sign";
    all.mode = "shared";
    all.seed = 99;
    all.pairs = 5;
    all.runs = 2;
    all.workers = 3;
    apply_overrides(config, all);
    CHECK(config.model.value() == "bell-sign");
    CHECK(config.mode == SamplingMode::SharedSample);
    CHECK(config.seed.value() == 99);
    CHECK(config.pairs == 5);
    CHECK(config.runs == 2);
    CHECK(config.workers == 3);

    CliOverrides bad;
    bad.mode = "Fresh";
    CHECK_THROWS_AS(apply_overrides(config, bad), ConfigError);
}

TEST_CASE("cmd_predict") {
    const char* text = R"json({
      "analyzers": {
        "P1": {"orientation": {"theta": "0deg"}},
        "P2": {"orientation": {"theta": "180deg"}},
        "P3": {"orientation": {"theta": "0deg"}, "smearing": "uniform-cap",
               "epsilon": 0.5},
        "P4": {"orientation": {"theta": "0deg"}, "eta": 0}
      },
      "settings": [["P1","P2"], ["P3","P3"], ["P1","P4"]]
    })json";
    const ExperimentConfig config = parse_experiment_json(text, "test");

    const CommandOutput out = cmd_predict(config);
    const auto lines = lines_of(out.data);
    REQUIRE(lines.size() == 4);
    CHECK(lines[0] ==
          "first,second,theta,kappa_first,kappa_second,p_coincidence,E,E_conditional");

    const auto opposite = fields_of(lines[1]);
    REQUIRE(opposite.size() == 8);
    CHECK(opposite[0] == "P1");
    CHECK(opposite[1] == "P2");
    CHECK(std::abs(num(opposite[2]) - kPi) <= 1e-12);
    CHECK(num(opposite[3]) == 1.0);
    CHECK(num(opposite[4]) == 1.0);
    CHECK(std::abs(num(opposite[5]) - 0.5) <= 1e-12);
    CHECK(std::abs(num(opposite[6]) - 1.0) <= 1e-12);
    CHECK(std::abs(num(opposite[7]) - 1.0) <= 1e-12);

    const auto smeared = fields_of(lines[2]);
    CHECK(num(smeared[3]) == 0.75);
    CHECK(num(smeared[4]) == 0.75);
    CHECK(std::abs(num(smeared[5]) - 0.109375) <= 1e-12);
    CHECK(std::abs(num(smeared[6]) + 0.5625) <= 1e-12);
    CHECK(std::abs(num(smeared[7]) + 0.5625) <= 1e-12);

    const auto dead = fields_of(lines[3]);
    CHECK(num(dead[5]) == 0.0);
    CHECK(num(dead[6]) == 0.0);
    CHECK(num(dead[7]) == 0.0);

    const CommandOutput as_json = cmd_predict(config, OutputFormat::Json);
    const auto parsed = nlohmann::json::parse(as_json.data);
    REQUIRE(parsed.is_array());
    REQUIRE(parsed.size() == 3);
    CHECK(parsed[0]["first"] == "P1");
    CHECK(std::abs(parsed[0]["E"].get<double>() - 1.0) <= 1e-12);
    CHECK(parsed[1]["kappa_first"].get<double>() == 0.75);

    ExperimentConfig empty;
    CHECK_THROWS_AS(cmd_predict(empty), ConfigError);
}

TEST_CASE("cmd_chsh") {
    SUBCASE("settings list form, contextual model, fresh mode") {
        const ExperimentConfig config = parse_experiment_json(kQuadConfig, "test");
        const CommandOutput out = cmd_chsh(config);
        const auto lines = lines_of(out.data);
        REQUIRE(lines.size() == 5);
        CHECK(lines[0] == "run_index,E1,E2,E3,E4,S");
        for (int j = 1; j <= 4; ++j) {
            const auto row = fields_of(lines[j]);
            REQUIRE(row.size() == 6);
            CHECK(num(row[0]) == j - 1);
            const double s = std::abs(num(row[1]) - num(row[2])) +
                             std::abs(num(row[3]) + num(row[4]));
            CHECK(std::abs(s - num(row[5])) <= 1e-9);
        }
        CHECK(out.report.find("chsh: model=qm-contextual") != std::string::npos);
        CHECK(out.report.find("violates the bound") != std::string::npos);
    }

    SUBCASE("named analyzers A, A', B, B' work without a settings list") {
        std::string text = kQuadConfig;
        const auto cut = text.find("\"settings\"");
        REQUIRE(cut != std::string::npos);
        text = text.substr(0, text.rfind(',', cut)) + "\n}";
        const ExperimentConfig config = parse_experiment_json(text, "test");
        CHECK(config.settings.empty());
        const CommandOutput out = cmd_chsh(config);
        CHECK(lines_of(out.data).size() == 5);
    }

    SUBCASE("shared bell-sign runs never cross 2") {
        ExperimentConfig config = parse_experiment_json(kQuadConfig, "test");
        config.model = "bell-sign";
        config.mode = SamplingMode::SharedSample;
        config.pairs = 400;
        config.runs = 50;
        const CommandOutput out = cmd_chsh(config);
        const auto lines = lines_of(out.data);
        REQUIRE(lines.size() == 51);
        for (std::size_t j = 1; j < lines.size(); ++j) {
            CHECK(num(fields_of(lines[j])[5]) <= 2.0 + 1e-9);
        }
    }

    SUBCASE("factorized correlations pool to S = 2 |m1 m2|") {
        ExperimentConfig config = parse_experiment_json(kQuadConfig, "test");
        config.model = "factorized(0.5,0.5)";
        config.pairs = 10000;
        config.runs = 40;
        config.seed = 5;
        const CommandOutput out = cmd_chsh(config);
        const auto lines = lines_of(out.data);
        REQUIRE(lines.size() == 41);

        // Pool the per-run correlations per setting, then form S once.
        // Averaging per-run S values instead would fold noise through the
        // absolute values and bias the mean upward.
        std::array<std::vector<double>, 4> columns;
        for (std::size_t j = 1; j < lines.size(); ++j) {
            const auto row = fields_of(lines[j]);
            for (int k = 0; k < 4; ++k) {
                columns[k].push_back(num(row[1 + k]));
            }
        }
        std::array<EstimateWithError, 4> pooled;
        for (int k = 0; k < 4; ++k) {
            pooled[k] = mean_stderr(columns[k]);
        }
        const double s = std::abs(pooled[0].value - pooled[1].value) +
                         std::abs(pooled[2].value + pooled[3].value);
        double var = 0.0;
        for (const auto& e : pooled) {
            var += e.stderr_ * e.stderr_;
        }
        CHECK(std::abs(s - 0.5) <= 4.0 * std::sqrt(var));
    }

    SUBCASE("configuration errors") {
        ExperimentConfig config = parse_experiment_json(kQuadConfig, "test");
        config.settings.resize(2);
        CHECK_THROWS_AS(cmd_chsh(config), ConfigError);

        config = parse_experiment_json(kQuadConfig, "test");
        std::swap(config.settings[1], config.settings[3]);
        CHECK_THROWS_AS(cmd_chsh(config), ConfigError);

        config = parse_experiment_json(kQuadConfig, "test");
        config.model.reset();
        CHECK_THROWS_AS(cmd_chsh(config), ConfigError);

        config = parse_experiment_json(kQuadConfig, "test");
        config.seed.reset();
        CHECK_THROWS_AS(cmd_chsh(config), ConfigError);
    }
}

TEST_CASE("cmd_herbert") {
    const char* text = R"json({
      "model": "qm-contextual",
      "seed": 3,
      "herbert": {"thetas": ["22.5deg", "45deg", "67.5deg"], "pairs": 20000}
    })json";

    SUBCASE("quantum rates violate the doubling inequality at every theta") {
        const ExperimentConfig config = parse_experiment_json(text, "test");
        const CommandOutput out = cmd_herbert(config);
        const auto lines = lines_of(out.data);
        REQUIRE(lines.size() == 4);
        CHECK(lines[0] ==
              "theta,d_theta,d_2theta,two_d_theta,violated,d_theta_ci_low,"
              "d_theta_ci_high,d_2theta_ci_low,d_2theta_ci_high");
        for (std::size_t j = 1; j < lines.size(); ++j) {
            const auto row = fields_of(lines[j]);
            REQUIRE(row.size() == 9);
            CHECK(row[4] == "1");
            CHECK(num(row[2]) > num(row[3]));
            CHECK(num(row[5]) <= num(row[1]));
            CHECK(num(row[1]) <= num(row[6]));
            CHECK(num(row[7]) <= num(row[2]));
            CHECK(num(row[2]) <= num(row[8]));
            const double expect = std::pow(std::sin(num(row[0]) / 2.0), 2);
            CHECK(std::abs(num(row[1]) - expect) <= 0.01);
        }
        CHECK(out.report.find("pairs=20000") != std::string::npos);
    }

    SUBCASE("bell-sign rates double exactly and stay unflagged") {
        ExperimentConfig config = parse_experiment_json(text, "test");
        config.model = "bell-sign";
        const CommandOutput out = cmd_herbert(config);
        const auto lines = lines_of(out.data);
        for (std::size_t j = 1; j < lines.size(); ++j) {
            const auto row = fields_of(lines[j]);
            CHECK(row[4] == "0");
            CHECK(std::abs(num(row[1]) - num(row[0]) / kPi) <= 0.01);
        }
    }

    SUBCASE("the boundary angle shows equality, not violation") {
        ExperimentConfig config = parse_experiment_json(text, "test");
        config.herbert->thetas = {kPi / 2.0};
        const CommandOutput out = cmd_herbert(config);
        const auto row = fields_of(lines_of(out.data)[1]);
        CHECK(row[4] == "0");
        CHECK(num(row[2]) == 1.0);
    }

    SUBCASE("missing pieces are configuration errors") {
        ExperimentConfig config = parse_experiment_json(text, "test");
        config.herbert.reset();
        CHECK_THROWS_AS(cmd_herbert(config), ConfigError);

        config = parse_experiment_json(text, "test");
        config.model.reset();
        CHECK_THROWS_AS(cmd_herbert(config), ConfigError);
    }
}

TEST_CASE("cmd_scan") {
    SUBCASE("a single grid point sits at the start angle") {
        const char* text = R"json({
          "model": "qm-contextual", "seed": 2, "pairs": 4000,
          "scan": {"start": "0deg", "stop": "90deg", "steps": 1}
        })json";
        const ExperimentConfig config = parse_experiment_json(text, "test");
        const CommandOutput out = cmd_scan(config);
        const auto lines = lines_of(out.data);
        REQUIRE(lines.size() == 2);
        CHECK(lines[0] == "theta,E_qm_closed,E_model_mc,stderr");
        const auto row = fields_of(lines[1]);
        CHECK(num(row[0]) == 0.0);
        CHECK(num(row[1]) == -1.0);
        CHECK(num(row[2]) == -1.0);
        CHECK(num(row[3]) == 0.0);
    }

    SUBCASE("bell-sign tracks its linear law across the grid") {
        const char* text = R"json({
          "model": "bell-sign", "seed": 9,
          "scan": {"start": "0deg", "stop": "180deg", "steps": 7, "pairs": 20000}
        })json";
        const ExperimentConfig config = parse_experiment_json(text, "test");
        const CommandOutput out = cmd_scan(config);
        const auto lines = lines_of(out.data);
        REQUIRE(lines.size() == 8);
        for (std::size_t j = 1; j < lines.size(); ++j) {
            const auto row = fields_of(lines[j]);
            const double theta = num(row[0]);
            CHECK(std::abs(num(row[1]) + std::cos(theta)) <= 1e-9);
            const double linear = -(1.0 - 2.0 * theta / kPi);
            CHECK(std::abs(num(row[2]) - linear) <= 4.0 * num(row[3]) + 1e-12);
        }
    }

    SUBCASE("a missing scan block is a configuration error") {
        ExperimentConfig config =
            parse_experiment_json(R"({"model": "bell-sign", "seed": 1})", "test");
        CHECK_THROWS_AS(cmd_scan(config), ConfigError);
    }
}

TEST_CASE("output format names") {
    CHECK(parse_output_format("csv") == OutputFormat::Csv);
    CHECK(parse_output_format("json") == OutputFormat::Json);
    CHECK_THROWS_AS(parse_output_format("yaml"), ConfigError);
}

TEST_CASE("the binary routes data and reports and sets exit codes") {
    const std::string config_path = write_tmp("quad.json", kQuadConfig);

    SUBCASE("data to stdout, report to stderr") {
        const BinaryResult r = run_binary("chsh --config " + config_path);
        CHECK(r.exit_code == 0);
        CHECK(r.out.rfind("run_index,", 0) == 0);
        CHECK(lines_of(r.out).size() == 5);
        CHECK(r.err.find("chsh: model=qm-contextual") != std::string::npos);
    }

    SUBCASE("--out moves the data into a file and the report to stdout") {
        const std::string direct = run_binary("chsh --config " + config_path).out;
        const std::string data_path = (tmp_dir() / "chsh.csv").string();
        const BinaryResult r =
            run_binary("chsh --config " + config_path + " --out " + data_path);
        CHECK(r.exit_code == 0);
        CHECK(read_file(data_path) == direct);
        CHECK(r.out.find("chsh: model=qm-contextual") != std::string::npos);
        CHECK(r.err.empty());

        run_binary("chsh --config " + config_path + " --out " + data_path);
        CHECK(read_file(data_path) == direct);
    }

    SUBCASE("json output parses and overrides apply") {
        const BinaryResult r = run_binary("chsh --config " + config_path +
                                          " --format json --runs 2 --seed 1");
        CHECK(r.exit_code == 0);
        const auto parsed = nlohmann::json::parse(r.out);
        REQUIRE(parsed.is_array());
        REQUIRE(parsed.size() == 2);
        CHECK(parsed[0].contains("run_index"));
        CHECK(parsed[0].contains("S"));
        CHECK(r.err.find("seed=1") != std::string::npos);
    }

    SUBCASE("reruns are byte-identical") {
        const BinaryResult a = run_binary("herbert --config " +
                                          write_tmp("herb.json", R"json({
          "model": "qm-contextual", "seed": 3,
          "herbert": {"thetas": ["30deg"], "pairs": 5000}
        })json"));
        const BinaryResult b = run_binary("herbert --config " +
                                          (tmp_dir() / "herb.json").string());
        CHECK(a.exit_code == 0);
        CHECK(a.out == b.out);
        CHECK(a.err == b.err);
    }

    SUBCASE("config mistakes exit 2 with a config error") {
        const BinaryResult missing = run_binary("chsh --config /nonexistent.json");
        CHECK(missing.exit_code == 2);
        CHECK(missing.err.find("config error:") != std::string::npos);

        const std::string bad_path = write_tmp("bad.json", R"({"modle": 1})");
        const BinaryResult bad = run_binary("predict --config " + bad_path);
        CHECK(bad.exit_code == 2);
        CHECK(bad.err.find("modle") != std::string::npos);

        const BinaryResult usage = run_binary("not-a-command");
        CHECK(usage.exit_code == 2);
    }

    SUBCASE("an all-dark run exits 3 and names the counts") {
        const std::string dark_path = write_tmp("dark.json", R"json({
          "model": "qm-contextual", "seed": 1, "pairs": 50, "runs": 1,
          "analyzers": {
            "A":  {"orientation": {"theta": "0deg"},   "eta": 0},
            "A'": {"orientation": {"theta": "90deg"},  "eta": 0},
            "B":  {"orientation": {"theta": "45deg"},  "eta": 0},
            "B'": {"orientation": {"theta": "135deg"}, "eta": 0}
          }
        })json");
        const BinaryResult r = run_binary("chsh --config " + dark_path);
        CHECK(r.exit_code == 3);
        CHECK(r.err.find("degenerate run") != std::string::npos);
        CHECK(r.err.find("0/50") != std::string::npos);
    }

    SUBCASE("--help exits cleanly") {
        const BinaryResult r = run_binary("--help");
        CHECK(r.exit_code == 0);
        CHECK(r.out.find("chsh") != std::string::npos);
    }
}
