#include "spce/cli/commands.hpp"
#include "spce/error.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

namespace {

struct Invocation {
    std::string config_path;
    std::string out_path;
    std::string format = "csv";
    spce::cli::CliOverrides overrides;
};

void add_common_options(CLI::App* cmd, Invocation& inv) {
    cmd->add_option("--config", inv.config_path, "Experiment config file (JSON)")
        ->required();
    cmd->add_option("--seed", inv.overrides.seed, "Root seed (overrides the file)");
    cmd->add_option("--pairs", inv.overrides.pairs, "Pairs per run N");
    cmd->add_option("--runs", inv.overrides.runs, "Number of runs M");
    cmd->add_option("--model", inv.overrides.model,
                    "Model name: qm-contextual | bell-sign | factorized(m1,m2)");
    cmd->add_option("--mode", inv.overrides.mode, "Sampling mode: shared | fresh");
    cmd->add_option("--workers", inv.overrides.workers, "Worker threads for runs");
    cmd->add_option("--out", inv.out_path,
                    "Write the data table here; the report then goes to stdout");
    cmd->add_option("--format", inv.format, "Data format: csv | json");
}

int run(const std::string& command, const Invocation& inv) {
    using namespace spce::cli;
    ExperimentConfig config = load_experiment_file(inv.config_path);
    apply_overrides(config, inv.overrides);
    OutputFormat format = parse_output_format(inv.format);

    CommandOutput output;
    if (command == "predict") {
        output = cmd_predict(config, format);
    } else if (command == "chsh") {
        output = cmd_chsh(config, format);
    } else if (command == "herbert") {
        output = cmd_herbert(config, format);
    } else {
        output = cmd_scan(config, format);
    }

    if (!inv.out_path.empty()) {
        std::ofstream out(inv.out_path, std::ios::binary);
        if (!out) {
            throw spce::ConfigError("cannot open output file '" + inv.out_path + "'");
        }
        out << output.data;
        if (!out.flush()) {
            throw spce::ConfigError("failed writing output file '" + inv.out_path + "'");
        }
        std::cout << output.report;
    } else {
        std::cout << output.data;
        std::cerr << output.report;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Simulation laboratory for spin-polarization correlation experiments"};
    app.require_subcommand(1);

    Invocation inv;
    const char* names[] = {"predict", "chsh", "herbert", "scan"};
    const char* descriptions[] = {
        "Closed-form predictions per setting pair",
        "Finite-sample CHSH experiment (fresh or shared sampling)",
        "Message-disagreement scan d(theta) vs 2 d(theta)",
        "Correlation curve over a theta grid: closed form vs Monte Carlo"};
    for (int i = 0; i < 4; ++i) {
        add_common_options(app.add_subcommand(names[i], descriptions[i]), inv);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        return run(app.get_subcommands().front()->get_name(), inv);
    } catch (const spce::DegenerateRunError& e) {
        std::cerr << "degenerate run: " << e.what() << " (coincidences "
                  << e.coincidence_count << "/" << e.total_pairs << ")\n";
        return 3;
    } catch (const spce::Error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
