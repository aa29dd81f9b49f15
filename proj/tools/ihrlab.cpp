// ihrlab: run the headroom-ratio experiments and write their tables, JSON
// summaries and plot data.
//
//   ihrlab exp1|exp2|exp3|all [--config path] [--seed u64] [--out dir]
//          [--format csv|json|both] [--threads n]
//   ihrlab defaults            print the default configuration as JSON

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "ihr/config.hpp"
#include "ihr/error.hpp"
#include "ihr/report.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Inference headroom ratio simulation lab"};
    app.require_subcommand(1);

    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::string out_dir;
    std::string format;
    unsigned threads = 0;

    auto add_run_options = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "JSON configuration file")->check(CLI::ExistingFile);
        cmd->add_option("--seed", seed, "master seed (overrides the config)");
        cmd->add_option("--out", out_dir, "output directory (overrides the config)");
        cmd->add_option("--format", format, "csv, json or both (overrides the config)")
            ->check(CLI::IsMember({"csv", "json", "both"}));
        cmd->add_option("--threads", threads, "worker threads, 0 = all cores; never changes results");
    };

    auto* exp1 = app.add_subcommand("exp1", "collapse probability vs. IHR and logistic threshold");
    auto* exp2 = app.add_subcommand("exp2", "noise sensitivity sweep");
    auto* exp3 = app.add_subcommand("exp3", "proportional control comparison");
    auto* all = app.add_subcommand("all", "run all three experiments");
    auto* defaults = app.add_subcommand("defaults", "print the default configuration");
    for (auto* cmd : {exp1, exp2, exp3, all}) {
        add_run_options(cmd);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return ihr::kExitUsage;
    }

    if (defaults->parsed()) {
        std::cout << ihr::serialize_config(ihr::ExperimentSuiteConfig{});
        return ihr::kExitOk;
    }

    ihr::ExperimentSuiteConfig config;
    try {
        if (!config_path.empty()) {
            config = ihr::load_config(config_path);
        }
        if (seed) {
            config.set_master_seed(*seed);
        }
        if (!out_dir.empty()) {
            config.output_dir = out_dir;
        }
        if (!format.empty()) {
            config.format = ihr::parse_output_format(format);
        }
    } catch (const ihr::Error& e) {
        std::cerr << "config: " << ihr::to_string(e.code()) << ": " << e.what() << "\n";
        return ihr::exit_status_for(e.code());
    }

    ihr::Selection selection;
    selection.exp1 = exp1->parsed() || all->parsed();
    selection.exp2 = exp2->parsed() || all->parsed();
    selection.exp3 = exp3->parsed() || all->parsed();

    return ihr::run_suite(config, selection, ihr::SuiteOptions{threads}, std::cout, std::cerr);
}
