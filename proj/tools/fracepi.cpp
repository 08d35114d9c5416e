// Command-line front end: simulate, analyze, reproduce, sweep-alpha.

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "fracepi/cli/commands.hpp"

namespace {

void add_common(CLI::App* cmd, fracepi::cli::CommonOptions& opts) {
    cmd->add_option("--out", opts.out_dir, "Output directory");
    cmd->add_option("--h", opts.step, "Step size (overrides the scenario grid)");
    cmd->add_option("--t-end", opts.t_end, "Horizon (overrides the scenario grid)");
    cmd->add_option("--format", opts.format, "Restrict output to one format")
        ->check(CLI::IsMember({"csv", "json", "svg"}));
    cmd->add_flag("--clamp-nonnegative", opts.clamp_nonnegative, "Floor states at zero after each corrector pass");
}

}  // namespace

int main(int argc, char** argv) {
    namespace cli = fracepi::cli;

    CLI::App app{"Fractional SIS/SIRS epidemic toolkit"};
    app.require_subcommand(1);
    // "--h" is the step size; help stays on --help only.
    app.set_help_flag("--help", "Print this help message and exit");

    cli::CommonOptions opts;
    std::string scenario_path;
    std::string figure_id;
    std::string range_spec;

    auto* simulate = app.add_subcommand("simulate", "Integrate a scenario file for each alpha");
    simulate->add_option("scenario", scenario_path, "Scenario JSON file")->required();
    add_common(simulate, opts);

    auto* analyze = app.add_subcommand("analyze", "Print stability reports as JSON");
    analyze->add_option("scenario", scenario_path, "Scenario JSON file")->required();
    add_common(analyze, opts);

    auto* reproduce = app.add_subcommand("reproduce", "Regenerate a figure preset (fig1 ... fig14)");
    reproduce->add_option("figure", figure_id, "Figure id")->required();
    add_common(reproduce, opts);

    auto* sweep = app.add_subcommand("sweep-alpha", "Summarize a scenario across a range of alphas");
    sweep->add_option("scenario", scenario_path, "Scenario JSON file")->required();
    sweep->add_option("range", range_spec, "start:end:step")->required();
    add_common(sweep, opts);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return cli::exit_config_error;
    }

    if (*simulate) return cli::cmd_simulate(scenario_path, opts, std::cout, std::cerr);
    if (*analyze) return cli::cmd_analyze(scenario_path, opts, std::cout, std::cerr);
    if (*reproduce) return cli::cmd_reproduce(figure_id, opts, std::cout, std::cerr);
    if (*sweep) return cli::cmd_sweep_alpha(scenario_path, range_spec, opts, std::cout, std::cerr);
    return cli::exit_config_error;
}
