#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "gammalim/experiments.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Phase field energy experiments"};
    app.require_subcommand(1);

    std::string config;
    std::string out = ".";
    std::optional<double> resolution;

    using Runner = int (*)(std::string_view, const gammalim::RunOptions&);
    Runner runner = nullptr;
    auto add = [&](const char* name, const char* help, Runner r) {
        auto* sub = app.add_subcommand(name, help);
        sub->add_option("--config", config, "JSON config file")->required();
        sub->add_option("--out", out, "Output directory");
        sub->add_option("--resolution", resolution, "Graph sampling resolution")->check(CLI::PositiveNumber);
        sub->callback([&runner, r] { runner = r; });
    };
    add("minimize-sweep", "Minimize the penalized energy over a decreasing eps schedule", gammalim::run_minimize_sweep);
    add("recovery", "Build recovery sequences and check the limsup inequality", gammalim::run_recovery);
    add("kwc", "Alternating minimization of the coupled (u, v) energy", gammalim::run_kwc);
    add("unfold", "Arc-length unfolding of a field", gammalim::run_unfold);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : gammalim::exit_config_error;
    }

    gammalim::RunOptions opts;
    opts.out_dir = out;
    opts.resolution = resolution;
    opts.log = &std::cerr;
    return gammalim::run_from_file(runner, config, opts);
}
