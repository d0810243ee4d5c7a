#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "osw/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"oswgate: standing-wave gate simulation and robustness analysis"};
    app.require_subcommand(1);

    std::string config_path;
    std::string output;
    long long seed = 0;
    unsigned threads = 1;
    auto* run = app.add_subcommand("run", "execute one JSON job configuration");
    run->add_option("-c,--config", config_path, "job configuration file")->required();
    auto* output_opt = run->add_option("-o,--output", output, "override the output table path");
    auto* seed_opt = run->add_option("-s,--seed", seed, "override the RNG seed")->check(CLI::NonNegativeNumber);
    run->add_option("-j,--threads", threads, "worker threads (0 = hardware concurrency)");

    std::string results_dir;
    auto* compare = app.add_subcommand("compare", "check preset outputs against the reference figures");
    compare->add_option("-r,--results", results_dir, "directory holding the preset outputs")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    if (*run) {
        osw::cli::RunOverrides o;
        if (*output_opt) o.output = output;
        if (*seed_opt) o.seed = seed;
        o.threads = threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : threads;
        return osw::cli::run(config_path, o);
    }

    const auto report = osw::cli::compare_figures(results_dir);
    std::cout << osw::cli::format_report(report);
    for (const auto& r : report) {
        if (r.verdict != osw::cli::Verdict::pass) return 1;
    }
    return 0;
}
