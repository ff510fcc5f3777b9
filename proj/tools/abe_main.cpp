// Command-line front end over the shared-library C API.
#include <cstdint>
#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "abe/abe.h"

namespace {

struct CommonArgs {
    std::string config;
    std::string out;
    std::int64_t seed = -1;
    int jobs = 0;
    bool paper_scale = false;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config, "config file (flat key=value)")
        ->check(CLI::ExistingFile);
    cmd->add_option("--seed", args.seed, "master seed override");
    cmd->add_option("--out", args.out, "output CSV path (default: stdout)");
    cmd->add_flag("--paper-scale", args.paper_scale,
                  "full reference scale (N=50000, 100 seeds)");
    cmd->add_option("--jobs", args.jobs, "worker threads (default: hardware)");
}

int run_experiment(const char* experiment, const CommonArgs& args,
                   bool check_nce_ordering = false) {
    abe_run_overrides overrides{};
    overrides.experiment = experiment;
    overrides.out_path = args.out.empty() ? nullptr : args.out.c_str();
    overrides.seed = args.seed;
    overrides.jobs = args.jobs;
    overrides.paper_scale = args.paper_scale ? 1 : 0;
    int nce_ordering = 1;
    const abe_status status = abe_run_config_file_checked(
        args.config.empty() ? nullptr : args.config.c_str(), &overrides,
        &nce_ordering);
    if (status != ABE_OK) {
        std::fprintf(stderr, "error: %s\n", abe_last_error());
        return 1;
    }
    if (!args.out.empty())
        std::fprintf(stderr, "wrote %s\n", args.out.c_str());
    if (check_nce_ordering && !nce_ordering) {
        std::fprintf(stderr, "NCE ordering violated: another loss had the "
                             "smaller empirical MSE\n");
        return 3;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{std::string("abe ") + abe_version() +
                 " — annealed estimation of log normalization constants"};
    app.require_subcommand(1);

    CommonArgs estimate_args, compare_args, distance_args, dimension_args,
        theory_args;
    CLI::App* estimate =
        app.add_subcommand("estimate", "single estimation run");
    add_common(estimate, estimate_args);
    CLI::App* compare = app.add_subcommand(
        "compare-losses", "NCE vs IS vs RevIS on a fixed pair");
    add_common(compare, compare_args);
    CLI::App* distance = app.add_subcommand(
        "sweep-distance", "MSE against the parameter distance");
    add_common(distance, distance_args);
    CLI::App* dimension = app.add_subcommand(
        "sweep-dimension", "MSE against the dimension");
    add_common(dimension, dimension_args);
    CLI::App* theory = app.add_subcommand(
        "theory", "closed-form and quadrature predictions per sweep point");
    add_common(theory, theory_args);

    std::string plot_csv, plot_svg = "plot.svg";
    CLI::App* plot = app.add_subcommand("plot", "render a sweep CSV as SVG");
    plot->add_option("csv", plot_csv, "input sweep CSV")
        ->required()
        ->check(CLI::ExistingFile);
    plot->add_option("--out", plot_svg, "output SVG path");

    CLI11_PARSE(app, argc, argv);

    if (estimate->parsed()) return run_experiment("estimate_once", estimate_args);
    if (compare->parsed())
        return run_experiment("compare_losses", compare_args, true);
    if (distance->parsed())
        return run_experiment("sweep_distance", distance_args);
    if (dimension->parsed())
        return run_experiment("sweep_dimension", dimension_args);
    if (theory->parsed()) return run_experiment("theory_report", theory_args);
    if (plot->parsed()) {
        if (abe_plot(plot_csv.c_str(), plot_svg.c_str()) != ABE_OK) {
            std::fprintf(stderr, "error: %s\n", abe_last_error());
            return 1;
        }
        std::fprintf(stderr, "wrote %s\n", plot_svg.c_str());
        return 0;
    }
    return 1;
}
