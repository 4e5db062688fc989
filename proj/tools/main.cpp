#include <cstdint>
#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "cbct/errors.hpp"
#include "cbct/experiment.hpp"
#include "cbct/parallel.hpp"

namespace {

struct Options {
    std::string config;
    std::string method;
    std::string out_dir;
    std::uint64_t seed = 0;
    bool seed_given = false;
    int views_stride = 1;
    int threads = 0;
};

void add_common(CLI::App* sub, Options& opt, bool with_method) {
    sub->add_option("--config", opt.config, "experiment config JSON")->required();
    sub->add_option("--out", opt.out_dir, "output directory (overrides config)");
    sub->add_option("--seed", opt.seed, "RNG seed (overrides config)")
        ->each([&opt](const std::string&) { opt.seed_given = true; });
    sub->add_option("--threads", opt.threads, "worker thread count (0 = auto)");
    if (with_method)
        sub->add_option("--method", opt.method,
                        "fdk-naive | fdk-clipped | mbir-plain | mbir-thresholded");
}

cbct::ExperimentConfig load_with_overrides(const Options& opt) {
    cbct::ExperimentConfig cfg = cbct::load_experiment_config(opt.config);
    if (opt.seed_given) {
        cfg.seed = opt.seed;
        cfg.acquisition.rng_seed = opt.seed;
    }
    if (!opt.out_dir.empty()) cfg.out_dir = opt.out_dir;
    if (!opt.method.empty()) cfg.method = opt.method;
    cbct::refresh_resolved_json(cfg);
    return cfg;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"cone-beam CT simulation and reconstruction toolkit"};
    app.require_subcommand(1);

    Options opt;
    CLI::App* phantom = app.add_subcommand("phantom", "rasterize the phantom volume");
    CLI::App* simulate = app.add_subcommand("simulate", "simulate a noisy scan");
    CLI::App* reconstruct =
        app.add_subcommand("reconstruct", "reconstruct with one method");
    CLI::App* sweep =
        app.add_subcommand("sparse-sweep", "view-subsampling comparison sweep");
    CLI::App* profile =
        app.add_subcommand("profile", "line profile through an existing reconstruction");
    CLI::App* metrics =
        app.add_subcommand("metrics", "metrics for an existing reconstruction");

    add_common(phantom, opt, false);
    add_common(simulate, opt, false);
    add_common(reconstruct, opt, true);
    reconstruct->add_option("--views-stride", opt.views_stride,
                            "keep every N-th view (must divide the view count)");
    add_common(sweep, opt, false);
    add_common(profile, opt, true);
    add_common(metrics, opt, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        if (opt.threads > 0) cbct::set_thread_count(opt.threads);
        cbct::ExperimentConfig cfg = load_with_overrides(opt);
        const std::string method = opt.method.empty() ? cfg.method : opt.method;
        if (phantom->parsed()) return cbct::cmd_phantom(cfg);
        if (simulate->parsed()) return cbct::cmd_simulate(cfg);
        if (reconstruct->parsed())
            return cbct::cmd_reconstruct(cfg, method, opt.views_stride);
        if (sweep->parsed()) return cbct::cmd_sparse_sweep(cfg);
        if (profile->parsed()) return cbct::cmd_profile(cfg, method);
        if (metrics->parsed()) return cbct::cmd_metrics(cfg, method);
        std::cerr << "error: no subcommand\n";
        return 2;
    } catch (const cbct::config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const cbct::numeric_error& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
