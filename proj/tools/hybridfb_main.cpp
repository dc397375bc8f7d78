// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end: run a configured experiment, run the validation
// suite, or print a template configuration.

#include <cstdlib>
#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "hybridfb/config.hpp"
#include "hybridfb/experiments.hpp"
#include "hybridfb/parallel.hpp"
#include "hybridfb/validation.hpp"

int main(int argc, char** argv) {
    hybridfb::pin_blas_single_thread();

    CLI::App app{"link-level simulator for hybrid statistical/instantaneous channel feedback"};
    app.require_subcommand(1);

    std::string config_path, out_dir;
    std::uint64_t seed = 0;
    unsigned threads = 0;

    CLI::App* run = app.add_subcommand("run", "run the experiment described by a config file");
    run->add_option("config", config_path, "key = value config file")
        ->required()
        ->check(CLI::ExistingFile);
    CLI::Option* opt_seed = run->add_option("--seed", seed, "override the config seed");
    CLI::Option* opt_out =
        run->add_option("--out-dir", out_dir,
                        "output directory (beats the HYBRIDFB_OUT_DIR env var and the config)");
    CLI::Option* opt_threads = run->add_option("--threads", threads, "worker threads");

    CLI::App* validate = app.add_subcommand("validate", "run the full validation suite");
    CLI::Option* val_threads =
        validate->add_option("--threads", threads, "thread count exercised by the determinism check");

    app.add_subcommand("print-defaults", "print a config file with the default settings");

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand("print-defaults")) {
            hybridfb::print_default_config(std::cout);
            return 0;
        }
        if (app.got_subcommand("validate")) {
            const unsigned t = val_threads->count() ? std::max(1u, threads) : 2;
            const auto results = hybridfb::run_validation_suite(std::cout, t);
            return hybridfb::all_passed(results) ? 0 : 2;
        }

        hybridfb::ExperimentConfig cfg = hybridfb::parse_config(config_path);
        if (opt_seed->count()) cfg.seed = seed;
        if (opt_threads->count()) cfg.threads = std::max(1u, threads);
        if (const char* env = std::getenv("HYBRIDFB_OUT_DIR")) cfg.out_dir = env;
        if (opt_out->count()) cfg.out_dir = out_dir;
        return hybridfb::run_experiment(cfg);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
