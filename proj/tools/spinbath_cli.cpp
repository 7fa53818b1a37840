// spinbath_cli.cpp: command-line driver
//
//   spinbath run       --config c.ini [--seed S] [--threads N] [--out DIR] [--resume]
//                      [--seeds 1,2,3 --jobs J]
//   spinbath spectrum  --config c.ini
//   spinbath ldos      --config c.ini [--out DIR]
//   spinbath fit       --out DIR            (or --config c.ini to use its output)
//   spinbath validate  --config c.ini
//
// Exit codes: 0 success, 2 configuration error, 3 numerical failure,
// 4 budget exceeded.

#include "spinbath/config.hpp"
#include "spinbath/errors.hpp"
#include "spinbath/runner.hpp"

#include <CLI11.hpp>
#include <omp.h>

#include <cstdio>
#include <iostream>
#include <optional>

namespace {

struct Common {
    std::string config;
    std::optional<std::uint64_t> seed;
    int threads = 0;
    std::string out;
};

void add_common(CLI::App* sub, Common& c, bool config_required = true) {
    auto* opt = sub->add_option("--config", c.config, "run configuration file");
    if (config_required) {
        opt->required();
    }
    sub->add_option("--seed", c.seed, "override the root seed");
    sub->add_option("--threads", c.threads, "OpenMP threads (default: runtime default)")->check(CLI::NonNegativeNumber);
    sub->add_option("--out", c.out, "output directory (default: the config's output)");
}

spinbath::RunConfig load(const Common& c) {
    spinbath::RunConfig cfg = spinbath::load_config(c.config);
    if (c.seed) {
        cfg.run.seed = *c.seed;
    }
    if (!c.out.empty()) {
        cfg.run.output = c.out;
    }
    return cfg;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact dynamics of a spin system coupled to a spin bath"};
    app.require_subcommand(1);

    Common common;
    bool resume = false;
    int stop_after = -1;
    double corrupt = 0.0;
    std::vector<std::uint64_t> seeds;
    int jobs = 1;

    auto* run = app.add_subcommand("run", "propagate and write metric time series");
    add_common(run, common);
    run->add_flag("--resume", resume, "continue from the checkpoint in the output directory");
    run->add_option("--seeds", seeds, "batch mode: run each seed in its own subdirectory")->delimiter(',');
    run->add_option("--jobs", jobs, "batch mode: concurrent runs")->check(CLI::PositiveNumber);
    run->add_option("--stop-after", stop_after, "stop after this step with a checkpoint")->group("");
    run->add_option("--corrupt-bounds", corrupt, "scale the spectral bounds")->group("");

    auto* spectrum = app.add_subcommand("spectrum", "print the system eigenvalues and clusters");
    add_common(spectrum, common);

    auto* ldos = app.add_subcommand("ldos", "local density of states of the initial state");
    add_common(ldos, common);

    auto* fit = app.add_subcommand("fit", "fit relaxation laws to an existing metrics.csv");
    add_common(fit, common, false);

    auto* validate = app.add_subcommand("validate", "check the propagator against dense oracles");
    add_common(validate, common);
    validate->add_option("--corrupt-bounds", corrupt, "scale the spectral bounds")->group("");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (common.threads > 0) {
            omp_set_num_threads(common.threads);
        }
        if (*fit) {
            std::string dir = common.out;
            if (dir.empty()) {
                if (common.config.empty()) {
                    throw spinbath::ConfigError("fit needs --out or --config");
                }
                dir = load(common).run.output;
            }
            const auto report = spinbath::run_fit(dir);
            std::cout << report.dump(2) << '\n';
            return 0;
        }

        const spinbath::RunConfig cfg = load(common);
        if (*run) {
            spinbath::RunOptions opts;
            opts.out_dir = cfg.run.output;
            opts.resume = resume;
            opts.stop_after = stop_after;
            opts.corrupt_bounds = corrupt;
            if (!seeds.empty()) {
                const auto codes = spinbath::run_batch(cfg, seeds, jobs, opts);
                int worst = 0;
                for (int c : codes) {
                    worst = std::max(worst, c);
                }
                return worst;
            }
            const auto summary = spinbath::run_simulation(cfg, opts);
            std::fprintf(stderr, "%s at step %d\n", summary.stopped_early ? "stopped" : "finished",
                         summary.last_step);
            return 0;
        }
        if (*spectrum) {
            spinbath::write_spectrum(cfg, std::cout);
            return 0;
        }
        if (*ldos) {
            const auto summary = spinbath::run_ldos(cfg, cfg.run.output);
            std::cout << summary.dump(2) << '\n';
            return 0;
        }
        if (*validate) {
            const auto report = spinbath::run_validation(cfg, corrupt);
            std::cout << report.to_json().dump(2) << '\n';
            return report.passed() ? 0 : 3;
        }
    } catch (const spinbath::SpectralBoundsError& e) {
        std::fprintf(stderr, "error: bounds failure detected: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return spinbath::exit_code_for(e);
    }
    return 1;
}
