#include <cstdint>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "percolab/experiment.hpp"
#include "percolab/version.hpp"

int main(int argc, char** argv) {
    CLI::App app{"percolab: pattern/cluster experiments on random lattice fields"};
    app.set_version_flag("--version", percolab::kVersion);
    app.require_subcommand(1);

    std::string config_path;
    std::uint64_t seed = 0;
    bool seed_set = false;
    std::string out_dir;
    bool out_set = false;
    int workers = 0;
    bool workers_set = false;

    auto* run = app.add_subcommand("run", "run an experiment from a config file");
    run->add_option("--config", config_path, "experiment config file")->required();
    run->add_option("--seed", seed, "override the master seed")
        ->each([&](const std::string&) { seed_set = true; });
    run->add_option("--out", out_dir, "override the output directory")
        ->each([&](const std::string&) { out_set = true; });
    run->add_option("--workers", workers, "worker thread count")
        ->each([&](const std::string&) { workers_set = true; });

    auto* validate =
        app.add_subcommand("validate", "check a config file and list problems");
    validate->add_option("--config", config_path, "experiment config file")
        ->required();

    CLI11_PARSE(app, argc, argv);

    try {
        const percolab::ExperimentConfig config =
            percolab::load_experiment_config(config_path);
        if (validate->parsed()) {
            const auto diagnostics = percolab::validate_experiment(config);
            for (const auto& d : diagnostics) {
                std::cout << d.field << ": " << d.message << "\n";
            }
            if (diagnostics.empty()) {
                std::cout << "ok\n";
                return percolab::kExitOk;
            }
            return percolab::kExitValidation;
        }
        percolab::RunOverrides overrides;
        if (seed_set) overrides.seed = seed;
        if (out_set) overrides.out_dir = out_dir;
        if (workers_set) overrides.workers = workers;
        return percolab::run_experiment(config, overrides, std::cout);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        // config load failures count as validation problems
        return percolab::kExitValidation;
    }
}
