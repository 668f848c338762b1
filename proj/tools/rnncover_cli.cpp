// Command-line front end. Subcommands:
//   bounds         sample-complexity and covering-number tables
//   suite          TV / coupling / cover certification battery
//   gap            train/test generalization gap experiment
//   certify-cover  empirical recurrent cover certification
//
// Exit codes: 0 success, 1 a certified check failed, 2 config or usage
// error.

#include "rnncover/experiments.hpp"

#include "CLI11.hpp"

#include <cstdio>
#include <string>

int main(int argc, char** argv) {
    CLI::App app{
        "Covering-number machinery for noisy sigmoid recurrent networks"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_path;
    std::uint64_t seed = 0;
    std::uint64_t threads = 0;

    auto add_sub = [&](const std::string& name, const std::string& desc) {
        CLI::App* sub = app.add_subcommand(name, desc);
        sub->add_option("--config", config_path,
                        "flat key = value config file")
            ->required();
        sub->add_option("--out", out_path, "output CSV path")->required();
        sub->add_option("--seed", seed,
                        "override the config's master_seed");
        sub->add_option("--threads", threads, "worker thread count");
        return sub;
    };
    add_sub("bounds",
            "upper/lower sample-complexity table over (T, w) grids");
    add_sub("suite", "certification battery for the TV toolbox");
    add_sub("gap", "noise level vs train/test gap experiment");
    add_sub("certify-cover",
            "certify a grid class cover through the recurrence");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        rnncover::ExperimentConfig cfg = rnncover::load_config(config_path);
        CLI::App* sub = app.get_subcommands().front();
        if (sub->count("--seed"))
            cfg.entries["master_seed"] = std::to_string(seed);
        if (sub->count("--threads"))
            cfg.entries["threads"] = std::to_string(threads);

        const std::string name = sub->get_name();
        if (name == "bounds") return rnncover::run_bounds(cfg, out_path);
        if (name == "suite") return rnncover::run_suite(cfg, out_path);
        if (name == "gap") return rnncover::run_gap(cfg, out_path);
        return rnncover::run_certify_cover(cfg, out_path);
    } catch (const rnncover::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}
