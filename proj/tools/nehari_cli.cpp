// Command-line front end: solve | sweep | classify | constants | verify,
// each driven by a flat key = value config file.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "nehari/runner.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Two-branch Nehari-manifold solver for a concave-convex Laplacian system"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::optional<std::uint64_t> seed;

    const char* names[] = {"solve", "sweep", "classify", "constants", "verify"};
    const char* blurbs[] = {
        "minimize on both Nehari branches and dump the two solutions",
        "run solve across a list of lambda values, emit CSV",
        "print the fibering geometry of the configured initializer",
        "compute the lambda1/delta/c threshold constants",
        "run the oracle invariant battery",
    };
    for (int i = 0; i < 5; ++i) {
        CLI::App* sub = app.add_subcommand(names[i], blurbs[i]);
        sub->add_option("--config", config_path, "config file path")->required();
        sub->add_option("--out", out_dir, "output directory (default: out_dir from the config)");
        sub->add_option("--seed", seed, "override the config seed");
    }

    CLI11_PARSE(app, argc, argv);

    try {
        const nehari::RunConfig config = nehari::parse_config(config_path);
        const std::string out = out_dir.empty() ? config.out_dir : out_dir;
        return nehari::run_subcommand(app.get_subcommands().front()->get_name(), config, out,
                                      seed);
    } catch (const nehari::ConfigError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
