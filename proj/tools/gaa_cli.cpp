// gaa: run quench-dynamics experiments on the generalized Aubry-Andre chain.
//
//   gaa <experiment> --config run.json --out results/ [--seed N] [--workers N]

#include "gaa/runner.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

int execute(gaa::ExperimentKind kind, const std::string& config_path, const std::string& out_dir,
            const std::optional<std::uint64_t>& seed, const std::optional<int>& workers) {
    std::ifstream in(config_path);
    if (!in) {
        std::cerr << "gaa: cannot read config " << config_path << "\n";
        return 1;
    }
    std::stringstream text;
    text << in.rdbuf();

    gaa::ExperimentConfig config;
    try {
        config = gaa::parse_config(text.str(), kind);
        if (!out_dir.empty()) config.output_dir = out_dir;
        if (seed) config.seed = config.protocol.seed = *seed;
        if (workers) {
            if (*workers < 1) throw gaa::ConfigError("--workers must be positive");
            config.workers = *workers;
        }
    } catch (const std::exception& e) {
        std::cerr << "gaa: " << e.what() << "\n";
        return 1;
    }

    try {
        const auto result = gaa::run(config);
        for (const auto& f : result.files) std::cout << "wrote " << f.string() << "\n";
        if (!result.summary.empty()) std::cout << result.summary << (result.summary.back() == '\n' ? "" : "\n");
        for (const auto& f : result.failures) std::cerr << "gaa: point " << f.point << " failed: " << f.error << "\n";
        if (!result.verification_passed) return 2;
        return result.failures.empty() ? 0 : 3;
    } catch (const std::exception& e) {
        std::cerr << "gaa: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Quench dynamics of the generalized Aubry-Andre model"};
    app.require_subcommand(1);

    std::string config_path, out_dir;
    std::optional<std::uint64_t> seed;
    std::optional<int> workers;
    std::optional<gaa::ExperimentKind> chosen;

    for (const char* name :
         {"spectrum", "ee", "velocity", "saturation", "scaling", "sic-profile", "sic-jump", "fractions", "verify"}) {
        auto* sub = app.add_subcommand(name, std::string("run the ") + name + " experiment");
        sub->add_option("--config", config_path, "JSON run description")->required()->check(CLI::ExistingFile);
        sub->add_option("--out", out_dir, "output directory (overrides the config)");
        sub->add_option("--seed", seed, "RNG seed (overrides the config)");
        sub->add_option("--workers", workers, "worker threads (overrides the config)");
        sub->callback([&chosen, name] { chosen = gaa::parse_kind(name); });
    }

    CLI11_PARSE(app, argc, argv);
    return execute(*chosen, config_path, out_dir, seed, workers);
}
