#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "socialsim/scenario.hpp"
#include "socialsim/version.hpp"

namespace {

struct CommonArgs {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out_dir;
};

void add_scenario_command(CLI::App& app, const std::string& kind, CommonArgs& args,
                          std::string* selected) {
    CLI::App* sub = app.add_subcommand(kind, "Run a " + kind + " scenario");
    sub->add_option("--config", args.config_path, "Scenario configuration file")
        ->required();
    sub->add_option("--seed", args.seed, "Override the configured seed");
    sub->add_option("--out", args.out_dir, "Override the configured output directory");
    sub->callback([kind, selected]() { *selected = kind; });
}

int run(const std::string& kind, const CommonArgs& args) {
    socialsim::ScenarioConfig cfg = socialsim::parse_config(args.config_path);
    if (cfg.scenario != kind) {
        throw socialsim::ValidationError({"config declares scenario " + cfg.scenario +
                                          " but the " + kind + " command was invoked"});
    }
    if (args.seed) cfg.seed = *args.seed;
    if (args.out_dir) cfg.out_dir = *args.out_dir;

    socialsim::RunManifest m = socialsim::run_scenario(cfg);
    for (const auto& [name, rows] : m.outputs) {
        std::cout << name << " rows=" << rows << '\n';
    }
    std::cout << "manifest " << m.manifest_path << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multi-agent social learning simulator"};
    app.set_version_flag("--version", std::string(socialsim::kVersion));
    app.require_subcommand(1);

    CommonArgs args;
    std::string selected;
    for (const char* kind : {"social-learning", "reputation", "qd-classic", "qd-social",
                             "privacy", "game"}) {
        add_scenario_command(app, kind, args, &selected);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        return run(selected, args);
    } catch (const socialsim::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const socialsim::ModelError& e) {
        std::cerr << "model error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
}
