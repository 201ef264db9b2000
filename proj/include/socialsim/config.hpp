#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "socialsim/belief.hpp"
#include "socialsim/detection.hpp"
#include "socialsim/games.hpp"
#include "socialsim/incest.hpp"

namespace socialsim {

// Parsed and validated scenario description. Produced only by parse_config;
// every field a scenario dispatches on has already passed that module's
// preconditions.
struct ScenarioConfig {
    std::string scenario;
    std::uint64_t seed = 0;
    std::string out_dir = ".";

    std::optional<ModelParams> model;

    // social-learning
    long long horizon = 0;

    // reputation
    std::string graph_file;  // resolved against the config file's directory
    FusionMode fusion_mode = FusionMode::fair;

    // qd-classic / qd-social
    DetectionCosts detect_costs{0.0, 0.0};

    // grid solvers
    int grid_size = 1000;
    int max_iters = 200;
    double tolerance = 1e-9;

    // privacy
    double discount = 0.0;
    int target_state = 0;  // 0-based; the file uses 1-based states

    // game
    std::optional<GameSpec> game;
    long long steps = 0;
    std::vector<double> normalizers;
    std::vector<long long> checkpoints;

    // key=value pairs in file order, echoed into the manifest
    std::vector<std::pair<std::string, std::string>> echo;
};

// Reads a flat key=value file ('#' starts a comment, '.'-dotted key
// prefixes group sections, matrix rows separated by ';'). Throws ParseError
// with file:line diagnostics on syntax problems, unknown keys, duplicate
// keys, or an unknown scenario kind; throws ValidationError listing every
// violated precondition otherwise.
ScenarioConfig parse_config(const std::string& path);

}  // namespace socialsim
