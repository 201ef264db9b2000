#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "socialsim/config.hpp"

namespace socialsim {

struct RunManifest {
    std::string scenario;
    std::uint64_t seed = 0;
    std::string engine_version;
    std::vector<std::pair<std::string, long long>> outputs;  // file name, data rows
    long long duration_ms = 0;
    std::string manifest_path;
};

// Dispatches the configured scenario, writes its CSV outputs into
// cfg.out_dir and the manifest last, so a manifest on disk means every
// listed output was written completely. The duration line is the only
// nondeterministic byte in the output set; all CSV files are reproduced
// exactly for a fixed config and seed.
RunManifest run_scenario(const ScenarioConfig& cfg);

}  // namespace socialsim
