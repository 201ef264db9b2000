#include "socialsim/scenario.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>

#include "socialsim/csv.hpp"
#include "socialsim/detection.hpp"
#include "socialsim/learning.hpp"
#include "socialsim/version.hpp"

namespace socialsim {

namespace {

namespace fs = std::filesystem;

void finish(CsvWriter& w, RunManifest& m) {
    w.close();
    m.outputs.emplace_back(fs::path(w.path()).filename().string(), w.data_rows());
}

void write_trace(const fs::path& dir, const ScenarioConfig& cfg, RunManifest& m) {
    const ModelParams& p = *cfg.model;
    LearningTrace t = run_protocol(p, cfg.horizon, cfg.seed);
    std::vector<std::string> header = {"k", "x", "y", "a"};
    for (int i = 1; i <= p.states; ++i) header.push_back("pi_" + std::to_string(i));
    CsvWriter w((dir / "trace.csv").string(), header);
    for (int k = 0; k < t.size(); ++k) {
        w.begin_row();
        w.field(k + 1);
        w.field(t.state[k] + 1);
        w.field(t.observation[k] + 1);
        w.field(t.action[k] + 1);
        for (double v : t.public_belief[k]) w.field(v);
        w.end_row();
    }
    finish(w, m);
}

void write_reputation(const fs::path& dir, const ScenarioConfig& cfg, RunManifest& m) {
    const ModelParams& p = *cfg.model;
    InformationFlowGraph g = parse_graph_file(cfg.graph_file);
    ReputationRun run = run_reputation_protocol(g, p, cfg.seed, cfg.fusion_mode);
    ClosureView closure = transitive_closure(g);

    std::vector<std::string> header = {"node", "agent", "epoch"};
    for (int i = 1; i <= p.states; ++i) header.push_back("fused_" + std::to_string(i));
    header.push_back("action");
    for (int i = 1; i <= p.states; ++i) header.push_back("after_" + std::to_string(i));
    header.push_back("achievable");
    CsvWriter nodes((dir / "nodes.csv").string(), header);
    for (const NodeRecord& r : run.nodes) {
        nodes.begin_row();
        nodes.field(r.node);
        nodes.field(r.agent);
        nodes.field(r.epoch);
        for (double v : r.fused) nodes.field(v);
        nodes.field(r.action + 1);
        for (double v : r.public_after) nodes.field(v);
        nodes.field(achievability(g, closure, r.node).ok ? 1 : 0);
        nodes.end_row();
    }
    finish(nodes, m);

    CsvWriter weights((dir / "weights.csv").string(), {"node", "index", "weight"});
    for (const FusionWeights& w : run.weights) {
        for (std::size_t j = 0; j < w.weights.size(); ++j) {
            weights.begin_row();
            weights.field(w.node);
            weights.field(static_cast<int>(j) + 1);
            weights.field(w.weights[j]);
            weights.end_row();
        }
    }
    finish(weights, m);
}

void write_policy_grid(const fs::path& dir, const PolicyGrid& grid, RunManifest& m) {
    CsvWriter policy((dir / "policy.csv").string(), {"pi2", "decision", "value"});
    for (int g = 0; g < grid.grid_size; ++g) {
        policy.begin_row();
        policy.field(grid.point(g));
        policy.field(grid.decision[g]);
        policy.field(grid.value[g]);
        policy.end_row();
    }
    finish(policy, m);

    CsvWriter value((dir / "value.csv").string(), {"pi2", "value"});
    for (int g = 0; g < grid.grid_size; ++g) {
        value.begin_row();
        value.field(grid.point(g));
        value.field(grid.value[g]);
        value.end_row();
    }
    finish(value, m);
}

void write_game(const fs::path& dir, const ScenarioConfig& cfg, RunManifest& m) {
    std::vector<long long> checkpoints = cfg.checkpoints;
    if (checkpoints.empty()) checkpoints.push_back(cfg.steps);
    GameRunResult run =
        run_repeated_game(*cfg.game, cfg.steps, cfg.seed, cfg.normalizers, checkpoints);

    std::vector<std::string> header = {"checkpoint"};
    for (int l = 1; l <= cfg.game->player_count; ++l) {
        header.push_back("max_regret_" + std::to_string(l));
    }
    header.push_back("ce_violation");
    CsvWriter w((dir / "regrets.csv").string(), header);
    for (const CheckpointStat& s : run.checkpoints) {
        w.begin_row();
        w.field(s.step);
        for (double r : s.max_positive_regret) w.field(r);
        w.field(s.ce_violation);
        w.end_row();
    }
    finish(w, m);
}

}  // namespace

RunManifest run_scenario(const ScenarioConfig& cfg) {
    auto start = std::chrono::steady_clock::now();

    RunManifest m;
    m.scenario = cfg.scenario;
    m.seed = cfg.seed;
    m.engine_version = kVersion;

    fs::path dir(cfg.out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) {
        throw ModelError("cannot create output directory " + dir.string() + ": " +
                         ec.message());
    }

    if (cfg.scenario == "social-learning") {
        write_trace(dir, cfg, m);
    } else if (cfg.scenario == "reputation") {
        write_reputation(dir, cfg, m);
    } else if (cfg.scenario == "qd-classic") {
        write_policy_grid(dir,
                          solve_classical_qd(*cfg.model, cfg.detect_costs, cfg.grid_size,
                                             cfg.max_iters, cfg.tolerance),
                          m);
    } else if (cfg.scenario == "qd-social") {
        write_policy_grid(dir,
                          solve_social_qd(*cfg.model, cfg.detect_costs, cfg.grid_size,
                                          cfg.max_iters, cfg.tolerance),
                          m);
    } else if (cfg.scenario == "privacy") {
        write_policy_grid(dir,
                          solve_privacy_stopping(*cfg.model, cfg.discount, cfg.target_state,
                                                 cfg.grid_size, cfg.max_iters, cfg.tolerance),
                          m);
    } else if (cfg.scenario == "game") {
        write_game(dir, cfg, m);
    } else {
        throw ValidationError({"unknown scenario kind '" + cfg.scenario + "'"});
    }

    auto stop = std::chrono::steady_clock::now();
    m.duration_ms =
        std::chrono::duration_cast<std::chrono::milliseconds>(stop - start).count();

    fs::path manifest_path = dir / "manifest.txt";
    std::ofstream out(manifest_path, std::ios::binary);
    if (!out) {
        throw ModelError("cannot open output file " + manifest_path.string());
    }
    out << "scenario: " << m.scenario << '\n';
    out << "engine_version: " << m.engine_version << '\n';
    out << "seed: " << m.seed << '\n';
    out << "duration_ms: " << m.duration_ms << '\n';
    out << "config:\n";
    for (const auto& [key, value] : cfg.echo) {
        out << "  " << key << " = " << value << '\n';
    }
    out << "outputs:\n";
    for (const auto& [name, rows] : m.outputs) {
        out << "  " << name << " rows=" << rows << '\n';
    }
    out.close();
    if (!out) {
        throw ModelError("failed writing output file " + manifest_path.string());
    }
    m.manifest_path = manifest_path.string();
    return m;
}

}  // namespace socialsim
