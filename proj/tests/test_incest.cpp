#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>

#include "socialsim/incest.hpp"
#include "socialsim/learning.hpp"
#include "test_support.hpp"

using namespace socialsim;
using test_support::total_variation;

namespace {

InformationFlowGraph worked_graph() {
    InformationFlowGraph g(2, 6);
    const std::pair<int, int> edges[] = {{1, 3}, {1, 4}, {1, 5}, {2, 3}, {2, 4}, {2, 5},
                                         {2, 6}, {3, 5}, {3, 6}, {4, 5}, {4, 6}};
    for (auto [m, n] : edges) g.add_edge(m, n);
    return g;
}

InformationFlowGraph line_graph(int nodes) {
    InformationFlowGraph g(1, nodes);
    for (int n = 2; n <= nodes; ++n) g.add_edge(n - 1, n);
    return g;
}

// Independent reachability oracle: depth-first over the raw edge set.
std::vector<std::vector<bool>> dfs_closure(const InformationFlowGraph& g) {
    const int n = g.node_count();
    std::vector<std::vector<bool>> reach(n + 1, std::vector<bool>(n + 1, false));
    for (int start = 1; start <= n; ++start) {
        std::vector<int> stack = {start};
        reach[start][start] = true;
        while (!stack.empty()) {
            int cur = stack.back();
            stack.pop_back();
            for (int next = cur + 1; next <= n; ++next) {
                if (g.has_edge(cur, next) && !reach[start][next]) {
                    reach[start][next] = true;
                    stack.push_back(next);
                }
            }
        }
    }
    return reach;
}

ModelParams reputation_model() {
    return ModelParams::make(Matrix::identity(2),
                             Matrix::from_rows({{0.9, 0.1}, {0.1, 0.9}}),
                             Matrix::from_rows({{4.57, 5.57}, {2.57, 0.0}}),
                             {0.5, 0.5});
}

std::map<int, int> recorded_actions(const ReputationRun& run) {
    std::map<int, int> actions;
    for (const auto& rec : run.nodes) actions[rec.node] = rec.action;
    return actions;
}

}  // namespace

TEST_CASE("node schedule indexing") {
    CHECK(node_index(1, 1, 2) == 1);
    CHECK(node_index(2, 1, 2) == 2);
    CHECK(node_index(1, 2, 2) == 3);
    CHECK(node_index(2, 3, 2) == 6);
    CHECK(node_index(3, 2, 5) == 8);
    CHECK_THROWS_AS(node_index(0, 1, 2), InvalidAgentError);
    CHECK_THROWS_AS(node_index(3, 1, 2), InvalidAgentError);
}

TEST_CASE("graph construction enforces causality") {
    InformationFlowGraph g(2, 4);
    g.add_edge(1, 3);
    CHECK(g.has_edge(1, 3));
    CHECK_FALSE(g.has_edge(1, 2));
    CHECK_THROWS_AS(g.add_edge(3, 3), CausalityViolationError);
    CHECK_THROWS_AS(g.add_edge(4, 2), CausalityViolationError);
    CHECK_THROWS_AS(g.add_edge(0, 2), CausalityViolationError);
    CHECK_THROWS_AS(g.add_edge(1, 5), CausalityViolationError);
}

TEST_CASE("graph files parse and reject malformed input") {
    namespace fs = std::filesystem;
    fs::path dir = fs::temp_directory_path() / "socialsim-incest-test";
    fs::create_directories(dir);

    fs::path good = dir / "good.txt";
    std::ofstream(good) << "# comment\nS=2 N=4\n1 3\n2 4 # trailing comment\n";
    InformationFlowGraph g = parse_graph_file(good.string());
    CHECK(g.agent_count() == 2);
    CHECK(g.node_count() == 4);
    CHECK(g.has_edge(1, 3));
    CHECK(g.has_edge(2, 4));
    CHECK_FALSE(g.has_edge(1, 4));

    fs::path no_header = dir / "no_header.txt";
    std::ofstream(no_header) << "1 3\n";
    CHECK_THROWS_AS(parse_graph_file(no_header.string()), ParseError);

    fs::path trailing = dir / "trailing.txt";
    std::ofstream(trailing) << "S=2 N=4\n1 3 7\n";
    CHECK_THROWS_AS(parse_graph_file(trailing.string()), ParseError);

    fs::path bad_edge = dir / "bad_edge.txt";
    std::ofstream(bad_edge) << "S=2 N=4\n4 2\n";
    CHECK_THROWS_AS(parse_graph_file(bad_edge.string()), CausalityViolationError);

    CHECK_THROWS_AS(parse_graph_file((dir / "missing.txt").string()), ParseError);
}

TEST_CASE("transitive closure matches the worked five-node matrix") {
    InformationFlowGraph g = worked_graph();
    ClosureView c = transitive_closure(g);
    const int t5[5][5] = {{1, 0, 1, 1, 1},
                          {0, 1, 1, 1, 1},
                          {0, 0, 1, 0, 1},
                          {0, 0, 0, 1, 1},
                          {0, 0, 0, 0, 1}};
    for (int m = 1; m <= 5; ++m) {
        for (int n = 1; n <= 5; ++n) {
            CHECK(c.reaches(m, n) == (t5[m - 1][n - 1] == 1));
        }
    }
}

TEST_CASE("transitive closure matches a DFS oracle on random graphs") {
    Rng rng(5150);
    for (int trial = 0; trial < 200; ++trial) {
        int nodes = 2 + static_cast<int>(rng.uniform01() * 9);
        InformationFlowGraph g(1, nodes);
        double p = 0.1 + 0.8 * rng.uniform01();
        for (int mfrom = 1; mfrom < nodes; ++mfrom) {
            for (int to = mfrom + 1; to <= nodes; ++to) {
                if (rng.uniform01() < p) g.add_edge(mfrom, to);
            }
        }
        ClosureView c = transitive_closure(g);
        auto oracle = dfs_closure(g);
        for (int mfrom = 1; mfrom <= nodes; ++mfrom) {
            for (int to = 1; to <= nodes; ++to) {
                CHECK(c.reaches(mfrom, to) == oracle[mfrom][to]);
            }
        }
    }
}

TEST_CASE("fusion weights reproduce the worked vectors exactly") {
    ClosureView c = transitive_closure(worked_graph());
    CHECK(fusion_weights(c, 2).weights == std::vector<long long>{0});
    CHECK(fusion_weights(c, 3).weights == std::vector<long long>{1, 1});
    CHECK(fusion_weights(c, 4).weights == std::vector<long long>{1, 1, 0});
    CHECK(fusion_weights(c, 5).weights == std::vector<long long>{-1, -1, 1, 1});
    CHECK(fusion_weights(c, 6).weights == std::vector<long long>{-1, -1, 1, 1, 0});
}

TEST_CASE("fusion weights solve the defining linear system on random graphs") {
    Rng rng(616);
    for (int trial = 0; trial < 200; ++trial) {
        int nodes = 2 + static_cast<int>(rng.uniform01() * 9);
        InformationFlowGraph g(1, nodes);
        double p = 0.1 + 0.8 * rng.uniform01();
        for (int mfrom = 1; mfrom < nodes; ++mfrom) {
            for (int to = mfrom + 1; to <= nodes; ++to) {
                if (rng.uniform01() < p) g.add_edge(mfrom, to);
            }
        }
        ClosureView c = transitive_closure(g);
        for (int n = 2; n <= nodes; ++n) {
            FusionWeights w = fusion_weights(c, n);
            REQUIRE(static_cast<int>(w.weights.size()) == n - 1);
            for (int i = 1; i < n; ++i) {
                long long lhs = 0;
                for (int j = i; j < n; ++j) {
                    lhs += (c.reaches(i, j) ? 1 : 0) * w.weights[j - 1];
                }
                long long rhs = c.reaches(i, n) ? 1 : 0;
                CHECK(lhs == rhs);
            }
        }
    }
}

TEST_CASE("achievability: the six-node example fails at node 6 only") {
    InformationFlowGraph g = worked_graph();
    ClosureView c = transitive_closure(g);
    for (int n = 1; n <= 5; ++n) CHECK(achievability(g, c, n).ok);
    AchievabilityResult r6 = achievability(g, c, 6);
    CHECK_FALSE(r6.ok);
    CHECK(r6.violating == std::vector<int>{1});
}

TEST_CASE("achievability: deleting edge (2,5) breaks node 5 at index 2") {
    InformationFlowGraph g(2, 6);
    const std::pair<int, int> edges[] = {{1, 3}, {1, 4}, {1, 5}, {2, 3}, {2, 4},
                                         {2, 6}, {3, 5}, {3, 6}, {4, 5}, {4, 6}};
    for (auto [m, n] : edges) g.add_edge(m, n);
    ClosureView c = transitive_closure(g);
    // Reachability 2 -> 5 survives through 3 and 4, so the weights are
    // unchanged, but the direct estimate is gone.
    CHECK(fusion_weights(c, 5).weights == std::vector<long long>{-1, -1, 1, 1});
    AchievabilityResult r = achievability(g, c, 5);
    CHECK_FALSE(r.ok);
    CHECK(r.violating == std::vector<int>{2});
}

TEST_CASE("fair fusion: single-parent chain passes the parent belief through") {
    LogBeliefLedger ledger;
    ledger.prior_log = {std::log(0.5), std::log(0.5)};
    Belief parent = {0.8, 0.2};
    ledger.contributions[1] = {std::log(parent[0]) - std::log(0.5),
                               std::log(parent[1]) - std::log(0.5)};
    FusionWeights w;
    w.node = 2;
    w.weights = {1};
    Belief fused = fuse_fair(ledger, w, {1});
    CHECK(fused[0] == doctest::Approx(0.8).epsilon(1e-15));
    CHECK(fused[1] == doctest::Approx(0.2).epsilon(1e-15));

    CHECK_THROWS_AS(fuse_fair(ledger, w, {}), MissingBeliefError);
    FusionWeights w2;
    w2.node = 3;
    w2.weights = {0, 1};
    CHECK_THROWS_AS(fuse_fair(ledger, w2, {2}), MissingBeliefError);
}

TEST_CASE("naive fusion averages and validates shapes") {
    Belief fused = fuse_naive({{0.8, 0.2}, {0.6, 0.4}});
    CHECK(fused[0] == doctest::Approx(0.7).epsilon(1e-15));
    CHECK(fused[1] == doctest::Approx(0.3).epsilon(1e-15));
    CHECK_THROWS_AS(fuse_naive({}), MissingBeliefError);
    CHECK_THROWS_AS(fuse_naive({{0.5, 0.5}, {1.0}}), ShapeMismatchError);
}

TEST_CASE("fair reputation run matches the enumeration oracle") {
    ModelParams p = reputation_model();
    Rng rng(271828);
    for (int trial = 0; trial < 20; ++trial) {
        int nodes = 4 + static_cast<int>(rng.uniform01() * 5);
        double edge_prob = 0.2 + 0.6 * rng.uniform01();
        InformationFlowGraph g = make_random_achievable_graph(2, nodes, edge_prob, rng);
        ReputationRun run = run_reputation_protocol(g, p, 1000 + trial, FusionMode::fair);
        auto actions = recorded_actions(run);
        for (const auto& rec : run.nodes) {
            Belief want = oracle_fair_rating(g, rec.node, p, actions, FusionMode::fair);
            CHECK(total_variation(rec.fused, want) < 1e-9);
        }
    }
}

TEST_CASE("fair fusion on a chain equals naive fusion") {
    ModelParams p = reputation_model();
    InformationFlowGraph g = line_graph(6);
    ReputationRun fair = run_reputation_protocol(g, p, 99, FusionMode::fair);
    ReputationRun naive = run_reputation_protocol(g, p, 99, FusionMode::naive);
    REQUIRE(fair.nodes.size() == naive.nodes.size());
    for (std::size_t i = 0; i < fair.nodes.size(); ++i) {
        CHECK(fair.nodes[i].action == naive.nodes[i].action);
        CHECK(total_variation(fair.nodes[i].fused, naive.nodes[i].fused) < 1e-13);
    }
}

TEST_CASE("fair mode refuses the non-achievable six-node graph") {
    ModelParams p = reputation_model();
    InformationFlowGraph g = worked_graph();
    try {
        run_reputation_protocol(g, p, 1, FusionMode::fair);
        FAIL("expected NotAchievableError");
    } catch (const NotAchievableError& e) {
        CHECK(e.violating == std::vector<int>{1});
    }
}

TEST_CASE("naive fusion on the loop graph is biased") {
    ModelParams p = reputation_model();
    InformationFlowGraph g = worked_graph();
    ReputationRun run = run_reputation_protocol(g, p, 11, FusionMode::naive);
    auto actions = recorded_actions(run);
    Belief truth = oracle_fair_rating(g, 6, p, actions, FusionMode::naive);
    CHECK(total_variation(run.nodes[5].fused, truth) > 1e-3);
}

TEST_CASE("oracle guards against exponential enumeration") {
    ModelParams p = reputation_model();
    InformationFlowGraph g = line_graph(14);
    ReputationRun run = run_reputation_protocol(g, p, 3, FusionMode::fair);
    auto actions = recorded_actions(run);
    CHECK_THROWS_AS(oracle_fair_rating(g, 14, p, actions), TooLargeError);
}

TEST_CASE("reputation runs are deterministic per seed") {
    ModelParams p = reputation_model();
    InformationFlowGraph g = line_graph(5);
    ReputationRun a = run_reputation_protocol(g, p, 7, FusionMode::fair);
    ReputationRun b = run_reputation_protocol(g, p, 7, FusionMode::fair);
    CHECK(a.true_state == b.true_state);
    REQUIRE(a.nodes.size() == b.nodes.size());
    for (std::size_t i = 0; i < a.nodes.size(); ++i) {
        CHECK(a.nodes[i].observation == b.nodes[i].observation);
        CHECK(a.nodes[i].action == b.nodes[i].action);
        CHECK(a.nodes[i].public_after == b.nodes[i].public_after);
    }
}
