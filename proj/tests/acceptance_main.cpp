// Acceptance gate: one check per shipped claim, each printed as a single
// [PASS]/[FAIL] line. Exits nonzero if any check fails. Expects the bundled
// configs directory as argv[1].
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "socialsim/config.hpp"
#include "socialsim/detection.hpp"
#include "socialsim/games.hpp"
#include "socialsim/incest.hpp"
#include "socialsim/learning.hpp"
#include "socialsim/scenario.hpp"
#include "test_support.hpp"

using namespace socialsim;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void report(int criterion, bool ok, const std::string& detail) {
    std::printf("[%s] criterion %d: %s\n", ok ? "PASS" : "FAIL", criterion, detail.c_str());
    if (!ok) ++g_failures;
}

std::string fmt(const char* pattern, ...) {
    char buf[512];
    va_list args;
    va_start(args, pattern);
    std::vsnprintf(buf, sizeof buf, pattern, args);
    va_end(args);
    return buf;
}

double max_adjacent_jump(const PolicyGrid& g) {
    double jump = 0.0;
    for (int i = 0; i + 1 < g.grid_size; ++i) {
        jump = std::max(jump, std::abs(g.value[i + 1] - g.value[i]));
    }
    return jump;
}

InformationFlowGraph six_node_graph() {
    InformationFlowGraph g(2, 6);
    const int edges[][2] = {{1, 3}, {1, 4}, {1, 5}, {2, 3}, {2, 4}, {2, 5},
                            {3, 5}, {4, 5}, {2, 6}, {3, 6}, {4, 6}};
    for (const auto& e : edges) g.add_edge(e[0], e[1]);
    return g;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct TempDir {
    fs::path dir;
    TempDir() {
        dir = fs::temp_directory_path() /
              ("socialsim-acceptance-" + std::to_string(::getpid()));
        fs::create_directories(dir);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(dir, ec);
    }
};

// Direct time-average regret, the definition the recursion must track.
std::vector<double> direct_regret(const GameSpec& g, int player,
                                  const std::vector<std::vector<int>>& history) {
    const int acts = g.action_counts[player];
    std::vector<double> total(static_cast<std::size_t>(acts) * acts, 0.0);
    for (const auto& profile : history) {
        const int own = profile[player];
        const double base = g.utility(player, profile);
        std::vector<int> swapped = profile;
        for (int j = 0; j < acts; ++j) {
            swapped[player] = j;
            total[static_cast<std::size_t>(own) * acts + j] +=
                g.utility(player, swapped) - base;
        }
    }
    for (double& v : total) v /= static_cast<double>(history.size());
    return total;
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::fprintf(stderr, "usage: acceptance <configs-dir>\n");
        return 2;
    }
    const std::string configs = argv[1];
    auto cfg_path = [&](const char* name) { return configs + "/" + name; };

    // 1. Multi-threshold stopping policy, and 2. value discontinuity.
    try {
        ScenarioConfig social_cfg = parse_config(cfg_path("qd-social.cfg"));
        ScenarioConfig classic_cfg = parse_config(cfg_path("qd-classic.cfg"));
        auto t0 = std::chrono::steady_clock::now();
        PolicyGrid social =
            solve_social_qd(*social_cfg.model, social_cfg.detect_costs, social_cfg.grid_size,
                            social_cfg.max_iters, social_cfg.tolerance);
        PolicyGrid classical =
            solve_classical_qd(*classic_cfg.model, classic_cfg.detect_costs,
                               classic_cfg.grid_size, classic_cfg.max_iters,
                               classic_cfg.tolerance);
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

        int social_stop_to_go = count_policy_switches(social, 1, 2);
        int classical_total = count_policy_switches(classical);
        bool ok1 = social_stop_to_go == 3 && classical_total == 1 && secs < 10.0;
        report(1, ok1,
               fmt("social policy switches 1->2 %d time(s) (want 3), classical %d (want 1), "
                   "solved in %.2fs (budget 10s)",
                   social_stop_to_go, classical_total, secs));

        double sj = max_adjacent_jump(social);
        double cj = max_adjacent_jump(classical);
        report(2, sj > 10.0 * cj,
               fmt("max adjacent value jump social %.4g vs classical %.4g (ratio %.1f, want > 10)",
                   sj, cj, sj / cj));
    } catch (const std::exception& e) {
        report(1, false, std::string("exception: ") + e.what());
        report(2, false, "skipped after criterion 1 exception");
    }

    // 3. Worked incest example: closure, exact integer weights, achievability.
    try {
        InformationFlowGraph g = six_node_graph();
        ClosureView c = transitive_closure(g);
        const int t5[5][5] = {{1, 0, 1, 1, 1},
                              {0, 1, 1, 1, 1},
                              {0, 0, 1, 0, 1},
                              {0, 0, 0, 1, 1},
                              {0, 0, 0, 0, 1}};
        bool closure_ok = true;
        for (int m = 1; m <= 5; ++m)
            for (int n = 1; n <= 5; ++n)
                closure_ok = closure_ok && c.reaches(m, n) == (t5[m - 1][n - 1] == 1);

        bool weights_ok = fusion_weights(c, 2).weights == std::vector<long long>{0} &&
                          fusion_weights(c, 3).weights == std::vector<long long>{1, 1} &&
                          fusion_weights(c, 4).weights == std::vector<long long>{1, 1, 0} &&
                          fusion_weights(c, 5).weights == std::vector<long long>{-1, -1, 1, 1};

        InformationFlowGraph cut(2, 6);
        const int edges[][2] = {{1, 3}, {1, 4}, {1, 5}, {2, 3}, {2, 4},
                                {3, 5}, {4, 5}, {2, 6}, {3, 6}, {4, 6}};
        for (const auto& e : edges) cut.add_edge(e[0], e[1]);
        AchievabilityResult cut5 = achievability(cut, transitive_closure(cut), 5);
        bool cut_ok = !cut5.ok && cut5.violating == std::vector<int>{2};

        // The bundled reputation scenario must emit exactly these weights.
        TempDir tmp;
        ScenarioConfig rep = parse_config(cfg_path("reputation-fair.cfg"));
        rep.out_dir = tmp.dir.string();
        run_scenario(rep);
        bool csv_ok = slurp(tmp.dir / "weights.csv") ==
                      "node,index,weight\n"
                      "2,1,0\n"
                      "3,1,1\n3,2,1\n"
                      "4,1,1\n4,2,1\n4,3,0\n"
                      "5,1,-1\n5,2,-1\n5,3,1\n5,4,1\n";

        report(3, closure_ok && weights_ok && cut_ok && csv_ok,
               fmt("closure %s, weights %s, deleted-edge achievability %s, scenario csv %s",
                   closure_ok ? "exact" : "WRONG", weights_ok ? "exact" : "WRONG",
                   cut_ok ? "violating {2}" : "WRONG", csv_ok ? "exact" : "WRONG"));
    } catch (const std::exception& e) {
        report(3, false, std::string("exception: ") + e.what());
    }

    // 4. Fair fusion equals the brute-force rating; naive fusion is biased.
    try {
        Rng rng(90210);
        double worst = 0.0;
        int graphs = 0;
        for (int trial = 0; trial < 100; ++trial) {
            int nodes = 4 + trial % 5;
            double edge_prob = 0.2 + 0.6 * rng.uniform01();
            InformationFlowGraph g = make_random_achievable_graph(2, nodes, edge_prob, rng);
            ModelParams p = ModelParams::make(
                Matrix::identity(2), test_support::random_stochastic(rng, 2, 2, 0.05),
                test_support::random_stochastic(rng, 2, 2, 0.0),
                test_support::random_belief(rng, 2));
            ReputationRun run = run_reputation_protocol(g, p, 1000 + trial, FusionMode::fair);
            std::map<int, int> actions;
            for (const auto& rec : run.nodes) actions[rec.node] = rec.action;
            for (const auto& rec : run.nodes) {
                Belief oracle = oracle_fair_rating(g, rec.node, p, actions, FusionMode::fair);
                worst = std::max(worst, test_support::total_variation(rec.fused, oracle));
            }
            ++graphs;
        }
        bool fair_ok = graphs == 100 && worst <= 1e-9;

        ScenarioConfig loop_cfg = parse_config(cfg_path("naive-loop.cfg"));
        InformationFlowGraph loop = parse_graph_file(loop_cfg.graph_file);
        ReputationRun naive =
            run_reputation_protocol(loop, *loop_cfg.model, loop_cfg.seed, FusionMode::naive);
        std::map<int, int> naive_actions;
        for (const auto& rec : naive.nodes) naive_actions[rec.node] = rec.action;
        Belief fused6 = naive.nodes[5].fused;
        Belief oracle6 =
            oracle_fair_rating(loop, 6, *loop_cfg.model, naive_actions, FusionMode::naive);
        double bias = test_support::total_variation(fused6, oracle6);
        bool naive_ok = bias > 1e-3;

        report(4, fair_ok && naive_ok,
               fmt("fair fusion worst TV %.2e over %d graphs (budget 1e-9); "
                   "naive loop bias TV %.4g (want > 1e-3)",
                   worst, graphs, bias));
    } catch (const std::exception& e) {
        report(4, false, std::string("exception: ") + e.what());
    }

    // 5. Cascades form under a frozen state.
    try {
        ScenarioConfig cfg = parse_config(cfg_path("cascade.cfg"));
        int cascades = 0;
        for (int seed = 1; seed <= 1000; ++seed) {
            if (first_cascade_step(*cfg.model, 10000, seed).has_value()) ++cascades;
        }
        report(5, cascades >= 990,
               fmt("%d/1000 seeded runs cascade by step 10^4 (want >= 990)", cascades));
    } catch (const std::exception& e) {
        report(5, false, std::string("exception: ") + e.what());
    }

    // 6. Herding without a cascade when the state drifts.
    try {
        ScenarioConfig cfg = parse_config(cfg_path("herd-no-cascade.cfg"));
        const ModelParams& p = *cfg.model;
        long long herd_steps = 0;
        long long cascade_points = 0;
        double worst_drift = 0.0;
        for (int seed = 1; seed <= 20; ++seed) {
            LearningTrace t = run_protocol(p, 300, seed);
            for (int k = 0; k < t.size(); ++k) {
                const Belief& before = (k == 0) ? t.prior : t.public_belief[k - 1];
                if (!is_individual_herd(before, p)) continue;
                ++herd_steps;
                if (is_cascade_point(before, p)) ++cascade_points;
                for (int j = 0; j < p.states; ++j) {
                    double predicted = 0.0;
                    for (int i = 0; i < p.states; ++i) {
                        predicted += p.transition(i, j) * before[i];
                    }
                    worst_drift =
                        std::max(worst_drift, std::abs(t.public_belief[k][j] - predicted));
                }
            }
        }
        bool ok = herd_steps >= 100 && cascade_points == 0 && worst_drift <= 1e-12;
        report(6, ok,
               fmt("%lld herd steps across 20 traces, %lld flagged as cascade points (want 0), "
                   "public belief drift from the predictor %.2e (budget 1e-12)",
                   herd_steps, cascade_points, worst_drift));
    } catch (const std::exception& e) {
        report(6, false, std::string("exception: ") + e.what());
    }

    // 7. Regret matching converges into the correlated equilibrium set.
    try {
        const char* games[] = {"game-coordination.cfg", "game-anticoordination.cfg",
                               "game-congestion.cfg"};
        const std::vector<long long> marks = {1000, 10000, 100000};
        bool ok = true;
        std::string detail;
        for (const char* name : games) {
            ScenarioConfig cfg = parse_config(cfg_path(name));
            const GameSpec& g = *cfg.game;
            std::vector<double> avg_regret(marks.size(), 0.0);
            double avg_violation = 0.0;
            for (int seed = 1; seed <= 20; ++seed) {
                GameRunResult r = run_repeated_game(g, 100000, seed, cfg.normalizers, marks);
                for (std::size_t m = 0; m < marks.size(); ++m) {
                    double worst = 0.0;
                    for (double v : r.checkpoints[m].max_positive_regret)
                        worst = std::max(worst, v);
                    avg_regret[m] += worst / 20.0;
                }
                avg_violation += r.checkpoints.back().ce_violation / 20.0;
            }
            bool game_ok = avg_regret.back() <= 0.05 && avg_violation <= 0.05;
            for (std::size_t m = 1; m < marks.size(); ++m) {
                game_ok = game_ok && avg_regret[m] <= avg_regret[m - 1] + 0.02;
            }
            ok = ok && game_ok;
            detail += fmt("%s%s regret@1e5 %.4f violation %.4f", detail.empty() ? "" : "; ",
                          name, avg_regret.back(), avg_violation);
        }

        // The recursion must reproduce the direct time average exactly.
        Rng rng(777);
        double worst_gap = 0.0;
        for (int trial = 0; trial < 10; ++trial) {
            std::vector<std::vector<double>> tables(2, std::vector<double>(6));
            for (auto& t : tables)
                for (double& v : t) v = rng.uniform01() * 6.0 - 3.0;
            GameSpec spec = GameSpec::make({2, 3}, tables);
            int n = 100 + trial * 90;
            std::vector<std::vector<int>> history(n, std::vector<int>(2));
            for (auto& profile : history) {
                profile[0] = static_cast<int>(rng.uniform01() * 2);
                profile[1] = static_cast<int>(rng.uniform01() * 3);
            }
            for (int player = 0; player < 2; ++player) {
                const int acts = spec.action_counts[player];
                RegretState s;
                s.regret.assign(static_cast<std::size_t>(acts) * acts, 0.0);
                s.C = 50.0;
                for (int k = 0; k < n; ++k) regret_update(s, player, history[k], spec, k + 1);
                std::vector<double> direct = direct_regret(spec, player, history);
                for (std::size_t e = 0; e < direct.size(); ++e)
                    worst_gap = std::max(worst_gap, std::abs(s.regret[e] - direct[e]));
            }
        }
        ok = ok && worst_gap <= 1e-12;
        detail += fmt("; recursion vs direct average gap %.2e (budget 1e-12)", worst_gap);
        report(7, ok, detail);
    } catch (const std::exception& e) {
        report(7, false, std::string("exception: ") + e.what());
    }

    // 8. Filter identities and the observation-revealing reduction.
    try {
        Rng rng(424242);
        double worst_mass = 0.0;
        double worst_smoothing = 0.0;
        int beliefs = 0;
        detail::FilterScratch scratch;
        std::vector<double> predicted, lik, post;
        for (int m = 0; m < 100; ++m) {
            int X = 2 + m % 2, Y = 2 + (m / 2) % 2, A = 2 + (m / 3) % 2;
            ModelParams p = ModelParams::make(
                test_support::random_stochastic(rng, X, X, 0.02),
                test_support::random_stochastic(rng, X, Y, 0.02),
                test_support::random_stochastic(rng, X, A, 0.0),
                test_support::random_belief(rng, X));
            for (int b = 0; b < 100; ++b) {
                Belief pi = test_support::random_belief(rng, X);
                detail::predict(pi, p, predicted);
                double mass = 0.0;
                std::vector<double> smoothed(X, 0.0);
                for (int a = 0; a < p.actions; ++a) {
                    detail::action_likelihood_from_predicted(predicted, a, p, lik);
                    double sigma = 0.0;
                    for (int i = 0; i < X; ++i) sigma += lik[i] * predicted[i];
                    mass += sigma;
                    for (int i = 0; i < X; ++i) smoothed[i] += lik[i] * predicted[i];
                }
                worst_mass = std::max(worst_mass, std::abs(mass - 1.0));
                for (int i = 0; i < X; ++i) {
                    worst_smoothing =
                        std::max(worst_smoothing, std::abs(smoothed[i] - predicted[i]));
                }
                ++beliefs;
            }
        }
        bool identities_ok = beliefs == 10000 && worst_mass <= 1e-10 && worst_smoothing <= 1e-10;

        bool revealing_ok = true;
        for (int m = 0; m < 100 && revealing_ok; ++m) {
            int X = 2 + m % 3;
            int Y = 2 + (m / 3) % 2;
            ModelParams p = ModelParams::make(
                test_support::random_stochastic(rng, X, X, 0.02),
                test_support::random_stochastic(rng, X, Y, 0.02),
                test_support::random_stochastic(rng, X, Y, 0.0),
                test_support::random_belief(rng, X), true);
            for (int b = 0; b < 20; ++b) {
                Belief pi = test_support::random_belief(rng, X);
                for (int y = 0; y < Y; ++y) {
                    std::vector<double> social_post, hmm_post;
                    double s1 = detail::social_step(pi, y, p, scratch, social_post);
                    double s2 = detail::hmm_step(pi, y, p, scratch, hmm_post);
                    revealing_ok = revealing_ok && s1 == s2 && social_post == hmm_post;
                }
            }
        }
        report(8, identities_ok && revealing_ok,
               fmt("action mass error %.2e, smoothing error %.2e over %d beliefs (budget 1e-10); "
                   "revealing-mode social filter %s the HMM filter",
                   worst_mass, worst_smoothing, beliefs,
                   revealing_ok ? "exactly equals" : "DIFFERS from"));
    } catch (const std::exception& e) {
        report(8, false, std::string("exception: ") + e.what());
    }

    // 9. Privacy stopping: one connected herd interval containing the target
    // vertex, and herding is absorbing along rollouts.
    try {
        ScenarioConfig cfg = parse_config(cfg_path("privacy.cfg"));
        const ModelParams& p = *cfg.model;
        PolicyGrid g = solve_privacy_stopping(p, cfg.discount, cfg.target_state, cfg.grid_size,
                                              cfg.max_iters, cfg.tolerance);
        int target_index = (cfg.target_state == 0) ? 0 : g.grid_size - 1;
        bool interval_ok = count_policy_switches(g) == 1 && g.decision[target_index] == 1;

        bool absorbing_ok = true;
        int herd_events = 0;
        for (int start = 0; start < g.grid_size && absorbing_ok; start += 37) {
            Rng rng(start + 1);
            Belief pi = {1.0 - g.point(start), g.point(start)};
            int x = rng.categorical(pi);
            bool herded = false;
            for (int k = 0; k < 300; ++k) {
                int decision = g.decision[g.nearest_index(pi[1])];
                if (decision == 1) {
                    herded = true;
                    ++herd_events;
                    continue;
                }
                if (herded) {
                    absorbing_ok = false;
                    break;
                }
                int y = rng.categorical_row(&p.obs_likelihood.data[static_cast<std::size_t>(x) * 2],
                                            2);
                pi = hmm_filter(pi, y, p);
            }
        }
        report(9, interval_ok && absorbing_ok && herd_events > 0,
               fmt("herd region: %d decision switch(es) across the grid (want 1), target vertex "
                   "%s; %d herd events, reveal-after-herd %s",
                   count_policy_switches(g), g.decision[target_index] == 1 ? "herds" : "WRONG",
                   herd_events, absorbing_ok ? "never seen" : "SEEN"));
    } catch (const std::exception& e) {
        report(9, false, std::string("exception: ") + e.what());
    }

    if (g_failures == 0) {
        std::printf("acceptance: all 9 criteria passed\n");
        return 0;
    }
    std::printf("acceptance: %d criterion/criteria FAILED\n", g_failures);
    return 1;
}
