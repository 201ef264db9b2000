#pragma once

#include <cstdint>
#include <vector>

#include "socialsim/errors.hpp"

namespace socialsim {

// Finite normal-form game. utilities[l] is a flat table over joint action
// profiles in row-major order: the last player's action varies fastest.
struct GameSpec {
    int player_count = 0;
    std::vector<int> action_counts;
    std::vector<std::vector<double>> utilities;

    static GameSpec make(std::vector<int> action_counts,
                         std::vector<std::vector<double>> utilities);

    int profile_count() const;
    int profile_index(const std::vector<int>& profile) const;
    double utility(int player, const std::vector<int>& profile) const;
    // max - min of the player's utility table.
    double utility_spread(int player) const;
};

// Regret-matching state for one player: the running average regret matrix
// r(i, j) (row-major, actions x actions), the previous action, and the
// normalizer C that caps the total switch probability.
struct RegretState {
    std::vector<double> regret;
    int last_action = 0;
    double C = 0.0;

    double at(int i, int j, int actions) const {
        return regret[static_cast<std::size_t>(i) * actions + j];
    }
};

// Switch to j != last with probability |r(last, j)|^+ / C, stay otherwise.
// Throws InvalidNormalizerError unless C exceeds the total positive regret
// of the current row, which keeps the stay probability positive.
std::vector<double> action_pmf(const RegretState& s, int actions);

// Stochastic-approximation update after step k (1-based):
//   r_k(i, j) = r_{k-1}(i, j)
//             + (1/k) ( [U(j, a^-l) - U(own, a^-l)] 1{own = i} - r_{k-1}(i, j) )
// `profile` is the full joint action profile actually played.
void regret_update(RegretState& s, int player, const std::vector<int>& profile,
                   const GameSpec& g, long long k);

struct EmpiricalDistribution {
    std::vector<double> counts;  // per joint profile
    long long steps = 0;

    std::vector<double> probabilities() const;
};

struct CheckpointStat {
    long long step = 0;
    std::vector<double> max_positive_regret;  // per player
    double ce_violation = 0.0;
};

struct GameRunResult {
    EmpiricalDistribution distribution;
    std::vector<RegretState> regrets;
    std::vector<std::vector<int>> actions;  // joint profile per step
    std::vector<CheckpointStat> checkpoints;
};

// Repeated play with simultaneous regret matching. Step 1 actions are
// uniform; later steps sample from action_pmf in player order, then every
// player's regrets update. Normalizers default per player to
// 2 * actions * utility spread when `normalizers` is empty. Checkpoints
// capture running max positive regrets and the CE violation.
GameRunResult run_repeated_game(const GameSpec& g, long long steps, std::uint64_t seed,
                                std::vector<double> normalizers = {},
                                std::vector<long long> checkpoints = {});

// Max over players l and ordered action pairs (i, j), i != j, of the
// expected gain from remapping i to j everywhere it appears in the
// distribution. Nonpositive means the distribution lies in the correlated
// equilibrium polytope. Unplayed actions contribute zero gain.
struct CeViolation {
    double value = 0.0;
    int player = -1;
    int from_action = -1;
    int to_action = -1;
};

CeViolation ce_violation(const EmpiricalDistribution& d, const GameSpec& g);

// Weighted entrywise sum of regret matrices of identical shape; last action
// and normalizer carry over from the first state.
RegretState fuse_group_regrets(const std::vector<RegretState>& states,
                               const std::vector<double>& weights);

}  // namespace socialsim
