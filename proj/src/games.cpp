#include "socialsim/games.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "socialsim/rng.hpp"

namespace socialsim {

namespace {

long long checked_profile_count(const std::vector<int>& action_counts) {
    long long n = 1;
    for (int a : action_counts) {
        n *= a;
        if (n > (1LL << 30)) {
            throw TooLargeError("joint profile space exceeds 2^30 entries");
        }
    }
    return n;
}

}  // namespace

GameSpec GameSpec::make(std::vector<int> action_counts,
                        std::vector<std::vector<double>> utilities) {
    std::vector<std::string> issues;
    if (action_counts.empty()) {
        issues.push_back("game has no players");
    }
    for (std::size_t l = 0; l < action_counts.size(); ++l) {
        if (action_counts[l] < 2) {
            issues.push_back("player " + std::to_string(l + 1) +
                             " needs at least 2 actions");
        }
    }
    if (utilities.size() != action_counts.size()) {
        issues.push_back("expected " + std::to_string(action_counts.size()) +
                         " utility tables, got " + std::to_string(utilities.size()));
    }
    if (issues.empty()) {
        long long profiles = checked_profile_count(action_counts);
        for (std::size_t l = 0; l < utilities.size(); ++l) {
            if (static_cast<long long>(utilities[l].size()) != profiles) {
                issues.push_back("utility table for player " + std::to_string(l + 1) +
                                 " has " + std::to_string(utilities[l].size()) +
                                 " entries, expected " + std::to_string(profiles));
            } else {
                for (double u : utilities[l]) {
                    if (!std::isfinite(u)) {
                        issues.push_back("utility table for player " +
                                         std::to_string(l + 1) +
                                         " contains a non-finite entry");
                        break;
                    }
                }
            }
        }
    }
    if (!issues.empty()) {
        throw ValidationError(issues);
    }
    GameSpec g;
    g.player_count = static_cast<int>(action_counts.size());
    g.action_counts = std::move(action_counts);
    g.utilities = std::move(utilities);
    return g;
}

int GameSpec::profile_count() const {
    int n = 1;
    for (int a : action_counts) n *= a;
    return n;
}

int GameSpec::profile_index(const std::vector<int>& profile) const {
    int idx = 0;
    for (int l = 0; l < player_count; ++l) {
        idx = idx * action_counts[l] + profile[l];
    }
    return idx;
}

double GameSpec::utility(int player, const std::vector<int>& profile) const {
    return utilities[player][profile_index(profile)];
}

double GameSpec::utility_spread(int player) const {
    const auto& u = utilities[player];
    auto [lo, hi] = std::minmax_element(u.begin(), u.end());
    return *hi - *lo;
}

std::vector<double> action_pmf(const RegretState& s, int actions) {
    double total_positive = 0.0;
    for (int j = 0; j < actions; ++j) {
        if (j == s.last_action) continue;
        total_positive += std::max(0.0, s.at(s.last_action, j, actions));
    }
    if (!(s.C > total_positive)) {
        throw InvalidNormalizerError(
            "normalizer " + std::to_string(s.C) +
            " does not exceed total positive regret " + std::to_string(total_positive));
    }
    std::vector<double> pmf(actions, 0.0);
    double switch_mass = 0.0;
    for (int j = 0; j < actions; ++j) {
        if (j == s.last_action) continue;
        pmf[j] = std::max(0.0, s.at(s.last_action, j, actions)) / s.C;
        switch_mass += pmf[j];
    }
    pmf[s.last_action] = 1.0 - switch_mass;
    return pmf;
}

void regret_update(RegretState& s, int player, const std::vector<int>& profile,
                   const GameSpec& g, long long k) {
    const int actions = g.action_counts[player];
    const int own = profile[player];
    const double own_u = g.utility(player, profile);
    std::vector<int> swapped = profile;
    const double step = 1.0 / static_cast<double>(k);
    for (int i = 0; i < actions; ++i) {
        for (int j = 0; j < actions; ++j) {
            double inst = 0.0;
            if (own == i) {
                swapped[player] = j;
                inst = g.utility(player, swapped) - own_u;
            }
            double& r = s.regret[static_cast<std::size_t>(i) * actions + j];
            r += step * (inst - r);
        }
    }
    s.last_action = own;
}

std::vector<double> EmpiricalDistribution::probabilities() const {
    std::vector<double> p(counts.size(), 0.0);
    if (steps <= 0) return p;
    const double inv = 1.0 / static_cast<double>(steps);
    for (std::size_t i = 0; i < counts.size(); ++i) {
        p[i] = counts[i] * inv;
    }
    return p;
}

namespace {

double max_positive_regret(const RegretState& s, int actions) {
    double m = 0.0;
    for (int i = 0; i < actions; ++i) {
        for (int j = 0; j < actions; ++j) {
            if (i == j) continue;
            m = std::max(m, s.at(i, j, actions));
        }
    }
    return m;
}

}  // namespace

GameRunResult run_repeated_game(const GameSpec& g, long long steps, std::uint64_t seed,
                                std::vector<double> normalizers,
                                std::vector<long long> checkpoints) {
    if (steps < 1) {
        throw ValidationError({"game needs at least 1 step"});
    }
    if (normalizers.empty()) {
        normalizers.resize(g.player_count);
        for (int l = 0; l < g.player_count; ++l) {
            normalizers[l] = 2.0 * g.action_counts[l] * g.utility_spread(l);
            if (normalizers[l] <= 0.0) normalizers[l] = 1.0;
        }
    }
    if (static_cast<int>(normalizers.size()) != g.player_count) {
        throw ValidationError({"expected " + std::to_string(g.player_count) +
                               " normalizers, got " + std::to_string(normalizers.size())});
    }
    for (int l = 0; l < g.player_count; ++l) {
        if (!(normalizers[l] > 0.0)) {
            throw InvalidNormalizerError("normalizer for player " + std::to_string(l + 1) +
                                         " must be positive");
        }
    }
    std::sort(checkpoints.begin(), checkpoints.end());

    GameRunResult out;
    out.distribution.counts.assign(g.profile_count(), 0.0);
    out.regrets.resize(g.player_count);
    for (int l = 0; l < g.player_count; ++l) {
        const int a = g.action_counts[l];
        out.regrets[l].regret.assign(static_cast<std::size_t>(a) * a, 0.0);
        out.regrets[l].last_action = 0;
        out.regrets[l].C = normalizers[l];
    }
    out.actions.reserve(static_cast<std::size_t>(std::min(steps, 1LL << 22)));

    Rng rng(seed);
    std::vector<int> profile(g.player_count, 0);
    std::size_t next_checkpoint = 0;
    for (long long k = 1; k <= steps; ++k) {
        for (int l = 0; l < g.player_count; ++l) {
            if (k == 1) {
                std::vector<double> uniform(g.action_counts[l],
                                            1.0 / g.action_counts[l]);
                profile[l] = rng.categorical(uniform);
            } else {
                profile[l] = rng.categorical(action_pmf(out.regrets[l],
                                                        g.action_counts[l]));
            }
        }
        out.distribution.counts[g.profile_index(profile)] += 1.0;
        out.distribution.steps = k;
        for (int l = 0; l < g.player_count; ++l) {
            regret_update(out.regrets[l], l, profile, g, k);
        }
        out.actions.push_back(profile);
        if (next_checkpoint < checkpoints.size() && checkpoints[next_checkpoint] == k) {
            CheckpointStat stat;
            stat.step = k;
            for (int l = 0; l < g.player_count; ++l) {
                stat.max_positive_regret.push_back(
                    max_positive_regret(out.regrets[l], g.action_counts[l]));
            }
            stat.ce_violation = ce_violation(out.distribution, g).value;
            out.checkpoints.push_back(std::move(stat));
            ++next_checkpoint;
        }
    }
    return out;
}

CeViolation ce_violation(const EmpiricalDistribution& d, const GameSpec& g) {
    CeViolation best;
    if (d.steps <= 0) return best;
    best.value = -std::numeric_limits<double>::infinity();
    const double inv = 1.0 / static_cast<double>(d.steps);
    const int profiles = g.profile_count();

    std::vector<int> profile(g.player_count, 0);
    for (int l = 0; l < g.player_count; ++l) {
        const int actions = g.action_counts[l];
        // gain[i * actions + j]: expected utility change if action i is
        // remapped to j everywhere it appears in the distribution. Rows of
        // unplayed actions stay zero.
        std::vector<double> gain(static_cast<std::size_t>(actions) * actions, 0.0);
        for (int idx = 0; idx < profiles; ++idx) {
            if (d.counts[idx] == 0.0) continue;
            int rem = idx;
            for (int m = g.player_count - 1; m >= 0; --m) {
                profile[m] = rem % g.action_counts[m];
                rem /= g.action_counts[m];
            }
            const double p = d.counts[idx] * inv;
            const int own = profile[l];
            const double own_u = g.utilities[l][idx];
            std::vector<int> swapped = profile;
            for (int j = 0; j < actions; ++j) {
                if (j == own) continue;
                swapped[l] = j;
                gain[static_cast<std::size_t>(own) * actions + j] +=
                    p * (g.utility(l, swapped) - own_u);
            }
        }
        for (int i = 0; i < actions; ++i) {
            for (int j = 0; j < actions; ++j) {
                if (j == i) continue;
                const double v = gain[static_cast<std::size_t>(i) * actions + j];
                if (v > best.value) {
                    best.value = v;
                    best.player = l;
                    best.from_action = i;
                    best.to_action = j;
                }
            }
        }
    }
    return best;
}

RegretState fuse_group_regrets(const std::vector<RegretState>& states,
                               const std::vector<double>& weights) {
    if (states.empty()) {
        throw ShapeMismatchError("cannot fuse an empty set of regret states");
    }
    if (states.size() != weights.size()) {
        throw ShapeMismatchError("got " + std::to_string(states.size()) +
                                 " regret states and " + std::to_string(weights.size()) +
                                 " weights");
    }
    RegretState fused;
    fused.regret.assign(states[0].regret.size(), 0.0);
    fused.last_action = states[0].last_action;
    fused.C = states[0].C;
    for (std::size_t s = 0; s < states.size(); ++s) {
        if (states[s].regret.size() != fused.regret.size()) {
            throw ShapeMismatchError("regret state " + std::to_string(s + 1) +
                                     " has a different shape");
        }
        for (std::size_t i = 0; i < fused.regret.size(); ++i) {
            fused.regret[i] += weights[s] * states[s].regret[i];
        }
    }
    return fused;
}

}  // namespace socialsim
