#include "socialsim/detection.hpp"

#include <algorithm>
#include <cmath>

#include "socialsim/errors.hpp"
#include "socialsim/rng.hpp"

namespace socialsim {

namespace {

void require_two_states(const ModelParams& p, const char* what) {
    if (p.states != 2) throw UnsupportedDimensionError(std::string(what) + " requires two states");
}

void require_absorbing(const ModelParams& p) {
    if (p.transition(0, 0) != 1.0 || p.transition(0, 1) != 0.0)
        throw NotAbsorbingError("the change state (state 1) must be absorbing");
}

void check_grid_args(int grid_size, int max_iters, double tol) {
    std::vector<std::string> issues;
    if (grid_size < 2) issues.push_back("grid_size must be at least 2");
    if (max_iters < 1) issues.push_back("max_iters must be at least 1");
    if (!(tol >= 0.0)) issues.push_back("tolerance must be nonnegative");
    if (!issues.empty()) throw ValidationError(std::move(issues));
}

double interp(const std::vector<double>& v, double pi2) {
    const int G = static_cast<int>(v.size());
    double u = pi2 * (G - 1);
    if (u <= 0.0) return v.front();
    if (u >= G - 1) return v.back();
    const int g = static_cast<int>(u);
    const double frac = u - g;
    return (1.0 - frac) * v[g] + frac * v[g + 1];
}

// One Bellman backup at belief pi against the previous value table. The
// continuation term sums over the branches of `step`, which fills posterior
// and returns the branch probability (or 0 for impossible branches).
template <typename StepFn>
void sweep(const DetectionCosts& c, const std::vector<double>& prev,
           int branches, StepFn&& step, std::vector<double>& out, std::vector<int>* decisions) {
    const int G = static_cast<int>(prev.size());
    Belief pi(2);
    Belief post(2);
    for (int g = 0; g < G; ++g) {
        const double pi2 = static_cast<double>(g) / (G - 1);
        pi[0] = 1.0 - pi2;
        pi[1] = pi2;
        const double stop_cost = c.false_alarm * pi2;
        double cont_cost = c.delay * (1.0 - pi2);
        for (int b = 0; b < branches; ++b) {
            const double prob = step(pi, b, post);
            if (!(prob > 0.0)) continue;
            cont_cost += prob * interp(prev, post[1]);
        }
        out[g] = std::min(stop_cost, cont_cost);
        if (decisions) (*decisions)[g] = (stop_cost <= cont_cost) ? 1 : 2;
    }
}

template <typename StepFn>
PolicyGrid solve_stopping(const DetectionCosts& c, int grid_size,
                          int max_iters, double tol, int branches, StepFn&& step) {
    PolicyGrid grid;
    grid.grid_size = grid_size;
    grid.decision.assign(grid_size, 1);
    grid.value.assign(grid_size, 0.0);

    std::vector<double> prev(grid_size, 0.0);
    std::vector<double> next(grid_size, 0.0);
    for (int it = 0; it < max_iters; ++it) {
        sweep(c, prev, branches, step, next, nullptr);
        double residual = 0.0;
        for (int g = 0; g < grid_size; ++g)
            residual = std::max(residual, std::fabs(next[g] - prev[g]));
        prev.swap(next);
        if (residual <= tol) break;
    }
    // Final pass extracts the greedy decisions against the converged table.
    sweep(c, prev, branches, step, grid.value, &grid.decision);
    return grid;
}

}  // namespace

std::vector<std::string> DetectionCosts::validate() const {
    std::vector<std::string> issues;
    if (!(delay >= 0.0)) issues.push_back("delay cost must be nonnegative");
    if (!(false_alarm >= 0.0)) issues.push_back("false alarm cost must be nonnegative");
    if (delay == 0.0 && false_alarm == 0.0)
        issues.push_back("at least one of the detection costs must be positive");
    return issues;
}

int PolicyGrid::nearest_index(double pi2) const {
    const double u = pi2 * (grid_size - 1);
    const int g = static_cast<int>(std::lround(u));
    return std::clamp(g, 0, grid_size - 1);
}

double PolicyGrid::interpolate_value(double pi2) const {
    return interp(value, pi2);
}

PolicyGrid solve_classical_qd(const ModelParams& p, const DetectionCosts& c, int grid_size,
                              int max_iters, double tol) {
    require_two_states(p, "classical detection");
    require_absorbing(p);
    check_grid_args(grid_size, max_iters, tol);
    {
        auto issues = c.validate();
        if (!issues.empty()) throw ValidationError(std::move(issues));
    }
    detail::FilterScratch scratch;
    auto step = [&p, &scratch](const Belief& pi, int y, Belief& post) {
        return detail::hmm_step(pi, y, p, scratch, post);
    };
    return solve_stopping(c, grid_size, max_iters, tol, p.observations, step);
}

PolicyGrid solve_social_qd(const ModelParams& p, const DetectionCosts& c, int grid_size,
                           int max_iters, double tol) {
    require_two_states(p, "social detection");
    require_absorbing(p);
    check_grid_args(grid_size, max_iters, tol);
    {
        auto issues = c.validate();
        if (!issues.empty()) throw ValidationError(std::move(issues));
    }
    detail::FilterScratch scratch;
    auto step = [&p, &scratch](const Belief& pi, int a, Belief& post) {
        return detail::social_step(pi, a, p, scratch, post);
    };
    return solve_stopping(c, grid_size, max_iters, tol, p.actions, step);
}

int count_policy_switches(const PolicyGrid& g) {
    int n = 0;
    for (int i = 0; i + 1 < g.grid_size; ++i)
        if (g.decision[i] != g.decision[i + 1]) ++n;
    return n;
}

int count_policy_switches(const PolicyGrid& g, int from, int to) {
    int n = 0;
    for (int i = 0; i + 1 < g.grid_size; ++i)
        if (g.decision[i] == from && g.decision[i + 1] == to) ++n;
    return n;
}

StoppingOutcome simulate_detection(const PolicyGrid& policy, const ModelParams& p,
                                   const DetectionCosts& c, std::uint64_t seed, int runs,
                                   int horizon) {
    require_two_states(p, "detection rollout");
    if (runs < 1) throw ValidationError({"runs must be at least 1"});
    if (horizon < 0) throw ValidationError({"horizon must be nonnegative"});

    StoppingOutcome out;
    detail::FilterScratch scratch;
    Belief pub, eta, next;
    for (int r = 0; r < runs; ++r) {
        Rng rng(seed + static_cast<std::uint64_t>(r));
        int x = rng.categorical(p.prior);
        long long tau0 = (x == 0) ? 0 : -1;  // -1: change not seen yet
        pub = p.prior;
        long long tau = horizon;
        for (long long k = 0; k <= horizon; ++k) {
            if (policy.decision[policy.nearest_index(pub[1])] == 1) {
                tau = k;
                break;
            }
            if (k == horizon) {
                tau = horizon;
                break;
            }
            x = rng.categorical_row(&p.transition.data[static_cast<std::size_t>(x) * p.states],
                                    p.states);
            if (tau0 < 0 && x == 0) tau0 = k + 1;
            const int y = rng.categorical_row(
                &p.obs_likelihood.data[static_cast<std::size_t>(x) * p.observations],
                p.observations);
            const double eta_norm = detail::hmm_step(pub, y, p, scratch, eta);
            if (eta_norm <= 0.0)
                throw ZeroLikelihoodError(
                    "observation has zero likelihood under the predicted belief");
            const int a = p.observation_revealing ? y : myopic_action(eta, p.costs);
            const double sigma = detail::social_step(pub, a, p, scratch, next);
            if (sigma <= 0.0)
                throw ZeroProbabilityActionError(
                    "action has zero probability at this public belief");
            pub = next;
        }
        const bool false_alarm = (tau0 < 0) || (tau < tau0);
        const double delay = (tau0 >= 0 && tau > tau0) ? static_cast<double>(tau - tau0) : 0.0;
        out.mean_delay += delay;
        out.false_alarm_rate += false_alarm ? 1.0 : 0.0;
        out.mean_cost += c.delay * delay + (false_alarm ? c.false_alarm : 0.0);
    }
    out.mean_cost /= runs;
    out.mean_delay /= runs;
    out.false_alarm_rate /= runs;
    return out;
}

PolicyGrid solve_privacy_stopping(const ModelParams& p, double discount, int target_state,
                                  int grid_size, int max_iters, double tol) {
    require_two_states(p, "privacy stopping");
    if (!(discount >= 0.0 && discount < 1.0))
        throw InvalidDiscountError("discount must lie in [0, 1)");
    if (p.actions != 2)
        throw UnsupportedDimensionError("privacy stopping uses exactly two actions");
    if (!p.transition_is_identity())
        throw ModelError("privacy stopping requires an identity transition");
    if (target_state < 0 || target_state >= p.states)
        throw ValidationError({"target state out of range"});
    check_grid_args(grid_size, max_iters, tol);

    const int G = grid_size;
    PolicyGrid grid;
    grid.grid_size = G;
    grid.decision.assign(G, 1);
    grid.value.assign(G, 0.0);

    detail::FilterScratch scratch;
    std::vector<double> prev(G, 0.0), next(G, 0.0);
    Belief pi(2), eta(2);

    auto backup = [&](const std::vector<double>& table, std::vector<double>& out,
                      std::vector<int>* decisions) {
        for (int g = 0; g < G; ++g) {
            const double pi2 = static_cast<double>(g) / (G - 1);
            pi[0] = 1.0 - pi2;
            pi[1] = pi2;
            const double herd_cost =
                (p.costs(0, 1) * pi[0] + p.costs(1, 1) * pi[1]) / (1.0 - discount);
            double reveal_cost = 0.0;
            for (int y = 0; y < p.observations; ++y) {
                const double prob = detail::hmm_step(pi, y, p, scratch, eta);
                if (!(prob > 0.0)) continue;
                const double immediate = p.costs(0, 0) * eta[0] + p.costs(1, 0) * eta[1];
                reveal_cost += prob * (immediate + discount * interp(table, eta[1]));
            }
            out[g] = std::min(herd_cost, reveal_cost);
            if (decisions) (*decisions)[g] = (herd_cost <= reveal_cost) ? 1 : 2;
        }
    };

    for (int it = 0; it < max_iters; ++it) {
        backup(prev, next, nullptr);
        double residual = 0.0;
        for (int g = 0; g < G; ++g) residual = std::max(residual, std::fabs(next[g] - prev[g]));
        prev.swap(next);
        if (residual <= tol) break;
    }
    backup(prev, grid.value, &grid.decision);
    return grid;
}

}  // namespace socialsim
