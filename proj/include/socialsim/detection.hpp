#pragma once

#include <cstdint>
#include <vector>

#include "socialsim/filters.hpp"

namespace socialsim {

// Kolmogorov-Shiryaev style stopping costs: delay per step after the change
// and a penalty for announcing before it. At least one must be positive.
struct DetectionCosts {
    double delay = 0.0;
    double false_alarm = 0.0;

    std::vector<std::string> validate() const;
};

// Stationary policy on a uniform grid over pi(2) for two-state problems.
// decision 1 stops (announce the change, or herd in the privacy problem),
// decision 2 continues (keep observing, or reveal). Value lookups between
// grid points interpolate linearly; policy execution uses the nearest point.
struct PolicyGrid {
    int grid_size = 0;
    std::vector<int> decision;
    std::vector<double> value;

    double point(int g) const { return static_cast<double>(g) / (grid_size - 1); }
    int nearest_index(double pi2) const;
    double interpolate_value(double pi2) const;
};

// Dynamic programming over public beliefs updated by raw observations.
// Requires states == 2 and an absorbing first state (row 1 of the transition
// equals (1, 0); NotAbsorbingError otherwise). The fixed point iteration is
// synchronous, starts from V = 0, and stops after max_iters sweeps or when
// the sup-norm residual drops to tol.
PolicyGrid solve_classical_qd(const ModelParams& p, const DetectionCosts& c, int grid_size,
                              int max_iters, double tol);

// Same problem, but the decision maker only sees the actions of myopic
// social learners, so beliefs move by the social learning filter.
PolicyGrid solve_social_qd(const ModelParams& p, const DetectionCosts& c, int grid_size,
                           int max_iters, double tol);

// Number of adjacent grid pairs whose decision differs.
int count_policy_switches(const PolicyGrid& g);
// Only transitions from `from` to `to`, scanning pi(2) upward.
int count_policy_switches(const PolicyGrid& g, int from, int to);

struct StoppingOutcome {
    double mean_cost = 0.0;
    double mean_delay = 0.0;       // E(tau - tau0)^+
    double false_alarm_rate = 0.0; // P(tau < tau0)
};

// Monte Carlo rollout of a stationary policy. Each run draws the initial
// state from the prior (tau0 = 0 when it starts changed), then alternates
// policy lookup at the current public belief with one protocol step
// (transition, observation, social action, belief update). Stops at
// decision 1 or at the horizon cap. Run r uses an engine seeded seed + r.
StoppingOutcome simulate_detection(const PolicyGrid& policy, const ModelParams& p,
                                   const DetectionCosts& c, std::uint64_t seed, int runs,
                                   int horizon);

// Privacy-constrained stopping: at each step the agent either reveals its
// observation (action 0 costs, belief moves by the Bayes update) or herds
// (action 1 costs, belief frozen forever; the transition must be the
// identity so herding is absorbing). Value iteration on
//   V(pi) = min( herd_cost' pi / (1 - discount),
//                sum_y P(y|pi) [ reveal_cost' eta_y + discount * V(eta_y) ] ).
// decision 1 herds, 2 reveals. Requires states == 2, actions == 2 and
// discount in [0, 1) (InvalidDiscountError otherwise). target_state is the
// 0-based state whose vertex the herd region is expected to contain; it is
// validated but does not enter the recursion.
PolicyGrid solve_privacy_stopping(const ModelParams& p, double discount, int target_state,
                                  int grid_size, int max_iters, double tol);

}  // namespace socialsim
