#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "socialsim/filters.hpp"

namespace socialsim {

// One sequential social-learning run. Step k (0-based here, 1-based in CSV
// output) holds the state after the k-th transition, the observation drawn at
// that state, the acting agent's private belief and action, and the public
// belief after the action is absorbed.
struct LearningTrace {
    Belief prior;
    std::vector<int> state;
    std::vector<int> observation;
    std::vector<int> action;
    std::vector<Belief> private_belief;
    std::vector<Belief> public_belief;

    int size() const { return static_cast<int>(action.size()); }
};

// Runs the sequential protocol for `horizon` steps. The chain starts with a
// latent draw from the prior, and each step performs a transition draw, an
// observation draw, the myopic action (or the observation itself in
// observation-revealing mode), and the public-belief update. Draw order per
// step is fixed: transition, then observation. Deterministic per seed.
LearningTrace run_protocol(const ModelParams& p, int horizon, std::uint64_t seed);

// True iff every observation with positive probability under the predicted
// belief leads the acting agent to the same action.
bool is_individual_herd(const Belief& pub, const ModelParams& p);

// The common action of a herding belief, when there is one.
std::optional<int> herd_action(const Belief& pub, const ModelParams& p);

// True iff the public belief is frozen: for every action with positive
// probability, the social filter moves the belief by at most tol (sup norm).
bool is_cascade_point(const Belief& pub, const ModelParams& p, double tol = 1e-12);

// Detector results on a finite trace; unset means not observed within the
// horizon. Indices are 0-based steps.
struct HerdReport {
    // First step whose acting agent faced a herding public belief.
    std::optional<int> individual_herd_at;
    // Start of the maximal terminal run of identical actions. A nonempty
    // trace always has one (possibly the last step alone).
    std::optional<int> herd_at;
    // First step whose post-action public belief is a cascade point.
    std::optional<int> cascade_at;
};

HerdReport analyze_trace(const LearningTrace& t, const ModelParams& p, double tol = 1e-12);

// First step k whose post-action public belief is frozen, simulating at most
// `horizon` steps. Matches analyze_trace(run_protocol(...)).cascade_at and
// exits as soon as the cascade forms.
std::optional<int> first_cascade_step(const ModelParams& p, int horizon, std::uint64_t seed,
                                      double tol = 1e-12);

// Maximal grid interval on which every observation maps to the same action.
// lo/hi are pi(2) values; interior boundaries sit at the midpoint between the
// last grid point inside and the first outside, so for the canonical
// two-interval geometry the first interval is [0, pi1*] and the last is
// [pi2*, 1].
struct HerdInterval {
    int action;
    double lo = 0.0;
    double hi = 0.0;
    int lo_index = 0;
    int hi_index = 0;
};

// Scans a uniform grid over pi(2) for two-state models. Throws
// UnsupportedDimensionError when states != 2.
std::vector<HerdInterval> herd_region_boundaries(const ModelParams& p, int grid_size);

}  // namespace socialsim
