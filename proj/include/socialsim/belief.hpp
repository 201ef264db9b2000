#pragma once

#include <string>
#include <vector>

#include "socialsim/matrix.hpp"

namespace socialsim {

// Probability vector over states. Beliefs are stored normalized; operations
// producing beliefs normalize exactly once at the end.
using Belief = std::vector<double>;

// Sums to 1 within 1e-12 and has no negative entries.
bool is_valid_belief(const Belief& b);

// Rescales a nonnegative vector to sum to 1. Throws ZeroLikelihoodError if
// the total mass is zero.
Belief normalized(Belief b);

// Model primitives shared by all scenario kinds.
//
// states/observations/actions are X/Y/A. Rows of transition and
// obs_likelihood are probability vectors. costs(i, a) is the cost of action
// a in state i. When observation_revealing is set (requires A == Y), agents
// report their observation instead of taking a myopic action, and the social
// learning filter reduces exactly to the one-step HMM filter.
struct ModelParams {
    int states = 0;
    int observations = 0;
    int actions = 0;
    Matrix transition;       // X x X
    Matrix obs_likelihood;   // X x Y
    Matrix costs;            // X x A
    Belief prior;            // length X
    bool observation_revealing = false;

    // Collects every violated precondition; empty means valid.
    std::vector<std::string> validate() const;

    // Validating factory; throws ValidationError listing all issues.
    static ModelParams make(Matrix transition, Matrix obs_likelihood, Matrix costs,
                            Belief prior, bool observation_revealing = false);

    bool transition_is_identity() const;
    bool obs_likelihood_strictly_positive() const;
};

}  // namespace socialsim
