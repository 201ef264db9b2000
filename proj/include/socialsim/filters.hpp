#pragma once

#include <vector>

#include "socialsim/belief.hpp"

namespace socialsim {

// One-step Bayesian filter: predict through the transition, reweight by the
// likelihood of observation obs, normalize. Throws ZeroLikelihoodError when
// the observation has probability zero under the predicted belief.
Belief hmm_filter(const Belief& prior, int obs, const ModelParams& p);

// argmin over actions of costs(:, a)' * belief. Comparisons are exact
// floating point; ties resolve to the smallest action index.
int myopic_action(const Belief& belief, const Matrix& costs);

// Diagonal of the action likelihood: entry i is P(action | x = i, pub), the
// probability that an agent holding public belief pub takes the given action
// when the state is i. Each entry is the sum of obs_likelihood(i, y) over
// the observations y that the myopic rule maps to the action (or y == action
// in observation-revealing mode).
std::vector<double> action_likelihood(const Belief& pub, int action, const ModelParams& p);

struct FilterResult {
    Belief posterior;
    double normalizer;  // probability of the action given the public belief
};

// Social learning filter: Bayes update of the public belief by the action
// likelihood. Throws ZeroProbabilityActionError when the action has
// probability zero at this public belief.
FilterResult social_learning_filter(const Belief& pub, int action, const ModelParams& p);

namespace detail {

// Allocation-free kernels backing the public operations; simulators and grid
// solvers reuse one scratch across millions of steps.
struct FilterScratch {
    std::vector<double> predicted;  // transition' * pub
    std::vector<double> work;
};

// out = transition' * pub
void predict(const Belief& pub, const ModelParams& p, std::vector<double>& out);

// Myopic action for observation obs at the (unnormalized) predicted belief:
// argmin_a sum_i costs(i, a) * obs_likelihood(i, obs) * predicted(i), ties to
// the smallest index. In observation-revealing mode the action is obs itself.
int decision_for_obs(const std::vector<double>& predicted, int obs, const ModelParams& p);

// Writes the action-likelihood diagonal for `action` given predicted; returns
// nothing. Shared by action_likelihood and the social filter so both see
// identical floating-point results.
void action_likelihood_from_predicted(const std::vector<double>& predicted, int action,
                                      const ModelParams& p, std::vector<double>& out);

// Full social-learning step into `out`; returns the normalizer (possibly 0,
// callers decide whether that is an error).
double social_step(const Belief& pub, int action, const ModelParams& p, FilterScratch& scratch,
                   std::vector<double>& out);

// One-step HMM filter into `out`; returns the normalizer (possibly 0).
double hmm_step(const Belief& prior, int obs, const ModelParams& p, FilterScratch& scratch,
                std::vector<double>& out);

}  // namespace detail

}  // namespace socialsim
