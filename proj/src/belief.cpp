#include "socialsim/belief.hpp"

#include <cmath>
#include <cstdio>

#include "socialsim/errors.hpp"

namespace socialsim {

namespace {

constexpr double kStochasticTol = 1e-12;

bool row_is_stochastic(const Matrix& m, int r) {
    double sum = 0.0;
    for (int c = 0; c < m.cols; ++c) {
        const double v = m(r, c);
        if (!(v >= 0.0) || !std::isfinite(v)) return false;
        sum += v;
    }
    return std::fabs(sum - 1.0) <= kStochasticTol;
}

std::string describe(const char* name, int r) {
    char buf[96];
    std::snprintf(buf, sizeof(buf), "%s row %d is not a probability vector", name, r + 1);
    return buf;
}

}  // namespace

bool is_valid_belief(const Belief& b) {
    double sum = 0.0;
    for (double v : b) {
        if (!(v >= 0.0) || !std::isfinite(v)) return false;
        sum += v;
    }
    return std::fabs(sum - 1.0) <= kStochasticTol;
}

Belief normalized(Belief b) {
    double sum = 0.0;
    for (double v : b) sum += v;
    if (sum <= 0.0) throw ZeroLikelihoodError("cannot normalize a zero-mass vector");
    for (double& v : b) v /= sum;
    return b;
}

std::vector<std::string> ModelParams::validate() const {
    std::vector<std::string> issues;
    if (states < 2) issues.push_back("states must be at least 2");
    if (observations < 2) issues.push_back("observations must be at least 2");
    if (actions < 2) issues.push_back("actions must be at least 2");
    if (observation_revealing && actions != observations)
        issues.push_back("observation-revealing mode requires actions == observations");

    if (transition.rows != states || transition.cols != states) {
        issues.push_back("transition must be states x states");
    } else {
        for (int r = 0; r < states; ++r)
            if (!row_is_stochastic(transition, r)) issues.push_back(describe("transition", r));
    }

    if (obs_likelihood.rows != states || obs_likelihood.cols != observations) {
        issues.push_back("obs_likelihood must be states x observations");
    } else {
        for (int r = 0; r < states; ++r)
            if (!row_is_stochastic(obs_likelihood, r))
                issues.push_back(describe("obs_likelihood", r));
    }

    if (costs.rows != states || costs.cols != actions) {
        issues.push_back("costs must be states x actions");
    } else {
        for (double v : costs.data)
            if (!std::isfinite(v)) {
                issues.push_back("costs must be finite");
                break;
            }
    }

    if (static_cast<int>(prior.size()) != states) {
        issues.push_back("prior must have one entry per state");
    } else if (!is_valid_belief(prior)) {
        issues.push_back("prior is not a probability vector");
    }
    return issues;
}

ModelParams ModelParams::make(Matrix transition, Matrix obs_likelihood, Matrix costs,
                              Belief prior, bool observation_revealing) {
    ModelParams p;
    p.states = transition.rows;
    p.observations = obs_likelihood.cols;
    p.actions = costs.cols;
    p.transition = std::move(transition);
    p.obs_likelihood = std::move(obs_likelihood);
    p.costs = std::move(costs);
    p.prior = std::move(prior);
    p.observation_revealing = observation_revealing;
    auto issues = p.validate();
    if (!issues.empty()) throw ValidationError(std::move(issues));
    return p;
}

bool ModelParams::transition_is_identity() const {
    for (int i = 0; i < states; ++i)
        for (int j = 0; j < states; ++j)
            if (transition(i, j) != (i == j ? 1.0 : 0.0)) return false;
    return true;
}

bool ModelParams::obs_likelihood_strictly_positive() const {
    for (double v : obs_likelihood.data)
        if (!(v > 0.0)) return false;
    return true;
}

}  // namespace socialsim
