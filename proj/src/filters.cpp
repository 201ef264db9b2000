#include "socialsim/filters.hpp"

#include "socialsim/errors.hpp"

namespace socialsim {

namespace detail {

void predict(const Belief& pub, const ModelParams& p, std::vector<double>& out) {
    const int X = p.states;
    out.assign(X, 0.0);
    for (int i = 0; i < X; ++i) {
        double s = 0.0;
        for (int j = 0; j < X; ++j) s += p.transition(j, i) * pub[j];
        out[i] = s;
    }
}

int decision_for_obs(const std::vector<double>& predicted, int obs, const ModelParams& p) {
    if (p.observation_revealing) return obs;
    const int X = p.states;
    int best = 0;
    double best_cost = 0.0;
    for (int a = 0; a < p.actions; ++a) {
        double cost = 0.0;
        for (int i = 0; i < X; ++i)
            cost += p.costs(i, a) * p.obs_likelihood(i, obs) * predicted[i];
        if (a == 0 || cost < best_cost) {
            best = a;
            best_cost = cost;
        }
    }
    return best;
}

void action_likelihood_from_predicted(const std::vector<double>& predicted, int action,
                                      const ModelParams& p, std::vector<double>& out) {
    const int X = p.states;
    out.assign(X, 0.0);
    for (int y = 0; y < p.observations; ++y) {
        if (decision_for_obs(predicted, y, p) != action) continue;
        for (int i = 0; i < X; ++i) out[i] += p.obs_likelihood(i, y);
    }
}

double social_step(const Belief& pub, int action, const ModelParams& p, FilterScratch& scratch,
                   std::vector<double>& out) {
    predict(pub, p, scratch.predicted);
    action_likelihood_from_predicted(scratch.predicted, action, p, scratch.work);
    const int X = p.states;
    out.resize(X);
    double sigma = 0.0;
    for (int i = 0; i < X; ++i) {
        out[i] = scratch.work[i] * scratch.predicted[i];
        sigma += out[i];
    }
    if (sigma > 0.0)
        for (int i = 0; i < X; ++i) out[i] /= sigma;
    return sigma;
}

double hmm_step(const Belief& prior, int obs, const ModelParams& p, FilterScratch& scratch,
                std::vector<double>& out) {
    predict(prior, p, scratch.predicted);
    const int X = p.states;
    out.resize(X);
    double sigma = 0.0;
    for (int i = 0; i < X; ++i) {
        out[i] = p.obs_likelihood(i, obs) * scratch.predicted[i];
        sigma += out[i];
    }
    if (sigma > 0.0)
        for (int i = 0; i < X; ++i) out[i] /= sigma;
    return sigma;
}

}  // namespace detail

Belief hmm_filter(const Belief& prior, int obs, const ModelParams& p) {
    detail::FilterScratch scratch;
    Belief out;
    const double sigma = detail::hmm_step(prior, obs, p, scratch, out);
    if (sigma <= 0.0)
        throw ZeroLikelihoodError("observation has zero likelihood under the predicted belief");
    return out;
}

int myopic_action(const Belief& belief, const Matrix& costs) {
    int best = 0;
    double best_cost = 0.0;
    for (int a = 0; a < costs.cols; ++a) {
        double cost = 0.0;
        for (int i = 0; i < costs.rows; ++i) cost += costs(i, a) * belief[i];
        if (a == 0 || cost < best_cost) {
            best = a;
            best_cost = cost;
        }
    }
    return best;
}

std::vector<double> action_likelihood(const Belief& pub, int action, const ModelParams& p) {
    std::vector<double> predicted, out;
    detail::predict(pub, p, predicted);
    detail::action_likelihood_from_predicted(predicted, action, p, out);
    return out;
}

FilterResult social_learning_filter(const Belief& pub, int action, const ModelParams& p) {
    detail::FilterScratch scratch;
    FilterResult res;
    res.normalizer = detail::social_step(pub, action, p, scratch, res.posterior);
    if (res.normalizer <= 0.0)
        throw ZeroProbabilityActionError("action has zero probability at this public belief");
    return res;
}

}  // namespace socialsim
