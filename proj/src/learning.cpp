#include "socialsim/learning.hpp"

#include <cmath>

#include "socialsim/errors.hpp"
#include "socialsim/rng.hpp"

namespace socialsim {

namespace {

// Common action over the possible observations, or nullopt when two possible
// observations disagree. Observations with zero probability under the
// predicted belief cannot occur and are skipped.
std::optional<int> herd_action_impl(const Belief& pub, const ModelParams& p,
                                    detail::FilterScratch& scratch) {
    detail::predict(pub, p, scratch.predicted);
    std::optional<int> common;
    for (int y = 0; y < p.observations; ++y) {
        double py = 0.0;
        for (int i = 0; i < p.states; ++i)
            py += p.obs_likelihood(i, y) * scratch.predicted[i];
        if (!(py > 0.0)) continue;
        const int a = detail::decision_for_obs(scratch.predicted, y, p);
        if (!common) {
            common = a;
        } else if (*common != a) {
            return std::nullopt;
        }
    }
    return common;
}

bool is_cascade_point_impl(const Belief& pub, const ModelParams& p, double tol,
                           detail::FilterScratch& scratch, std::vector<double>& next) {
    for (int a = 0; a < p.actions; ++a) {
        const double sigma = detail::social_step(pub, a, p, scratch, next);
        if (!(sigma > 0.0)) continue;
        for (int i = 0; i < p.states; ++i)
            if (std::fabs(next[i] - pub[i]) > tol) return false;
    }
    return true;
}

}  // namespace

LearningTrace run_protocol(const ModelParams& p, int horizon, std::uint64_t seed) {
    LearningTrace t;
    t.prior = p.prior;
    t.state.reserve(horizon);
    t.observation.reserve(horizon);
    t.action.reserve(horizon);
    t.private_belief.reserve(horizon);
    t.public_belief.reserve(horizon);

    Rng rng(seed);
    detail::FilterScratch scratch;
    int x = rng.categorical(p.prior);
    Belief pub = p.prior;
    Belief eta, next;
    for (int k = 0; k < horizon; ++k) {
        x = rng.categorical_row(&p.transition.data[static_cast<std::size_t>(x) * p.states],
                                p.states);
        const int y = rng.categorical_row(
            &p.obs_likelihood.data[static_cast<std::size_t>(x) * p.observations],
            p.observations);
        const double eta_norm = detail::hmm_step(pub, y, p, scratch, eta);
        if (eta_norm <= 0.0)
            throw ZeroLikelihoodError("observation has zero likelihood under the predicted belief");
        const int a = p.observation_revealing ? y : myopic_action(eta, p.costs);
        const double sigma = detail::social_step(pub, a, p, scratch, next);
        if (sigma <= 0.0)
            throw ZeroProbabilityActionError("action has zero probability at this public belief");

        t.state.push_back(x);
        t.observation.push_back(y);
        t.action.push_back(a);
        t.private_belief.push_back(eta);
        t.public_belief.push_back(next);
        pub = next;
    }
    return t;
}

bool is_individual_herd(const Belief& pub, const ModelParams& p) {
    detail::FilterScratch scratch;
    return herd_action_impl(pub, p, scratch).has_value();
}

std::optional<int> herd_action(const Belief& pub, const ModelParams& p) {
    detail::FilterScratch scratch;
    return herd_action_impl(pub, p, scratch);
}

bool is_cascade_point(const Belief& pub, const ModelParams& p, double tol) {
    detail::FilterScratch scratch;
    std::vector<double> next;
    return is_cascade_point_impl(pub, p, tol, scratch, next);
}

HerdReport analyze_trace(const LearningTrace& t, const ModelParams& p, double tol) {
    HerdReport r;
    const int n = t.size();
    if (n == 0) return r;

    detail::FilterScratch scratch;
    for (int k = 0; k < n; ++k) {
        const Belief& faced = (k == 0) ? t.prior : t.public_belief[k - 1];
        if (herd_action_impl(faced, p, scratch).has_value()) {
            r.individual_herd_at = k;
            break;
        }
    }

    int start = n - 1;
    while (start > 0 && t.action[start - 1] == t.action[n - 1]) --start;
    r.herd_at = start;

    std::vector<double> next;
    for (int k = 0; k < n; ++k) {
        if (is_cascade_point_impl(t.public_belief[k], p, tol, scratch, next)) {
            r.cascade_at = k;
            break;
        }
    }
    return r;
}

std::optional<int> first_cascade_step(const ModelParams& p, int horizon, std::uint64_t seed,
                                      double tol) {
    Rng rng(seed);
    detail::FilterScratch scratch;
    int x = rng.categorical(p.prior);
    Belief pub = p.prior;
    Belief eta, next, probe;
    for (int k = 0; k < horizon; ++k) {
        x = rng.categorical_row(&p.transition.data[static_cast<std::size_t>(x) * p.states],
                                p.states);
        const int y = rng.categorical_row(
            &p.obs_likelihood.data[static_cast<std::size_t>(x) * p.observations],
            p.observations);
        const double eta_norm = detail::hmm_step(pub, y, p, scratch, eta);
        if (eta_norm <= 0.0)
            throw ZeroLikelihoodError("observation has zero likelihood under the predicted belief");
        const int a = p.observation_revealing ? y : myopic_action(eta, p.costs);
        const double sigma = detail::social_step(pub, a, p, scratch, next);
        if (sigma <= 0.0)
            throw ZeroProbabilityActionError("action has zero probability at this public belief");
        pub = next;
        if (is_cascade_point_impl(pub, p, tol, scratch, probe)) return k;
    }
    return std::nullopt;
}

std::vector<HerdInterval> herd_region_boundaries(const ModelParams& p, int grid_size) {
    if (p.states != 2)
        throw UnsupportedDimensionError("herd region scan requires a two-state model");
    if (grid_size < 2) throw ValidationError({"grid_size must be at least 2"});

    detail::FilterScratch scratch;
    const int G = grid_size;
    std::vector<int> label(G, -1);
    Belief pub(2);
    for (int g = 0; g < G; ++g) {
        const double pi2 = static_cast<double>(g) / (G - 1);
        pub[0] = 1.0 - pi2;
        pub[1] = pi2;
        if (auto a = herd_action_impl(pub, p, scratch)) label[g] = *a;
    }

    auto point = [G](int g) { return static_cast<double>(g) / (G - 1); };
    std::vector<HerdInterval> out;
    int g = 0;
    while (g < G) {
        if (label[g] < 0) {
            ++g;
            continue;
        }
        int h = g;
        while (h + 1 < G && label[h + 1] == label[g]) ++h;
        HerdInterval iv;
        iv.action = label[g];
        iv.lo_index = g;
        iv.hi_index = h;
        iv.lo = (g == 0) ? 0.0 : 0.5 * (point(g - 1) + point(g));
        iv.hi = (h == G - 1) ? 1.0 : 0.5 * (point(h) + point(h + 1));
        out.push_back(iv);
        g = h + 1;
    }
    return out;
}

}  // namespace socialsim
