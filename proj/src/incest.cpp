#include "socialsim/incest.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "socialsim/errors.hpp"

namespace socialsim {

namespace {

std::string node_msg(const std::string& before, int value, const std::string& after = "") {
    return before + std::to_string(value) + after;
}

void require_reputation_model(const ModelParams& p) {
    if (!p.transition_is_identity())
        throw ModelError("reputation protocol requires an identity transition");
    if (!p.obs_likelihood_strictly_positive())
        throw ModelError("reputation protocol requires strictly positive obs_likelihood");
}

}  // namespace

int node_index(int agent, int epoch, int agent_count) {
    if (agent < 1 || agent > agent_count)
        throw InvalidAgentError(node_msg("agent ", agent, " out of range 1.." + std::to_string(agent_count)));
    if (epoch < 1) throw InvalidAgentError("epoch must be at least 1");
    return agent + agent_count * (epoch - 1);
}

InformationFlowGraph::InformationFlowGraph(int agent_count, int node_count)
    : agents_(agent_count), nodes_(node_count),
      adj_(static_cast<std::size_t>(node_count) * node_count, 0) {
    if (agent_count < 1) throw InvalidAgentError("agent count must be at least 1");
    if (node_count < 1) throw ValidationError({"node count must be at least 1"});
}

void InformationFlowGraph::add_edge(int from, int to) {
    if (from < 1 || to < 1 || from > nodes_ || to > nodes_)
        throw CausalityViolationError(node_msg("edge (", from, ", " + std::to_string(to) + ") is out of range"));
    if (from >= to)
        throw CausalityViolationError(node_msg(
            "edge (", from, ", " + std::to_string(to) + ") does not point forward in time"));
    adj_[static_cast<std::size_t>(from - 1) * nodes_ + (to - 1)] = 1;
}

bool InformationFlowGraph::has_edge(int from, int to) const {
    if (from < 1 || to < 1 || from > nodes_ || to > nodes_) return false;
    return adj_[static_cast<std::size_t>(from - 1) * nodes_ + (to - 1)] != 0;
}

InformationFlowGraph parse_graph_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open graph file: " + path);

    std::string line;
    int lineno = 0;
    int agents = -1, nodes = -1;
    std::optional<InformationFlowGraph> graph;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        if (!graph) {
            std::string s_tok, n_tok;
            if (!(ls >> s_tok)) continue;  // blank line before header
            if (!(ls >> n_tok) || s_tok.rfind("S=", 0) != 0 || n_tok.rfind("N=", 0) != 0)
                throw ParseError(node_msg("graph header must be \"S=<agents> N=<nodes>\" (line ",
                                          lineno, ")"));
            try {
                agents = std::stoi(s_tok.substr(2));
                nodes = std::stoi(n_tok.substr(2));
            } catch (const std::exception&) {
                throw ParseError(node_msg("bad graph header values (line ", lineno, ")"));
            }
            graph.emplace(agents, nodes);
            continue;
        }
        int from, to;
        if (!(ls >> from)) continue;  // blank or comment-only line
        if (!(ls >> to))
            throw ParseError(node_msg("expected \"m n\" edge pair (line ", lineno, ")"));
        std::string extra;
        if (ls >> extra)
            throw ParseError(node_msg("trailing tokens after edge pair (line ", lineno, ")"));
        graph->add_edge(from, to);
    }
    if (!graph) throw ParseError("graph file has no header line: " + path);
    return *graph;
}

bool ClosureView::reaches(int from, int to) const {
    return closure_[static_cast<std::size_t>(from - 1) * nodes_ + (to - 1)] != 0;
}

const std::vector<int>& ClosureView::single_hop(int node) const {
    return single_hop_[node - 1];
}

const std::vector<int>& ClosureView::multi_hop(int node) const {
    return multi_hop_[node - 1];
}

ClosureView transitive_closure(const InformationFlowGraph& g) {
    const int n = g.node_count();
    ClosureView view;
    view.nodes_ = n;
    view.closure_.assign(static_cast<std::size_t>(n) * n, 0);

    // Reachability route: nodes are already topologically ordered, so a
    // single reverse sweep accumulates each node's descendants.
    for (int from = n; from >= 1; --from) {
        auto* row = &view.closure_[static_cast<std::size_t>(from - 1) * n];
        row[from - 1] = 1;
        for (int to = from + 1; to <= n; ++to) {
            if (!g.has_edge(from, to)) continue;
            const auto* trow = &view.closure_[static_cast<std::size_t>(to - 1) * n];
            for (int m = to; m <= n; ++m) row[m - 1] |= trow[m - 1];
        }
    }

    // Verification route: (I - A) M = I solved by exact integer forward
    // substitution; M counts directed paths, so sgn(M) must equal the
    // reachability closure entrywise.
    std::vector<long long> paths(static_cast<std::size_t>(n) * n, 0);
    for (int from = n; from >= 1; --from) {
        auto* row = &paths[static_cast<std::size_t>(from - 1) * n];
        row[from - 1] = 1;
        for (int to = from + 1; to <= n; ++to) {
            if (!g.has_edge(from, to)) continue;
            const auto* trow = &paths[static_cast<std::size_t>(to - 1) * n];
            for (int m = to; m <= n; ++m) row[m - 1] += trow[m - 1];
        }
    }
    for (std::size_t i = 0; i < paths.size(); ++i) {
        const std::uint8_t sign = paths[i] > 0 ? 1 : 0;
        if (sign != view.closure_[i])
            throw ModelError("transitive closure verification failed");
    }

    view.single_hop_.resize(n);
    view.multi_hop_.resize(n);
    for (int node = 1; node <= n; ++node) {
        for (int m = 1; m < node; ++m) {
            if (g.has_edge(m, node)) view.single_hop_[node - 1].push_back(m);
            if (view.reaches(m, node)) view.multi_hop_[node - 1].push_back(m);
        }
    }
    return view;
}

FusionWeights fusion_weights(const ClosureView& c, int node) {
    if (node < 1 || node > c.node_count())
        throw InvalidAgentError(node_msg("node ", node, " out of range 1.." + std::to_string(c.node_count())));
    FusionWeights w;
    w.node = node;
    const int m = node - 1;
    w.weights.assign(m, 0);
    // Back substitution of T_{n-1} w = t_n; T is unit upper triangular, so
    // every weight is an exact integer.
    for (int i = m; i >= 1; --i) {
        long long v = c.reaches(i, node) ? 1 : 0;
        for (int j = i + 1; j <= m; ++j)
            if (c.reaches(i, j)) v -= w.weights[j - 1];
        w.weights[i - 1] = v;
    }
    return w;
}

AchievabilityResult achievability(const InformationFlowGraph& g, const ClosureView& c, int node) {
    const FusionWeights w = fusion_weights(c, node);
    AchievabilityResult res;
    for (int j = 1; j < node; ++j) {
        if (w.weights[j - 1] != 0 && !g.has_edge(j, node)) res.violating.push_back(j);
    }
    res.ok = res.violating.empty();
    return res;
}

Belief fuse_fair(const LogBeliefLedger& ledger, const FusionWeights& w,
                 const std::vector<int>& received) {
    const int X = static_cast<int>(ledger.prior_log.size());
    std::vector<double> acc = ledger.prior_log;
    for (int j = 1; j <= static_cast<int>(w.weights.size()); ++j) {
        const long long wj = w.weights[j - 1];
        if (wj == 0) continue;
        if (std::find(received.begin(), received.end(), j) == received.end())
            throw MissingBeliefError(node_msg("node ", w.node,
                                              " needs the estimate of node " + std::to_string(j) +
                                              ", which it never received"));
        const auto it = ledger.contributions.find(j);
        if (it == ledger.contributions.end())
            throw MissingBeliefError(node_msg("ledger has no entry for node ", j));
        for (int i = 0; i < X; ++i) acc[i] += static_cast<double>(wj) * it->second[i];
    }
    const double peak = *std::max_element(acc.begin(), acc.end());
    Belief out(X);
    for (int i = 0; i < X; ++i) out[i] = std::exp(acc[i] - peak);
    return normalized(std::move(out));
}

Belief fuse_naive(const std::vector<Belief>& received) {
    if (received.empty()) throw MissingBeliefError("naive fusion needs at least one belief");
    Belief out(received.front().size(), 0.0);
    for (const auto& b : received) {
        if (b.size() != out.size()) throw ShapeMismatchError("beliefs of unequal length");
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += b[i];
    }
    return normalized(std::move(out));
}

ReputationRun run_reputation_protocol(const InformationFlowGraph& g, const ModelParams& p,
                                      std::uint64_t seed, FusionMode mode) {
    require_reputation_model(p);

    const ClosureView closure = transitive_closure(g);
    const int N = g.node_count();

    ReputationRun run;
    Rng rng(seed);
    run.true_state = rng.categorical(p.prior);

    LogBeliefLedger ledger;
    ledger.prior_log.resize(p.states);
    for (int i = 0; i < p.states; ++i) ledger.prior_log[i] = std::log(p.prior[i]);

    std::vector<Belief> public_beliefs(N + 1);
    detail::FilterScratch scratch;

    for (int n = 1; n <= N; ++n) {
        FusionWeights w = fusion_weights(closure, n);
        const auto& hops = closure.single_hop(n);

        Belief fused;
        if (mode == FusionMode::fair) {
            const auto reach = achievability(g, closure, n);
            if (!reach.ok)
                throw NotAchievableError(
                    node_msg("node ", n, " is not achievable (" +
                             std::to_string(reach.violating.size()) + " violating ancestors)"),
                    reach.violating);
            fused = fuse_fair(ledger, w, hops);
        } else {
            if (hops.empty()) {
                fused = p.prior;
            } else {
                std::vector<Belief> received;
                received.reserve(hops.size());
                for (int m : hops) received.push_back(public_beliefs[m]);
                fused = fuse_naive(received);
            }
        }

        const int y = rng.categorical_row(
            &p.obs_likelihood.data[static_cast<std::size_t>(run.true_state) * p.observations],
            p.observations);
        Belief eta = hmm_filter(fused, y, p);
        const int a = p.observation_revealing ? y : myopic_action(eta, p.costs);
        const FilterResult post = social_learning_filter(fused, a, p);

        // Ledger update: the node's relative log contribution is the fused
        // combination it acted on plus the log-likelihood of its action.
        std::vector<double> contrib(p.states, 0.0);
        for (int j = 1; j < n; ++j) {
            const long long wj = w.weights[j - 1];
            if (wj == 0) continue;
            const auto& lj = ledger.contributions.at(j);
            for (int i = 0; i < p.states; ++i) contrib[i] += static_cast<double>(wj) * lj[i];
        }
        const std::vector<double> lik = action_likelihood(fused, a, p);
        for (int i = 0; i < p.states; ++i) contrib[i] += std::log(lik[i]);
        ledger.contributions[n] = std::move(contrib);

        public_beliefs[n] = post.posterior;

        NodeRecord rec;
        rec.node = n;
        rec.agent = g.agent_of(n);
        rec.epoch = g.epoch_of(n);
        rec.fused = std::move(fused);
        rec.observation = y;
        rec.private_belief = std::move(eta);
        rec.action = a;
        rec.public_after = post.posterior;
        run.nodes.push_back(std::move(rec));
        if (n >= 2) run.weights.push_back(std::move(w));
    }
    return run;
}

namespace {

// Shared recursion for the oracle: reconstructs the belief each ancestor
// faced, in the same fusion mode that generated the recorded actions.
class OracleContext {
  public:
    OracleContext(const ClosureView& c, const ModelParams& p,
                  const std::map<int, int>& actions, FusionMode mode)
        : c_(c), p_(p), actions_(actions), mode_(mode) {}

    // Belief node `n` acts on, given the recorded actions of its ancestors.
    const Belief& faced(int n) {
        auto it = faced_.find(n);
        if (it != faced_.end()) return it->second;
        Belief b = (mode_ == FusionMode::fair) ? rate(n) : naive_faced(n);
        return faced_.emplace(n, std::move(b)).first->second;
    }

    // Administrator's belief after node n's recorded action (naive mode).
    const Belief& after(int n) {
        auto it = after_.find(n);
        if (it != after_.end()) return it->second;
        Belief b = social_learning_filter(faced(n), recorded(n), p_).posterior;
        return after_.emplace(n, std::move(b)).first->second;
    }

    // Enumeration rating: P(x | recorded actions of F_n).
    Belief rate(int n) {
        const auto& F = c_.multi_hop(n);
        const int m = static_cast<int>(F.size());
        double tuples = 1.0;
        for (int i = 0; i < m; ++i) {
            tuples *= p_.observations;
            if (tuples > 4096.0)
                throw TooLargeError("ancestor set too large for exact enumeration");
        }

        Belief mass(p_.states, 0.0);
        std::vector<int> obs(m, 0);
        while (true) {
            bool consistent = true;
            for (int i = 0; i < m && consistent; ++i) {
                const int node = F[i];
                const Belief eta = hmm_filter(faced(node), obs[i], p_);
                const int a = p_.observation_revealing ? obs[i] : myopic_action(eta, p_.costs);
                consistent = (a == recorded(node));
            }
            if (consistent) {
                for (int x = 0; x < p_.states; ++x) {
                    double w = p_.prior[x];
                    for (int i = 0; i < m; ++i) w *= p_.obs_likelihood(x, obs[i]);
                    mass[x] += w;
                }
            }
            int pos = m - 1;
            while (pos >= 0 && ++obs[pos] == p_.observations) obs[pos--] = 0;
            if (pos < 0) break;
        }
        double total = 0.0;
        for (double v : mass) total += v;
        if (total <= 0.0)
            throw ZeroProbabilityActionError("recorded actions are inconsistent with the model");
        for (double& v : mass) v /= total;
        return mass;
    }

  private:
    int recorded(int n) const {
        const auto it = actions_.find(n);
        if (it == actions_.end())
            throw MissingBeliefError(node_msg("no recorded action for node ", n));
        return it->second;
    }

    Belief naive_faced(int n) {
        const auto& hops = c_.single_hop(n);
        if (hops.empty()) return p_.prior;
        std::vector<Belief> received;
        received.reserve(hops.size());
        for (int m : hops) received.push_back(after(m));
        return fuse_naive(received);
    }

    const ClosureView& c_;
    const ModelParams& p_;
    const std::map<int, int>& actions_;
    FusionMode mode_;
    std::map<int, Belief> faced_;
    std::map<int, Belief> after_;
};

}  // namespace

Belief oracle_fair_rating(const InformationFlowGraph& g, int node, const ModelParams& p,
                          const std::map<int, int>& actions, FusionMode context) {
    require_reputation_model(p);
    const ClosureView closure = transitive_closure(g);
    OracleContext ctx(closure, p, actions, context);
    return ctx.rate(node);
}

InformationFlowGraph make_random_achievable_graph(int agent_count, int node_count,
                                                  double edge_prob, Rng& rng) {
    InformationFlowGraph g(agent_count, node_count);
    for (int from = 1; from < node_count; ++from)
        for (int to = from + 1; to <= node_count; ++to)
            if (rng.uniform01() < edge_prob) g.add_edge(from, to);

    // Repair pass: adding direct edges into n never disturbs columns < n, so
    // one ascending sweep with a local fixed point suffices.
    for (int n = 2; n <= node_count; ++n) {
        while (true) {
            const ClosureView c = transitive_closure(g);
            const auto res = achievability(g, c, n);
            if (res.ok) break;
            for (int j : res.violating) g.add_edge(j, n);
        }
    }
    return g;
}

}  // namespace socialsim
