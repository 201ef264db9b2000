#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "socialsim/filters.hpp"
#include "socialsim/rng.hpp"

namespace socialsim {

class Rng;

// Node ids in this module are 1-based: node n = agent s acting at epoch k
// maps to n = s + S * (k - 1), so consecutive ids sweep the agents of one
// epoch before moving to the next. States, observations and actions remain
// 0-based as elsewhere.
int node_index(int agent, int epoch, int agent_count);

// Directed acyclic information-flow graph over time-stamped agent nodes.
// Edges always point from a lower to a strictly higher node id, so the
// adjacency matrix is strictly upper triangular.
class InformationFlowGraph {
  public:
    InformationFlowGraph(int agent_count, int node_count);

    // Edge from node `from` to the later node `to`. Throws
    // CausalityViolationError unless 1 <= from < to <= node_count.
    void add_edge(int from, int to);
    bool has_edge(int from, int to) const;

    int agent_count() const { return agents_; }
    int node_count() const { return nodes_; }
    int agent_of(int node) const { return (node - 1) % agents_ + 1; }
    int epoch_of(int node) const { return (node - 1) / agents_ + 1; }

  private:
    int agents_;
    int nodes_;
    std::vector<std::uint8_t> adj_;
};

// Plain-text graph format: a header line "S=<agents> N=<nodes>" followed by
// one "m n" pair per line (an edge from node m to node n), with '#' comments
// and blank lines allowed.
InformationFlowGraph parse_graph_file(const std::string& path);

// Reachability closure with unit diagonal. Computed by breadth-first
// reachability and cross-checked entrywise against sgn((I - A)^-1) evaluated
// in exact integer arithmetic; the two routes must agree.
class ClosureView {
  public:
    int node_count() const { return nodes_; }
    // 1 iff from == to or a directed path from -> to exists.
    bool reaches(int from, int to) const;
    // Single-hop ancestors H_n = {m : A(m, n) = 1}.
    const std::vector<int>& single_hop(int node) const;
    // All ancestors F_n = {m < n : T(m, n) = 1}.
    const std::vector<int>& multi_hop(int node) const;

  private:
    friend ClosureView transitive_closure(const InformationFlowGraph& g);
    int nodes_ = 0;
    std::vector<std::uint8_t> closure_;
    std::vector<std::vector<int>> single_hop_;
    std::vector<std::vector<int>> multi_hop_;
};

ClosureView transitive_closure(const InformationFlowGraph& g);

// Exact integer fusion weights for node n: the solution of
// T_{n-1} w = t_n by back substitution, where t_n is the first n-1 entries
// of column n of the closure. weights[j-1] = w_n(j).
struct FusionWeights {
    int node = 0;
    std::vector<long long> weights;
};

FusionWeights fusion_weights(const ClosureView& c, int node);

// A node is achievable when every nonzero-weight ancestor is also a
// single-hop ancestor, i.e. the exact fusion only needs estimates that
// actually travel over direct edges.
struct AchievabilityResult {
    bool ok = true;
    std::vector<int> violating;  // j with w_n(j) != 0 but no edge (j, n)
};

AchievabilityResult achievability(const InformationFlowGraph& g, const ClosureView& c, int node);

// Per-node log-likelihood contributions relative to the prior. Storing
// l_m = log pi_m - log pi_0 and adding log pi_0 exactly once at fusion time
// keeps the prior counted once even though the weights do not sum to 1.
struct LogBeliefLedger {
    std::vector<double> prior_log;
    std::map<int, std::vector<double>> contributions;
};

// Exact fusion: exp(log pi_0 + sum_m w(m) l_m), normalized. Every node with
// a nonzero weight must be present both in `received` and in the ledger;
// otherwise MissingBeliefError.
Belief fuse_fair(const LogBeliefLedger& ledger, const FusionWeights& w,
                 const std::vector<int>& received);

// Normalized entrywise sum of the received beliefs (the biased baseline).
Belief fuse_naive(const std::vector<Belief>& received);

enum class FusionMode { fair, naive };

struct NodeRecord {
    int node = 0;   // 1-based
    int agent = 0;  // 1-based
    int epoch = 0;  // 1-based
    Belief fused;           // belief the node acts on
    int observation = 0;    // 0-based
    Belief private_belief;  // Bayes update of fused by the observation
    int action = 0;         // 0-based
    Belief public_after;    // administrator's belief after absorbing the action
};

struct ReputationRun {
    int true_state = 0;  // sampled once; the transition is the identity
    std::vector<NodeRecord> nodes;
    std::vector<FusionWeights> weights;  // for nodes 2..N
};

// Runs the reputation protocol over the node schedule. Requires an identity
// transition and strictly positive obs_likelihood. In fair mode every node
// must be achievable (NotAchievableError otherwise) and fusion uses the exact
// weights; in naive mode each node averages the beliefs of its single-hop
// ancestors. Nodes with no ancestors act on the prior.
ReputationRun run_reputation_protocol(const InformationFlowGraph& g, const ModelParams& p,
                                      std::uint64_t seed, FusionMode mode);

// Brute-force fair rating of `node`: P(x | recorded actions of its ancestor
// set), obtained by enumerating every observation tuple over the ancestors
// and keeping the tuples that reproduce the recorded actions under the
// protocol's decision rules. `actions` maps node id -> 0-based action and
// must cover the ancestor set. `context` selects how each ancestor's faced
// belief is reconstructed and must match how the actions were generated.
// Guard: Y^{|F_n|} <= 4096 (TooLargeError beyond).
Belief oracle_fair_rating(const InformationFlowGraph& g, int node, const ModelParams& p,
                          const std::map<int, int>& actions,
                          FusionMode context = FusionMode::fair);

// Random DAG with every node achievable: draws edges independently, then
// repairs node by node, adding the missing direct edges for nonzero-weight
// ancestors (which only ever extends single-hop sets, so earlier nodes stay
// achievable). Deterministic per rng state.
InformationFlowGraph make_random_achievable_graph(int agent_count, int node_count,
                                                  double edge_prob, Rng& rng);

}  // namespace socialsim
