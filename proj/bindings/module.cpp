#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "socialsim/config.hpp"
#include "socialsim/detection.hpp"
#include "socialsim/learning.hpp"
#include "socialsim/scenario.hpp"
#include "socialsim/version.hpp"

namespace py = pybind11;
using namespace socialsim;

PYBIND11_MODULE(_core, m) {
    m.doc() = "Multi-agent Bayesian social learning simulator";
    m.attr("__version__") = kVersion;

    py::register_exception<ConfigError>(m, "ConfigError");
    py::register_exception<ModelError>(m, "ModelError");

    py::class_<Matrix>(m, "Matrix")
        .def(py::init([](const std::vector<std::vector<double>>& rows) {
                 return Matrix::from_rows(rows);
             }),
             py::arg("rows"))
        .def_readonly("rows", &Matrix::rows)
        .def_readonly("cols", &Matrix::cols)
        .def("__getitem__",
             [](const Matrix& a, std::pair<int, int> rc) {
                 if (rc.first < 0 || rc.first >= a.rows || rc.second < 0 ||
                     rc.second >= a.cols) {
                     throw py::index_error();
                 }
                 return a(rc.first, rc.second);
             })
        .def("tolist", [](const Matrix& a) {
            std::vector<std::vector<double>> out(a.rows);
            for (int r = 0; r < a.rows; ++r) {
                out[r].assign(a.data.begin() + static_cast<std::ptrdiff_t>(r) * a.cols,
                              a.data.begin() + static_cast<std::ptrdiff_t>(r + 1) * a.cols);
            }
            return out;
        });

    py::class_<ModelParams>(m, "ModelParams")
        .def_static(
            "make",
            [](const std::vector<std::vector<double>>& transition,
               const std::vector<std::vector<double>>& obs_likelihood,
               const std::vector<std::vector<double>>& costs, const Belief& prior,
               bool observation_revealing) {
                return ModelParams::make(Matrix::from_rows(transition),
                                         Matrix::from_rows(obs_likelihood),
                                         Matrix::from_rows(costs), prior,
                                         observation_revealing);
            },
            py::arg("transition"), py::arg("obs_likelihood"), py::arg("costs"),
            py::arg("prior"), py::arg("observation_revealing") = false)
        .def_readonly("states", &ModelParams::states)
        .def_readonly("observations", &ModelParams::observations)
        .def_readonly("actions", &ModelParams::actions)
        .def_readonly("transition", &ModelParams::transition)
        .def_readonly("obs_likelihood", &ModelParams::obs_likelihood)
        .def_readonly("costs", &ModelParams::costs)
        .def_readonly("prior", &ModelParams::prior)
        .def_readonly("observation_revealing", &ModelParams::observation_revealing);

    m.def("hmm_filter", &hmm_filter, py::arg("prior"), py::arg("obs"), py::arg("params"));
    m.def(
        "myopic_action",
        [](const Belief& b, const std::vector<std::vector<double>>& costs) {
            return myopic_action(b, Matrix::from_rows(costs));
        },
        py::arg("belief"), py::arg("costs"));
    m.def("action_likelihood", &action_likelihood, py::arg("public_belief"),
          py::arg("action"), py::arg("params"));
    m.def(
        "social_learning_filter",
        [](const Belief& pub, int action, const ModelParams& p) {
            FilterResult r = social_learning_filter(pub, action, p);
            return py::make_tuple(r.posterior, r.normalizer);
        },
        py::arg("public_belief"), py::arg("action"), py::arg("params"));

    py::class_<LearningTrace>(m, "LearningTrace")
        .def_readonly("prior", &LearningTrace::prior)
        .def_readonly("state", &LearningTrace::state)
        .def_readonly("observation", &LearningTrace::observation)
        .def_readonly("action", &LearningTrace::action)
        .def_readonly("private_belief", &LearningTrace::private_belief)
        .def_readonly("public_belief", &LearningTrace::public_belief)
        .def("__len__", &LearningTrace::size);

    py::class_<HerdReport>(m, "HerdReport")
        .def_readonly("individual_herd_at", &HerdReport::individual_herd_at)
        .def_readonly("herd_at", &HerdReport::herd_at)
        .def_readonly("cascade_at", &HerdReport::cascade_at);

    m.def("run_protocol", &run_protocol, py::arg("params"), py::arg("horizon"),
          py::arg("seed"));
    m.def("analyze_trace", &analyze_trace, py::arg("trace"), py::arg("params"),
          py::arg("tol") = 1e-12);
    m.def("is_cascade_point", &is_cascade_point, py::arg("public_belief"),
          py::arg("params"), py::arg("tol") = 1e-12);
    m.def("first_cascade_step", &first_cascade_step, py::arg("params"), py::arg("horizon"),
          py::arg("seed"), py::arg("tol") = 1e-12);

    py::class_<HerdInterval>(m, "HerdInterval")
        .def_readonly("action", &HerdInterval::action)
        .def_readonly("lo", &HerdInterval::lo)
        .def_readonly("hi", &HerdInterval::hi);
    m.def("herd_region_boundaries", &herd_region_boundaries, py::arg("params"),
          py::arg("grid_size"));

    py::class_<InformationFlowGraph>(m, "InformationFlowGraph")
        .def(py::init<int, int>(), py::arg("agent_count"), py::arg("node_count"))
        .def("add_edge", &InformationFlowGraph::add_edge, py::arg("from_node"),
             py::arg("to_node"))
        .def("has_edge", &InformationFlowGraph::has_edge, py::arg("from_node"),
             py::arg("to_node"))
        .def("agent_count", &InformationFlowGraph::agent_count)
        .def("node_count", &InformationFlowGraph::node_count);

    m.def("parse_graph_file", &parse_graph_file, py::arg("path"));
    m.def("node_index", &node_index, py::arg("agent"), py::arg("epoch"),
          py::arg("agent_count"));
    m.def(
        "fusion_weights",
        [](const InformationFlowGraph& g, int node) {
            return fusion_weights(transitive_closure(g), node).weights;
        },
        py::arg("graph"), py::arg("node"));
    m.def(
        "achievability",
        [](const InformationFlowGraph& g, int node) {
            AchievabilityResult r = achievability(g, transitive_closure(g), node);
            return py::make_tuple(r.ok, r.violating);
        },
        py::arg("graph"), py::arg("node"));

    py::enum_<FusionMode>(m, "FusionMode")
        .value("fair", FusionMode::fair)
        .value("naive", FusionMode::naive);

    py::class_<NodeRecord>(m, "NodeRecord")
        .def_readonly("node", &NodeRecord::node)
        .def_readonly("agent", &NodeRecord::agent)
        .def_readonly("epoch", &NodeRecord::epoch)
        .def_readonly("fused", &NodeRecord::fused)
        .def_readonly("observation", &NodeRecord::observation)
        .def_readonly("private_belief", &NodeRecord::private_belief)
        .def_readonly("action", &NodeRecord::action)
        .def_readonly("public_after", &NodeRecord::public_after);

    py::class_<FusionWeights>(m, "FusionWeights")
        .def_readonly("node", &FusionWeights::node)
        .def_readonly("weights", &FusionWeights::weights);

    py::class_<ReputationRun>(m, "ReputationRun")
        .def_readonly("true_state", &ReputationRun::true_state)
        .def_readonly("nodes", &ReputationRun::nodes)
        .def_readonly("weights", &ReputationRun::weights);

    m.def("run_reputation_protocol", &run_reputation_protocol, py::arg("graph"),
          py::arg("params"), py::arg("seed"), py::arg("mode") = FusionMode::fair);
    m.def("oracle_fair_rating", &oracle_fair_rating, py::arg("graph"), py::arg("node"),
          py::arg("params"), py::arg("actions"), py::arg("context") = FusionMode::fair);

    py::class_<DetectionCosts>(m, "DetectionCosts")
        .def(py::init([](double delay, double false_alarm) {
                 DetectionCosts c{delay, false_alarm};
                 auto issues = c.validate();
                 if (!issues.empty()) throw ValidationError(issues);
                 return c;
             }),
             py::arg("delay"), py::arg("false_alarm"))
        .def_readonly("delay", &DetectionCosts::delay)
        .def_readonly("false_alarm", &DetectionCosts::false_alarm);

    py::class_<PolicyGrid>(m, "PolicyGrid")
        .def_readonly("grid_size", &PolicyGrid::grid_size)
        .def_readonly("decision", &PolicyGrid::decision)
        .def_readonly("value", &PolicyGrid::value)
        .def("point", &PolicyGrid::point, py::arg("g"));

    m.def("solve_classical_qd", &solve_classical_qd, py::arg("params"), py::arg("costs"),
          py::arg("grid_size"), py::arg("max_iters"), py::arg("tol"));
    m.def("solve_social_qd", &solve_social_qd, py::arg("params"), py::arg("costs"),
          py::arg("grid_size"), py::arg("max_iters"), py::arg("tol"));
    m.def("count_policy_switches",
          py::overload_cast<const PolicyGrid&>(&count_policy_switches), py::arg("policy"));
    m.def("count_directional_switches",
          py::overload_cast<const PolicyGrid&, int, int>(&count_policy_switches),
          py::arg("policy"), py::arg("from_decision"), py::arg("to_decision"));

    py::class_<StoppingOutcome>(m, "StoppingOutcome")
        .def_readonly("mean_cost", &StoppingOutcome::mean_cost)
        .def_readonly("mean_delay", &StoppingOutcome::mean_delay)
        .def_readonly("false_alarm_rate", &StoppingOutcome::false_alarm_rate);

    m.def("simulate_detection", &simulate_detection, py::arg("policy"), py::arg("params"),
          py::arg("costs"), py::arg("seed"), py::arg("runs"), py::arg("horizon"));
    m.def("solve_privacy_stopping", &solve_privacy_stopping, py::arg("params"),
          py::arg("discount"), py::arg("target_state"), py::arg("grid_size"),
          py::arg("max_iters"), py::arg("tol"));

    py::class_<GameSpec>(m, "GameSpec")
        .def_static("make", &GameSpec::make, py::arg("action_counts"),
                    py::arg("utilities"))
        .def_readonly("player_count", &GameSpec::player_count)
        .def_readonly("action_counts", &GameSpec::action_counts)
        .def("profile_index", &GameSpec::profile_index, py::arg("profile"))
        .def("utility", &GameSpec::utility, py::arg("player"), py::arg("profile"));

    py::class_<RegretState>(m, "RegretState")
        .def_readonly("regret", &RegretState::regret)
        .def_readonly("last_action", &RegretState::last_action)
        .def_readonly("C", &RegretState::C);

    py::class_<EmpiricalDistribution>(m, "EmpiricalDistribution")
        .def_readonly("counts", &EmpiricalDistribution::counts)
        .def_readonly("steps", &EmpiricalDistribution::steps)
        .def("probabilities", &EmpiricalDistribution::probabilities);

    py::class_<CheckpointStat>(m, "CheckpointStat")
        .def_readonly("step", &CheckpointStat::step)
        .def_readonly("max_positive_regret", &CheckpointStat::max_positive_regret)
        .def_readonly("ce_violation", &CheckpointStat::ce_violation);

    py::class_<GameRunResult>(m, "GameRunResult")
        .def_readonly("distribution", &GameRunResult::distribution)
        .def_readonly("regrets", &GameRunResult::regrets)
        .def_readonly("actions", &GameRunResult::actions)
        .def_readonly("checkpoints", &GameRunResult::checkpoints);

    m.def("run_repeated_game", &run_repeated_game, py::arg("game"), py::arg("steps"),
          py::arg("seed"), py::arg("normalizers") = std::vector<double>{},
          py::arg("checkpoints") = std::vector<long long>{});

    py::class_<CeViolation>(m, "CeViolation")
        .def_readonly("value", &CeViolation::value)
        .def_readonly("player", &CeViolation::player)
        .def_readonly("from_action", &CeViolation::from_action)
        .def_readonly("to_action", &CeViolation::to_action);
    m.def("ce_violation", &ce_violation, py::arg("distribution"), py::arg("game"));

    py::class_<RunManifest>(m, "RunManifest")
        .def_readonly("scenario", &RunManifest::scenario)
        .def_readonly("seed", &RunManifest::seed)
        .def_readonly("engine_version", &RunManifest::engine_version)
        .def_readonly("outputs", &RunManifest::outputs)
        .def_readonly("duration_ms", &RunManifest::duration_ms)
        .def_readonly("manifest_path", &RunManifest::manifest_path);

    m.def(
        "run_scenario_file",
        [](const std::string& config_path, std::optional<std::uint64_t> seed,
           std::optional<std::string> out_dir) {
            ScenarioConfig cfg = parse_config(config_path);
            if (seed) cfg.seed = *seed;
            if (out_dir) cfg.out_dir = *out_dir;
            return run_scenario(cfg);
        },
        py::arg("config_path"), py::arg("seed") = std::nullopt,
        py::arg("out_dir") = std::nullopt);
}
