#include "socialsim/config.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

namespace socialsim {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_ws(const std::string& s) {
    std::istringstream in(s);
    std::vector<std::string> out;
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

std::vector<std::string> split_on(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

template <typename T>
bool parse_number(const std::string& t, T& out) {
    const char* b = t.data();
    const char* e = b + t.size();
    auto res = std::from_chars(b, e, out);
    return res.ec == std::errc() && res.ptr == e;
}

bool is_positive_integer(const std::string& s) {
    if (s.empty()) return false;
    for (char c : s) {
        if (c < '0' || c > '9') return false;
    }
    return s[0] != '0';
}

bool known_key(const std::string& k) {
    static const std::set<std::string> exact = {
        "scenario",
        "seed",
        "out",
        "model.transition",
        "model.obs_likelihood",
        "model.costs",
        "model.prior",
        "model.observation_revealing",
        "run.horizon",
        "graph.file",
        "fusion.mode",
        "detect.delay_cost",
        "detect.false_alarm_cost",
        "solver.grid_size",
        "solver.max_iters",
        "solver.tolerance",
        "privacy.discount",
        "privacy.target_state",
        "game.players",
        "game.actions",
        "game.steps",
        "game.normalizer",
        "game.checkpoints",
    };
    if (exact.count(k)) return true;
    const std::string prefix = "game.utility.";
    if (k.size() > prefix.size() && k.compare(0, prefix.size(), prefix) == 0) {
        return is_positive_integer(k.substr(prefix.size()));
    }
    return false;
}

struct Entry {
    std::string key;
    std::string value;
    int line = 0;
    bool used = false;
};

class KvStore {
public:
    explicit KvStore(const std::string& path) : path_(path) {
        std::ifstream in(path);
        if (!in) {
            throw ParseError(path + ": cannot open file");
        }
        std::string raw;
        int line_no = 0;
        while (std::getline(in, raw)) {
            ++line_no;
            std::size_t hash = raw.find('#');
            if (hash != std::string::npos) raw.erase(hash);
            std::string line = trim(raw);
            if (line.empty()) continue;
            std::size_t eq = line.find('=');
            if (eq == std::string::npos) {
                fail_line(line_no, "expected key = value");
            }
            Entry e;
            e.key = trim(line.substr(0, eq));
            e.value = trim(line.substr(eq + 1));
            e.line = line_no;
            if (e.key.empty()) fail_line(line_no, "empty key");
            if (e.value.empty()) fail_line(line_no, "empty value for key " + e.key);
            if (!known_key(e.key)) fail_line(line_no, "unknown key " + e.key);
            for (const auto& prev : entries_) {
                if (prev.key == e.key) {
                    fail_line(line_no, "duplicate key " + e.key);
                }
            }
            entries_.push_back(std::move(e));
        }
    }

    bool has(const std::string& key) const {
        return std::any_of(entries_.begin(), entries_.end(),
                           [&](const Entry& e) { return e.key == key; });
    }

    std::string get_string(const std::string& key) { return use(key).value; }

    std::uint64_t get_u64(const std::string& key) {
        Entry& e = use(key);
        std::uint64_t v = 0;
        if (!parse_number(e.value, v)) fail(e, "expected a nonnegative integer");
        return v;
    }

    long long get_ll(const std::string& key) {
        Entry& e = use(key);
        long long v = 0;
        if (!parse_number(e.value, v)) fail(e, "expected an integer");
        return v;
    }

    int get_int(const std::string& key) {
        long long v = get_ll(key);
        if (v < -(1LL << 31) || v > (1LL << 31) - 1) {
            fail(*find(key), "integer out of range");
        }
        return static_cast<int>(v);
    }

    double get_double(const std::string& key) {
        Entry& e = use(key);
        double v = 0.0;
        if (!parse_number(e.value, v)) fail(e, "expected a real number");
        return v;
    }

    bool get_bool(const std::string& key) {
        Entry& e = use(key);
        if (e.value == "true") return true;
        if (e.value == "false") return false;
        fail(e, "expected true or false");
    }

    std::vector<double> get_vector(const std::string& key) {
        Entry& e = use(key);
        std::vector<double> out;
        for (const auto& tok : split_ws(e.value)) {
            double v = 0.0;
            if (!parse_number(tok, v)) fail(e, "expected a real number, got '" + tok + "'");
            out.push_back(v);
        }
        return out;
    }

    std::vector<long long> get_vector_ll(const std::string& key) {
        Entry& e = use(key);
        std::vector<long long> out;
        for (const auto& tok : split_ws(e.value)) {
            long long v = 0;
            if (!parse_number(tok, v)) fail(e, "expected an integer, got '" + tok + "'");
            out.push_back(v);
        }
        return out;
    }

    std::vector<int> get_vector_int(const std::string& key) {
        std::vector<int> out;
        for (long long v : get_vector_ll(key)) {
            if (v < -(1LL << 31) || v > (1LL << 31) - 1) {
                fail(*find(key), "integer out of range");
            }
            out.push_back(static_cast<int>(v));
        }
        return out;
    }

    Matrix get_matrix(const std::string& key) {
        Entry& e = use(key);
        std::vector<std::vector<double>> rows;
        for (const auto& row_text : split_on(e.value, ';')) {
            std::vector<double> row;
            for (const auto& tok : split_ws(row_text)) {
                double v = 0.0;
                if (!parse_number(tok, v)) {
                    fail(e, "expected a real number, got '" + tok + "'");
                }
                row.push_back(v);
            }
            if (row.empty()) fail(e, "empty matrix row");
            rows.push_back(std::move(row));
        }
        for (const auto& r : rows) {
            if (r.size() != rows[0].size()) fail(e, "ragged matrix rows");
        }
        return Matrix::from_rows(rows);
    }

    std::vector<std::string> unused_keys() const {
        std::vector<std::string> out;
        for (const auto& e : entries_) {
            if (!e.used) out.push_back(e.key);
        }
        return out;
    }

    std::vector<std::pair<std::string, std::string>> echo() const {
        std::vector<std::pair<std::string, std::string>> out;
        for (const auto& e : entries_) out.emplace_back(e.key, e.value);
        return out;
    }

    const std::string& path() const { return path_; }

    [[noreturn]] void fail_key(const std::string& key, const std::string& msg) {
        fail(*find(key), msg);
    }

private:
    Entry* find(const std::string& key) {
        for (auto& e : entries_) {
            if (e.key == key) return &e;
        }
        return nullptr;
    }

    Entry& use(const std::string& key) {
        Entry* e = find(key);
        if (e == nullptr) {
            throw ParseError(path_ + ": missing key " + key);
        }
        e->used = true;
        return *e;
    }

    [[noreturn]] void fail(const Entry& e, const std::string& msg) const {
        throw ParseError(path_ + ":" + std::to_string(e.line) + ": key " + e.key +
                         ": " + msg);
    }

    [[noreturn]] void fail_line(int line, const std::string& msg) const {
        throw ParseError(path_ + ":" + std::to_string(line) + ": " + msg);
    }

    std::string path_;
    std::vector<Entry> entries_;
};

// Pulls the model matrices if all four keys are present; otherwise records
// the missing keys as issues. Shape and stochasticity problems go through
// ModelParams::make so its messages are reused verbatim.
void load_model(KvStore& kv, ScenarioConfig& cfg, std::vector<std::string>& issues) {
    static const char* kRequired[] = {"model.transition", "model.obs_likelihood",
                                      "model.costs", "model.prior"};
    bool complete = true;
    for (const char* key : kRequired) {
        if (!kv.has(key)) {
            issues.push_back(std::string("missing key ") + key);
            complete = false;
        }
    }
    bool revealing = false;
    if (kv.has("model.observation_revealing")) {
        revealing = kv.get_bool("model.observation_revealing");
    }
    if (!complete) return;
    Matrix transition = kv.get_matrix("model.transition");
    Matrix obs = kv.get_matrix("model.obs_likelihood");
    Matrix costs = kv.get_matrix("model.costs");
    Belief prior = kv.get_vector("model.prior");
    try {
        cfg.model = ModelParams::make(std::move(transition), std::move(obs),
                                      std::move(costs), std::move(prior), revealing);
    } catch (const ValidationError& err) {
        for (const auto& issue : err.issues) {
            issues.push_back("model: " + issue);
        }
    }
}

void load_solver(KvStore& kv, ScenarioConfig& cfg, std::vector<std::string>& issues) {
    if (kv.has("solver.grid_size")) cfg.grid_size = kv.get_int("solver.grid_size");
    if (kv.has("solver.max_iters")) cfg.max_iters = kv.get_int("solver.max_iters");
    if (kv.has("solver.tolerance")) cfg.tolerance = kv.get_double("solver.tolerance");
    if (cfg.grid_size < 2) issues.push_back("solver.grid_size must be at least 2");
    if (cfg.max_iters < 1) issues.push_back("solver.max_iters must be at least 1");
    if (!(cfg.tolerance >= 0.0)) issues.push_back("solver.tolerance must be nonnegative");
}

void load_game(KvStore& kv, ScenarioConfig& cfg, std::vector<std::string>& issues) {
    static const char* kRequired[] = {"game.players", "game.actions", "game.steps"};
    bool complete = true;
    for (const char* key : kRequired) {
        if (!kv.has(key)) {
            issues.push_back(std::string("missing key ") + key);
            complete = false;
        }
    }
    if (!complete) return;
    int players = kv.get_int("game.players");
    if (players < 1) {
        issues.push_back("game.players must be at least 1");
        return;
    }
    std::vector<int> actions = kv.get_vector_int("game.actions");
    if (static_cast<int>(actions.size()) != players) {
        issues.push_back("game.actions lists " + std::to_string(actions.size()) +
                         " counts for " + std::to_string(players) + " players");
        return;
    }
    std::vector<std::vector<double>> utilities;
    bool have_all_tables = true;
    for (int l = 1; l <= players; ++l) {
        std::string key = "game.utility." + std::to_string(l);
        if (!kv.has(key)) {
            issues.push_back("missing key " + key);
            have_all_tables = false;
            continue;
        }
        utilities.push_back(kv.get_vector(key));
    }
    if (!have_all_tables) return;
    try {
        cfg.game = GameSpec::make(std::move(actions), std::move(utilities));
    } catch (const ValidationError& err) {
        for (const auto& issue : err.issues) {
            issues.push_back("game: " + issue);
        }
    }

    cfg.steps = kv.get_ll("game.steps");
    if (cfg.steps < 1) issues.push_back("game.steps must be at least 1");
    if (kv.has("game.normalizer")) {
        cfg.normalizers = kv.get_vector("game.normalizer");
        if (static_cast<int>(cfg.normalizers.size()) != players) {
            issues.push_back("game.normalizer lists " +
                             std::to_string(cfg.normalizers.size()) + " values for " +
                             std::to_string(players) + " players");
        } else {
            for (double c : cfg.normalizers) {
                if (!(c > 0.0)) {
                    issues.push_back("game.normalizer entries must be positive");
                    break;
                }
            }
        }
    }
    if (kv.has("game.checkpoints")) {
        cfg.checkpoints = kv.get_vector_ll("game.checkpoints");
        for (long long c : cfg.checkpoints) {
            if (c < 1 || c > cfg.steps) {
                issues.push_back("game.checkpoints entries must lie in 1..game.steps");
                break;
            }
        }
    }
}

}  // namespace

ScenarioConfig parse_config(const std::string& path) {
    KvStore kv(path);
    std::vector<std::string> issues;

    ScenarioConfig cfg;
    cfg.echo = kv.echo();

    if (!kv.has("scenario")) {
        throw ValidationError({"missing key scenario"});
    }
    cfg.scenario = kv.get_string("scenario");
    static const std::set<std::string> kKinds = {
        "social-learning", "reputation", "qd-classic", "qd-social", "privacy", "game"};
    if (!kKinds.count(cfg.scenario)) {
        kv.fail_key("scenario", "unknown scenario kind '" + cfg.scenario + "'");
    }

    if (kv.has("seed")) cfg.seed = kv.get_u64("seed");
    if (kv.has("out")) cfg.out_dir = kv.get_string("out");

    if (cfg.scenario == "social-learning") {
        load_model(kv, cfg, issues);
        if (!kv.has("run.horizon")) {
            issues.push_back("missing key run.horizon");
        } else {
            cfg.horizon = kv.get_ll("run.horizon");
            if (cfg.horizon < 1) issues.push_back("run.horizon must be at least 1");
        }
    } else if (cfg.scenario == "reputation") {
        load_model(kv, cfg, issues);
        if (cfg.model && !cfg.model->transition_is_identity()) {
            issues.push_back("reputation runs need an identity transition matrix");
        }
        if (cfg.model && !cfg.model->obs_likelihood_strictly_positive()) {
            issues.push_back("reputation runs need strictly positive obs_likelihood");
        }
        if (!kv.has("graph.file")) {
            issues.push_back("missing key graph.file");
        } else {
            std::filesystem::path p = kv.get_string("graph.file");
            if (p.is_relative()) {
                p = std::filesystem::path(path).parent_path() / p;
            }
            cfg.graph_file = p.string();
            if (!std::filesystem::exists(p)) {
                issues.push_back("graph.file " + cfg.graph_file + " does not exist");
            }
        }
        if (kv.has("fusion.mode")) {
            std::string mode = kv.get_string("fusion.mode");
            if (mode == "fair") {
                cfg.fusion_mode = FusionMode::fair;
            } else if (mode == "naive") {
                cfg.fusion_mode = FusionMode::naive;
            } else {
                issues.push_back("fusion.mode must be fair or naive, got '" + mode + "'");
            }
        }
    } else if (cfg.scenario == "qd-classic" || cfg.scenario == "qd-social") {
        load_model(kv, cfg, issues);
        load_solver(kv, cfg, issues);
        static const char* kCostKeys[] = {"detect.delay_cost", "detect.false_alarm_cost"};
        bool have_costs = true;
        for (const char* key : kCostKeys) {
            if (!kv.has(key)) {
                issues.push_back(std::string("missing key ") + key);
                have_costs = false;
            }
        }
        if (have_costs) {
            cfg.detect_costs.delay = kv.get_double("detect.delay_cost");
            cfg.detect_costs.false_alarm = kv.get_double("detect.false_alarm_cost");
            for (const auto& issue : cfg.detect_costs.validate()) {
                issues.push_back("detect: " + issue);
            }
        }
        if (cfg.model) {
            if (cfg.model->states != 2) {
                issues.push_back("quickest detection needs exactly 2 states");
            } else if (cfg.model->transition(0, 0) != 1.0 ||
                       cfg.model->transition(0, 1) != 0.0) {
                issues.push_back("quickest detection needs state 1 absorbing");
            }
        }
    } else if (cfg.scenario == "privacy") {
        load_model(kv, cfg, issues);
        load_solver(kv, cfg, issues);
        if (!kv.has("privacy.discount")) {
            issues.push_back("missing key privacy.discount");
        } else {
            cfg.discount = kv.get_double("privacy.discount");
            if (!(cfg.discount >= 0.0 && cfg.discount < 1.0)) {
                issues.push_back("privacy.discount must lie in [0, 1)");
            }
        }
        if (!kv.has("privacy.target_state")) {
            issues.push_back("missing key privacy.target_state");
        } else {
            int target = kv.get_int("privacy.target_state");
            if (cfg.model && (target < 1 || target > cfg.model->states)) {
                issues.push_back("privacy.target_state must lie in 1.." +
                                 std::to_string(cfg.model->states));
            }
            cfg.target_state = target - 1;
        }
        if (cfg.model) {
            if (cfg.model->states != 2) {
                issues.push_back("privacy stopping needs exactly 2 states");
            }
            if (cfg.model->actions != 2) {
                issues.push_back("privacy stopping needs exactly 2 actions");
            }
            if (!cfg.model->transition_is_identity()) {
                issues.push_back("privacy stopping needs an identity transition matrix");
            }
        }
    } else {  // game
        load_game(kv, cfg, issues);
    }

    for (const auto& key : kv.unused_keys()) {
        issues.push_back("key " + key + " is not used by scenario " + cfg.scenario);
    }
    if (!issues.empty()) {
        throw ValidationError(issues);
    }
    return cfg;
}

}  // namespace socialsim
