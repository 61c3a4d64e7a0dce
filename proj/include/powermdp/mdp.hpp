#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "powermdp/errors.hpp"

namespace powermdp {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

inline constexpr double kRowSumTol = 1e-9;
inline constexpr double kOptTol = 1e-9;        // default Q-gap tolerance
inline constexpr double kActionEquivTol = 1e-12;

/// Finite rewardless MDP <S, A, T>. Actions may be available at a subset of
/// states; every state needs at least one. Transition rows sum to 1.
class RewardlessMdp {
public:
    RewardlessMdp(std::vector<std::string> state_names,
                  std::vector<std::string> action_names)
        : state_names_(std::move(state_names)),
          action_names_(std::move(action_names)) {
        if (state_names_.empty()) throw input_error("mdp: no states");
        if (action_names_.empty()) throw input_error("mdp: no actions");
        check_unique(state_names_, "state");
        check_unique(action_names_, "action");
        rows_.resize(state_names_.size());
    }

    int num_states() const { return static_cast<int>(state_names_.size()); }
    int num_actions() const { return static_cast<int>(action_names_.size()); }

    const std::string& state_name(int s) const { return state_names_.at(s); }
    const std::string& action_name(int a) const { return action_names_.at(a); }
    const std::vector<std::string>& state_names() const { return state_names_; }
    const std::vector<std::string>& action_names() const { return action_names_; }

    int state_index(const std::string& name) const {
        return index_of(state_names_, name, "state");
    }
    int action_index(const std::string& name) const {
        return index_of(action_names_, name, "action");
    }

    /// Defines T(s, a) as a probability vector over next states.
    void set_transition(int s, int a, Vec next) {
        if (next.size() != num_states())
            throw input_error("mdp: transition row has wrong dimension");
        if (next.minCoeff() < 0.0)
            throw input_error("mdp: negative transition probability");
        if (std::abs(next.sum() - 1.0) > kRowSumTol)
            throw input_error("mdp: transition row for (" + state_name(s) + ", " +
                              action_name(a) + ") sums to " +
                              std::to_string(next.sum()));
        rows_.at(s)[a] = std::move(next);
    }
    void set_transition(const std::string& s, const std::string& a, Vec next) {
        set_transition(state_index(s), action_index(a), std::move(next));
    }
    void set_deterministic(const std::string& s, const std::string& a,
                           const std::string& to) {
        Vec row = Vec::Zero(num_states());
        row[state_index(to)] = 1.0;
        set_transition(state_index(s), action_index(a), std::move(row));
    }

    bool has_action(int s, int a) const { return rows_.at(s).count(a) > 0; }

    const Vec& transition(int s, int a) const {
        auto it = rows_.at(s).find(a);
        if (it == rows_.at(s).end())
            throw input_error("mdp: action '" + action_name(a) +
                              "' not available at state '" + state_name(s) + "'");
        return it->second;
    }

    std::vector<int> actions_at(int s) const {
        std::vector<int> out;
        for (const auto& [a, row] : rows_.at(s)) out.push_back(a);
        return out;
    }

    /// Actions at s equivalent to a: identical rows within kActionEquivTol.
    std::vector<int> equivalent_actions(int s, int a) const {
        std::vector<int> out;
        const Vec& base = transition(s, a);
        for (const auto& [b, row] : rows_.at(s))
            if ((row - base).lpNorm<Eigen::Infinity>() <= kActionEquivTol)
                out.push_back(b);
        return out;
    }

    /// Verifies every state has at least one defined action.
    void validate() const {
        for (int s = 0; s < num_states(); ++s)
            if (rows_[s].empty())
                throw input_error("mdp: state '" + state_name(s) + "' has no actions");
    }

    /// States reachable from s with positive probability (s included).
    std::vector<int> reachable_from(int s) const {
        std::vector<char> seen(num_states(), 0);
        std::vector<int> stack{s};
        seen[s] = 1;
        while (!stack.empty()) {
            int cur = stack.back();
            stack.pop_back();
            for (const auto& [a, row] : rows_[cur])
                for (int t = 0; t < num_states(); ++t)
                    if (row[t] > 0.0 && !seen[t]) {
                        seen[t] = 1;
                        stack.push_back(t);
                    }
        }
        std::vector<int> out;
        for (int t = 0; t < num_states(); ++t)
            if (seen[t]) out.push_back(t);
        return out;
    }

private:
    static void check_unique(const std::vector<std::string>& names,
                             const char* kind) {
        std::set<std::string> set(names.begin(), names.end());
        if (set.size() != names.size())
            throw input_error(std::string("mdp: duplicate ") + kind + " name");
    }
    static int index_of(const std::vector<std::string>& names,
                        const std::string& name, const char* kind) {
        auto it = std::find(names.begin(), names.end(), name);
        if (it == names.end())
            throw input_error(std::string("mdp: unknown ") + kind + " '" + name + "'");
        return static_cast<int>(it - names.begin());
    }

    std::vector<std::string> state_names_;
    std::vector<std::string> action_names_;
    std::vector<std::map<int, Vec>> rows_;  // per state: action -> next-state dist
};

/// Reward over states, optionally over (state, action) pairs.
struct RewardFunction {
    Vec state_reward;                       // indexed by state
    std::optional<Mat> state_action_reward; // rows: states, cols: actions

    static RewardFunction states(Vec r) { return RewardFunction{std::move(r), {}}; }

    double at(int s) const { return state_reward[s]; }
    double at(int s, int a) const {
        return state_action_reward ? (*state_action_reward)(s, a) : state_reward[s];
    }
    bool finite() const {
        if (!state_reward.allFinite()) return false;
        return !state_action_reward || state_action_reward->allFinite();
    }
};

/// Deterministic stationary policy: one action index per state.
struct Policy {
    std::vector<int> action_of;

    int operator()(int s) const { return action_of.at(s); }
    bool operator==(const Policy& other) const = default;
};

/// Per-state sets of (near-)optimal actions, closed under action equivalence.
struct PolicySetReport {
    std::vector<std::vector<int>> actions; // per state, sorted action indices
    double tolerance = 0.0;
    double gamma = 0.0;

    bool contains(int s, int a) const {
        const auto& v = actions.at(s);
        return std::binary_search(v.begin(), v.end(), a);
    }
    bool operator==(const PolicySetReport& other) const {
        return actions == other.actions;
    }
};

// ---------------------------------------------------------------------------
// MDP text format (UTF-8 JSON):
//   { "states": [...], "actions": [...],
//     "transitions": { "<state>": { "<action>": [["<state>", p], ...] } } }

inline RewardlessMdp load_mdp_json(const nlohmann::json& j) {
    if (!j.contains("states") || !j.contains("actions") || !j.contains("transitions"))
        throw input_error("mdp file: missing states/actions/transitions");
    RewardlessMdp mdp(j.at("states").get<std::vector<std::string>>(),
                      j.at("actions").get<std::vector<std::string>>());
    for (const auto& [sname, acts] : j.at("transitions").items()) {
        int s = mdp.state_index(sname);
        for (const auto& [aname, entries] : acts.items()) {
            Vec row = Vec::Zero(mdp.num_states());
            for (const auto& entry : entries) {
                if (!entry.is_array() || entry.size() != 2)
                    throw input_error("mdp file: transition entry for (" + sname +
                                      ", " + aname + ") is not [state, prob]");
                row[mdp.state_index(entry.at(0).get<std::string>())] +=
                    entry.at(1).get<double>();
            }
            mdp.set_transition(s, mdp.action_index(aname), std::move(row));
        }
    }
    mdp.validate();
    return mdp;
}

inline RewardlessMdp load_mdp(std::istream& in) {
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw input_error(std::string("mdp file: ") + e.what());
    }
    return load_mdp_json(j);
}

inline RewardlessMdp load_mdp_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw input_error("cannot open mdp file '" + path + "'");
    return load_mdp(in);
}

inline nlohmann::json mdp_to_json(const RewardlessMdp& mdp) {
    nlohmann::json j;
    j["states"] = mdp.state_names();
    j["actions"] = mdp.action_names();
    nlohmann::json trans = nlohmann::json::object();
    for (int s = 0; s < mdp.num_states(); ++s) {
        nlohmann::json per_state = nlohmann::json::object();
        for (int a : mdp.actions_at(s)) {
            nlohmann::json entries = nlohmann::json::array();
            const Vec& row = mdp.transition(s, a);
            for (int t = 0; t < mdp.num_states(); ++t)
                if (row[t] != 0.0)
                    entries.push_back({mdp.state_name(t), row[t]});
            per_state[mdp.action_name(a)] = entries;
        }
        trans[mdp.state_name(s)] = per_state;
    }
    j["transitions"] = trans;
    return j;
}

}  // namespace powermdp
