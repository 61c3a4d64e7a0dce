#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "powermdp/errors.hpp"
#include "powermdp/markov_chain.hpp"
#include "powermdp/mdp.hpp"

namespace powermdp {

/// Left-stochastic transition matrix induced by a policy: column s holds
/// T(s, pi(s)).
inline Mat policy_matrix(const RewardlessMdp& mdp, const Policy& pi) {
    const int n = mdp.num_states();
    if (static_cast<int>(pi.action_of.size()) != n)
        throw input_error("policy_matrix: policy not total over states");
    Mat T(n, n);
    for (int s = 0; s < n; ++s) T.col(s) = mdp.transition(s, pi(s));
    return T;
}

inline Vec policy_reward(const RewardlessMdp& mdp, const Policy& pi,
                         const RewardFunction& R) {
    Vec r(mdp.num_states());
    for (int s = 0; s < mdp.num_states(); ++s) r[s] = R.at(s, pi(s));
    return r;
}

/// On-policy value V = r_pi + gamma T^pi' V by direct dense solve.
inline Vec evaluate_policy(const RewardlessMdp& mdp, const Policy& pi,
                           const RewardFunction& R, double gamma) {
    if (!(gamma >= 0.0 && gamma < 1.0))
        throw domain_error("evaluate_policy: gamma must be in [0,1)");
    if (!R.finite()) throw input_error("evaluate_policy: reward not finite");
    const int n = mdp.num_states();
    Mat T = policy_matrix(mdp, pi);
    Mat A = Mat::Identity(n, n) - gamma * T.transpose();
    return A.partialPivLu().solve(policy_reward(mdp, pi, R));
}

namespace detail {

inline double action_value(const RewardlessMdp& mdp, const RewardFunction& R,
                           double gamma, const Vec& V, int s, int a) {
    return R.at(s, a) + gamma * mdp.transition(s, a).dot(V);
}

}  // namespace detail

/// Optimal state values via Howard policy iteration with exact evaluation.
inline Vec optimal_value(const RewardlessMdp& mdp, const RewardFunction& R,
                         double gamma) {
    if (!(gamma >= 0.0 && gamma < 1.0))
        throw domain_error("optimal_value: gamma must be in [0,1)");
    const int n = mdp.num_states();
    Policy pi;
    pi.action_of.resize(n);
    for (int s = 0; s < n; ++s) pi.action_of[s] = mdp.actions_at(s).front();
    Vec V = evaluate_policy(mdp, pi, R, gamma);
    for (;;) {
        bool changed = false;
        for (int s = 0; s < n; ++s) {
            double cur = detail::action_value(mdp, R, gamma, V, s, pi(s));
            int best = pi(s);
            double best_val = cur;
            for (int a : mdp.actions_at(s)) {
                double q = detail::action_value(mdp, R, gamma, V, s, a);
                if (q > best_val + 1e-13) {
                    best_val = q;
                    best = a;
                }
            }
            if (best != pi(s)) {
                pi.action_of[s] = best;
                changed = true;
            }
        }
        if (!changed) return V;
        V = evaluate_policy(mdp, pi, R, gamma);
    }
}

/// A deterministic optimal policy: greedy in Q* with first-index tie-break.
inline Policy optimal_policy(const RewardlessMdp& mdp, const RewardFunction& R,
                             double gamma) {
    Vec V = optimal_value(mdp, R, gamma);
    Policy pi;
    pi.action_of.resize(mdp.num_states());
    for (int s = 0; s < mdp.num_states(); ++s) {
        double best = -std::numeric_limits<double>::infinity();
        int arg = -1;
        for (int a : mdp.actions_at(s)) {
            double q = detail::action_value(mdp, R, gamma, V, s, a);
            if (q > best + 1e-12) {
                best = q;
                arg = a;
            }
        }
        pi.action_of[s] = arg;
    }
    return pi;
}

/// Optimal action values Q*(s,a) = r(s,a) + gamma E_{s'~T(s,a)} V*(s').
/// Entries for unavailable actions are NaN.
inline Mat optimal_q(const RewardlessMdp& mdp, const RewardFunction& R,
                     double gamma) {
    Vec V = optimal_value(mdp, R, gamma);
    Mat Q = Mat::Constant(mdp.num_states(), mdp.num_actions(),
                          std::numeric_limits<double>::quiet_NaN());
    for (int s = 0; s < mdp.num_states(); ++s)
        for (int a : mdp.actions_at(s))
            Q(s, a) = detail::action_value(mdp, R, gamma, V, s, a);
    return Q;
}

/// Per-state sets of actions within `tol` of the optimal Q value; ties keep
/// every tied action, and the sets are closed under action equivalence.
inline PolicySetReport optimal_actions(const RewardlessMdp& mdp,
                                       const RewardFunction& R, double gamma,
                                       double tol = kOptTol) {
    if (!(tol > 0.0)) throw input_error("optimal_actions: tol must be positive");
    Mat Q = optimal_q(mdp, R, gamma);
    PolicySetReport report;
    report.tolerance = tol;
    report.gamma = gamma;
    report.actions.resize(mdp.num_states());
    for (int s = 0; s < mdp.num_states(); ++s) {
        double best = -std::numeric_limits<double>::infinity();
        for (int a : mdp.actions_at(s)) best = std::max(best, Q(s, a));
        std::vector<char> in(mdp.num_actions(), 0);
        for (int a : mdp.actions_at(s))
            if (Q(s, a) >= best - tol)
                for (int b : mdp.equivalent_actions(s, a)) in[b] = 1;
        for (int a = 0; a < mdp.num_actions(); ++a)
            if (in[a]) report.actions[s].push_back(a);
    }
    return report;
}

// ---------------------------------------------------------------------------
// Policy enumeration (desk scale). Helpers shared by the gamma -> 1 limits
// and the brute-force oracles.

inline std::vector<Policy> enumerate_policies(
    const RewardlessMdp& mdp, const std::vector<int>& states,
    std::size_t cap = 1'000'000) {
    std::size_t total = 1;
    for (int s : states) {
        total *= mdp.actions_at(s).size();
        if (total > cap)
            throw size_error("policy enumeration exceeds cap of " +
                             std::to_string(cap));
    }
    Policy base;
    base.action_of.resize(mdp.num_states());
    for (int s = 0; s < mdp.num_states(); ++s)
        base.action_of[s] = mdp.actions_at(s).front();
    std::vector<Policy> out;
    out.reserve(total);
    std::vector<std::size_t> idx(states.size(), 0);
    for (;;) {
        Policy pi = base;
        for (std::size_t k = 0; k < states.size(); ++k)
            pi.action_of[states[k]] = mdp.actions_at(states[k])[idx[k]];
        out.push_back(std::move(pi));
        std::size_t k = 0;
        for (; k < states.size(); ++k) {
            if (++idx[k] < mdp.actions_at(states[k]).size()) break;
            idx[k] = 0;
        }
        if (k == states.size()) break;
    }
    return out;
}

inline std::vector<Policy> enumerate_policies(const RewardlessMdp& mdp,
                                              std::size_t cap = 1'000'000) {
    std::vector<int> states(mdp.num_states());
    for (int s = 0; s < mdp.num_states(); ++s) states[s] = s;
    return enumerate_policies(mdp, states, cap);
}

/// Average reward of pi from each start state (the gamma -> 1 normalized
/// value), exact via chain analysis.
inline Vec policy_gain(const RewardlessMdp& mdp, const Policy& pi,
                       const RewardFunction& R) {
    ChainAnalysis chain(policy_matrix(mdp, pi));
    Vec r = policy_reward(mdp, pi, R);
    Vec out(mdp.num_states());
    for (int s = 0; s < mdp.num_states(); ++s)
        out[s] = chain.limit_distribution(s).dot(r);
    return out;
}

/// Per-state optimal gain max_pi lim (1-gamma) V^pi. Enumerates policies, so
/// only suitable at desk scale.
inline Vec optimal_gain(const RewardlessMdp& mdp, const RewardFunction& R,
                        std::size_t cap = 1'000'000) {
    Vec best = Vec::Constant(mdp.num_states(),
                             -std::numeric_limits<double>::infinity());
    for (const Policy& pi : enumerate_policies(mdp, cap))
        best = best.cwiseMax(policy_gain(mdp, pi, R));
    return best;
}

/// Normalized optimal value lim (1-gamma*) V*(s, gamma*) at any gamma in [0,1].
inline Vec normalized_optimal_value(const RewardlessMdp& mdp,
                                    const RewardFunction& R, double gamma,
                                    std::size_t cap = 1'000'000) {
    if (gamma < 0.0 || gamma > 1.0)
        throw domain_error("normalized_optimal_value: gamma must be in [0,1]");
    if (gamma == 1.0) return optimal_gain(mdp, R, cap);
    return (1.0 - gamma) * optimal_value(mdp, R, gamma);
}

/// epsilon-optimal action sets under discount-normalized values: action a
/// stays when its best continuation is within eps of the best action's.
/// Limits at gamma = 0 (greedy) and gamma = 1 (average) are exact.
inline PolicySetReport eps_optimal_actions(const RewardlessMdp& mdp,
                                           const RewardFunction& R, double gamma,
                                           double eps,
                                           std::size_t cap = 1'000'000) {
    if (eps < 0.0) throw input_error("eps_optimal_actions: eps must be >= 0");
    if (gamma < 0.0 || gamma > 1.0)
        throw domain_error("eps_optimal_actions: gamma must be in [0,1]");
    Vec Vn = normalized_optimal_value(mdp, R, gamma, cap);
    PolicySetReport report;
    report.tolerance = eps;
    report.gamma = gamma;
    report.actions.resize(mdp.num_states());
    for (int s = 0; s < mdp.num_states(); ++s) {
        double best = -std::numeric_limits<double>::infinity();
        std::vector<std::pair<int, double>> vals;
        for (int a : mdp.actions_at(s)) {
            double v = mdp.transition(s, a).dot(Vn);
            vals.emplace_back(a, v);
            best = std::max(best, v);
        }
        for (auto [a, v] : vals)
            if (best - v <= eps + 1e-12) report.actions[s].push_back(a);
        std::sort(report.actions[s].begin(), report.actions[s].end());
    }
    return report;
}

/// Reward whose optimal policy set at gamma* matches R's at gamma:
/// R'(s) = V*_R(s, gamma) - gamma* max_a E_{s'~T(s,a)} V*_R(s', gamma).
inline RewardFunction transfer_reward(const RewardlessMdp& mdp,
                                      const RewardFunction& R, double gamma,
                                      double gamma_star) {
    if (!(gamma > 0.0 && gamma < 1.0) || !(gamma_star > 0.0 && gamma_star < 1.0))
        throw domain_error("transfer_reward: discounts must lie in (0,1)");
    Vec V = optimal_value(mdp, R, gamma);
    Vec out(mdp.num_states());
    for (int s = 0; s < mdp.num_states(); ++s) {
        double best = -std::numeric_limits<double>::infinity();
        for (int a : mdp.actions_at(s))
            best = std::max(best, mdp.transition(s, a).dot(V));
        out[s] = V[s] - gamma_star * best;
    }
    return RewardFunction::states(std::move(out));
}

}  // namespace powermdp
