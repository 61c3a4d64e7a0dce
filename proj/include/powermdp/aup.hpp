#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cstdint>
#include <vector>

#include "powermdp/errors.hpp"
#include "powermdp/mdp.hpp"
#include "powermdp/reward_dist.hpp"
#include "powermdp/rng.hpp"
#include "powermdp/solve.hpp"

namespace powermdp {

/// Attainable-utility-preservation setup: penalty coefficient, auxiliary
/// reward set, the no-op action, and the shared discount.
struct AupConfig {
    double lambda = 0.01;
    std::vector<RewardFunction> auxiliaries;
    int noop_action = 0;
    double gamma = 0.996;

    void validate() const {
        if (!(lambda >= 0.0) || !std::isfinite(lambda))
            throw input_error("aup: lambda must be finite and >= 0");
        if (lambda > 0.0 && auxiliaries.empty())
            throw input_error("aup: need auxiliary rewards when lambda > 0");
    }
};

/// Uniformly random state-based auxiliary rewards in [0,1]^S.
inline std::vector<RewardFunction> sample_auxiliaries(const RewardlessMdp& mdp,
                                                      int count,
                                                      std::uint64_t seed) {
    RewardDistributionSpec unif =
        RewardDistributionSpec::iid(mdp.num_states(), Marginal::uniform());
    std::vector<RewardFunction> out;
    for (int i = 0; i < count; ++i)
        out.push_back(RewardFunction::states(unif.sample(seed, i)));
    return out;
}

/// R_aup(s,a) = R_env(s,a) - lambda/|R| sum_i |Q*_i(s,a) - Q*_i(s,noop)|,
/// with the auxiliary Q* computed exactly by policy iteration.
inline RewardFunction build_aup_reward(const RewardlessMdp& mdp,
                                       const RewardFunction& r_env,
                                       const AupConfig& config) {
    config.validate();
    for (int s = 0; s < mdp.num_states(); ++s)
        if (!mdp.has_action(s, config.noop_action))
            throw input_error("aup: no-op action missing at state '" +
                              mdp.state_name(s) + "'");
    Mat penalty = Mat::Zero(mdp.num_states(), mdp.num_actions());
    if (config.lambda > 0.0) {
        for (const RewardFunction& aux : config.auxiliaries) {
            Mat q = optimal_q(mdp, aux, config.gamma);
            for (int s = 0; s < mdp.num_states(); ++s) {
                double base = q(s, config.noop_action);
                for (int a : mdp.actions_at(s))
                    penalty(s, a) += std::abs(q(s, a) - base);
            }
        }
        penalty *= config.lambda / static_cast<double>(config.auxiliaries.size());
    }
    Mat combined(mdp.num_states(), mdp.num_actions());
    for (int s = 0; s < mdp.num_states(); ++s)
        for (int a = 0; a < mdp.num_actions(); ++a)
            combined(s, a) =
                mdp.has_action(s, a)
                    ? r_env.at(s, a) - penalty(s, a)
                    : std::numeric_limits<double>::quiet_NaN();
    RewardFunction out;
    out.state_reward = r_env.state_reward;
    out.state_action_reward = std::move(combined);
    return out;
}

/// Raw AUP penalty term (lambda / |R| already applied); zero at the no-op.
inline Mat aup_penalty(const RewardlessMdp& mdp, const AupConfig& config) {
    RewardFunction zero = RewardFunction::states(Vec::Zero(mdp.num_states()));
    RewardFunction aup = build_aup_reward(mdp, zero, config);
    Mat out = -*aup.state_action_reward;
    for (int s = 0; s < mdp.num_states(); ++s)
        for (int a = 0; a < mdp.num_actions(); ++a)
            if (!mdp.has_action(s, a)) out(s, a) = 0.0;
    return out;
}

// ---------------------------------------------------------------------------
// Tabular Q-learning, learning rate 1, epsilon-greedy behavior.

struct QLearningConfig {
    double gamma = 0.996;
    double epsilon = 0.1;
    int episodes = 5000;
    int horizon = 20;
    int start = 0;
    // Untried pairs keep this value, so greedy play keeps probing them until
    // every reachable pair has been backed up at least once. Set at or above
    // the best achievable return.
    double optimistic_init = 1.0;
};

inline Mat q_learning(const RewardlessMdp& mdp, const RewardFunction& R,
                      const QLearningConfig& cfg, std::uint64_t seed) {
    Mat Q = Mat::Constant(mdp.num_states(), mdp.num_actions(), cfg.optimistic_init);
    std::vector<std::vector<int>> avail(mdp.num_states());
    for (int s = 0; s < mdp.num_states(); ++s) avail[s] = mdp.actions_at(s);

    auto greedy = [&](int s) {
        int best = avail[s].front();
        for (int a : avail[s])
            if (Q(s, a) > Q(s, best)) best = a;
        return best;
    };

    for (int ep = 0; ep < cfg.episodes; ++ep) {
        CounterRng rng(seed, static_cast<std::uint64_t>(ep), 0x51AB);
        int s = cfg.start;
        for (int t = 0; t < cfg.horizon; ++t) {
            int a = rng.uniform() < cfg.epsilon
                        ? avail[s][rng.below(avail[s].size())]
                        : greedy(s);
            const Vec& row = mdp.transition(s, a);
            int next;
            double u = rng.uniform(), acc = 0.0;
            for (next = 0; next < mdp.num_states() - 1; ++next) {
                acc += row[next];
                if (u < acc) break;
            }
            Q(s, a) = R.at(s, a) + cfg.gamma * Q(next, greedy(next));
            s = next;
        }
    }
    return Q;
}

inline Policy greedy_policy(const RewardlessMdp& mdp, const Mat& Q) {
    Policy pi;
    pi.action_of.resize(mdp.num_states());
    for (int s = 0; s < mdp.num_states(); ++s) {
        int best = mdp.actions_at(s).front();
        for (int a : mdp.actions_at(s))
            if (Q(s, a) > Q(s, best)) best = a;
        pi.action_of[s] = best;
    }
    return pi;
}

/// Deterministic rollout of a policy; returns the visited states, start first.
inline std::vector<int> rollout(const RewardlessMdp& mdp, const Policy& pi,
                                int start, int steps) {
    std::vector<int> states{start};
    int s = start;
    for (int t = 0; t < steps; ++t) {
        const Vec& row = mdp.transition(s, pi(s));
        int next = 0;
        double best = row[0];
        for (int i = 1; i < mdp.num_states(); ++i)
            if (row[i] > best) { best = row[i]; next = i; }
        s = next;
        states.push_back(s);
    }
    return states;
}

}  // namespace powermdp
