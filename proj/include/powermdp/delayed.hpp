#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "powermdp/errors.hpp"
#include "powermdp/mdp.hpp"
#include "powermdp/power.hpp"
#include "powermdp/reward_dist.hpp"
#include "powermdp/solve.hpp"
#include "powermdp/stats.hpp"

namespace powermdp {

/// Delayed-specification assistance game: the true reward R ~ D is revealed
/// at a random time, after which the agent acts optimally. With geometric
/// correction times the prefix problem is a plain MDP (see
/// solve_delayed_geometric).
struct DelayedSpecGame {
    RewardDistributionSpec dist;
    double gamma = 0.996;
    // Correction time: geometric(p) on {1,2,...} when table is empty,
    // otherwise table[t] = P(T = t) with table summing to 1.
    double p = 0.1;
    std::vector<double> table;

    void validate() const {
        if (table.empty()) {
            if (!(p > 0.0 && p < 1.0))
                throw input_error("delayed game: p must be in (0,1)");
        } else {
            double total = 0.0;
            for (double w : table) {
                if (w < 0.0) throw input_error("delayed game: negative time mass");
                total += w;
            }
            if (std::abs(total - 1.0) > 1e-9)
                throw input_error("delayed game: correction times must sum to 1");
        }
    }

    double gamma_aup() const { return (1.0 - p) * gamma; }
};

namespace detail {

/// State distributions d_0..d_t under pi from `start` (exact propagation).
inline std::vector<Vec> propagate(const RewardlessMdp& mdp, const Policy& pi,
                                  int start, int steps) {
    Mat T = policy_matrix(mdp, pi);
    std::vector<Vec> out;
    Vec d = Vec::Zero(mdp.num_states());
    d[start] = 1.0;
    out.push_back(d);
    for (int i = 0; i < steps; ++i) {
        d = T * d;
        out.push_back(d);
    }
    return out;
}

}  // namespace detail

/// E_D[ sum_{i<t} gamma^i E_pi R(s_i) + gamma^t E_pi V*_R(s_t) ]: exact state
/// propagation, Monte Carlo only over the reward draws.
inline EstimateWithCI delayed_spec_score(const RewardlessMdp& mdp, const Policy& pi,
                                         const RewardDistributionSpec& spec,
                                         double gamma, int t_correct, int start,
                                         std::uint64_t n, std::uint64_t seed) {
    if (t_correct < 0) throw input_error("delayed_spec_score: t_correct >= 0");
    if (!(gamma > 0.0 && gamma < 1.0))
        throw domain_error("delayed_spec_score: gamma must be in (0,1)");
    std::vector<Vec> dists = detail::propagate(mdp, pi, start, t_correct);
    auto support = spec.finite_support();
    auto score_for = [&](const Vec& r) {
        double acc = 0.0;
        double g = 1.0;
        for (int i = 0; i < t_correct; ++i, g *= gamma) acc += g * dists[i].dot(r);
        Vec V = optimal_value(mdp, RewardFunction::states(r), gamma);
        return acc + g * dists[t_correct].dot(V);
    };
    if (!support.empty()) {
        double total = 0.0;
        for (const auto& [w, r] : support) total += w * score_for(r);
        return {total, 0.0, 0, seed};
    }
    double mean =
        parallel_mean(n, [&](std::uint64_t i) { return score_for(spec.sample(seed, i)); });
    double width = (spec.upper() - spec.lower()) / (1.0 - gamma);
    return {mean, hoeffding_radius(n, width), n, seed};
}

struct DelayedSolution {
    RewardFunction surrogate;  // R'(s) = (1-p) E[R(s)] + p E[V*_R(s, gamma)]
    double gamma_aup = 0.0;
    Policy prefix;
};

/// Exact E_D[V*(s,gamma)] when the distribution has finite support, Monte
/// Carlo otherwise.
inline Vec mean_optimal_value(const RewardlessMdp& mdp,
                              const RewardDistributionSpec& spec, double gamma,
                              std::uint64_t n, std::uint64_t seed) {
    auto support = spec.finite_support();
    if (!support.empty()) {
        Vec acc = Vec::Zero(mdp.num_states());
        for (const auto& [w, r] : support)
            acc += w * optimal_value(mdp, RewardFunction::states(r), gamma);
        return acc;
    }
    if (n < 1) throw input_error("mean_optimal_value: need samples");
    Vec acc = Vec::Zero(mdp.num_states());
    for (std::uint64_t i = 0; i < n; ++i)
        acc += optimal_value(mdp, RewardFunction::states(spec.sample(seed, i)), gamma);
    return acc / static_cast<double>(n);
}

/// Optimal prefix policies for geometric correction times: solve the MDP with
/// surrogate reward R' at the shrunk discount (1-p) gamma.
inline DelayedSolution solve_delayed_geometric(const RewardlessMdp& mdp,
                                               const RewardDistributionSpec& spec,
                                               double p, double gamma,
                                               std::uint64_t n = 1000,
                                               std::uint64_t seed = 0) {
    if (!(p > 0.0 && p < 1.0))
        throw input_error("solve_delayed_geometric: p must be in (0,1)");
    if (!(gamma > 0.0 && gamma < 1.0))
        throw domain_error("solve_delayed_geometric: gamma must be in (0,1)");
    Vec rbar = spec.mean();
    Vec vavg = mean_optimal_value(mdp, spec, gamma, n, seed);
    DelayedSolution out;
    out.surrogate = RewardFunction::states((1.0 - p) * rbar + p * vavg);
    out.gamma_aup = (1.0 - p) * gamma;
    out.prefix = optimal_policy(mdp, out.surrogate, out.gamma_aup);
    return out;
}

inline DelayedSolution solve_delayed_geometric(const RewardlessMdp& mdp,
                                               const DelayedSpecGame& game,
                                               std::uint64_t n = 1000,
                                               std::uint64_t seed = 0) {
    game.validate();
    if (!game.table.empty())
        throw input_error("solve_delayed_geometric: correction times must be "
                          "geometric; finite tables go through "
                          "expected_switch_value");
    return solve_delayed_geometric(mdp, game.dist, game.p, game.gamma, n, seed);
}

/// E over the correction time and the reward draw of the switch value
/// sum_{i<t} gamma^i E R(s_i) + gamma^t E V*_R(s_t). Finite tables are summed
/// directly; geometric times are truncated once the tail mass cannot move
/// the result by more than 1e-12.
inline EstimateWithCI expected_switch_value(const RewardlessMdp& mdp,
                                            const Policy& pi,
                                            const DelayedSpecGame& game, int start,
                                            std::uint64_t n, std::uint64_t seed) {
    game.validate();
    std::vector<double> weights = game.table;
    if (weights.empty()) {
        // P(T = t) = (1-p)^{t-1} p on t >= 1.
        double bound =
            std::max(std::abs(game.dist.lower()), std::abs(game.dist.upper())) *
            2.0 / (1.0 - game.gamma);
        weights.push_back(0.0);
        double w = game.p;
        while (w * bound / game.p >= 1e-12) {
            weights.push_back(w);
            w *= (1.0 - game.p);
        }
    }
    Mat T = policy_matrix(mdp, pi);
    std::vector<Vec> dists;
    Vec d = Vec::Zero(mdp.num_states());
    d[start] = 1.0;
    for (std::size_t t = 0; t < weights.size(); ++t) {
        dists.push_back(d);
        d = T * d;
    }
    auto value_for = [&](const Vec& r) {
        Vec vstar = optimal_value(mdp, RewardFunction::states(r), game.gamma);
        Vec r_pi = policy_reward(mdp, pi, RewardFunction::states(r));
        double prefix = 0.0, gpow = 1.0, total = 0.0;
        for (std::size_t t = 0; t < weights.size(); ++t) {
            total += weights[t] * (prefix + gpow * dists[t].dot(vstar));
            prefix += gpow * dists[t].dot(r_pi);
            gpow *= game.gamma;
        }
        return total;
    };
    auto support = game.dist.finite_support();
    if (!support.empty()) {
        double total = 0.0;
        for (const auto& [w, r] : support) total += w * value_for(r);
        return {total, 0.0, 0, seed};
    }
    double mean = parallel_mean(
        n, [&](std::uint64_t i) { return value_for(game.dist.sample(seed, i)); });
    double width = (game.dist.upper() - game.dist.lower()) / (1.0 - game.gamma);
    return {mean, hoeffding_radius(n, width), n, seed};
}

struct AssistReward {
    /// Stationary part R_bar(s) + p/(1-p) E_D[V*(s,gamma)]; optimizing it at
    /// gamma_aup reproduces the optimal prefix set, since the baseline term
    /// is policy-independent.
    RewardFunction stationary;
    /// Per-step baseline b_i = p/(1-p) E_D E_{s_i ~ pi_noop} V*(s_i, gamma),
    /// subtracted from the stationary part at step i.
    std::vector<double> baseline;
    double coefficient = 0.0;  // p / (1-p)
    double gamma_aup = 0.0;

    double at(int step, int state) const {
        return stationary.at(state) - baseline.at(step);
    }
};

/// The baseline-relative form of the solution: reward equals mean reward
/// minus the odds p/(1-p) times the value advantage of the no-op baseline.
inline AssistReward assist_alternate_reward(const RewardlessMdp& mdp,
                                            const RewardDistributionSpec& spec,
                                            double p, double gamma,
                                            const Policy& pi_noop, int start,
                                            int horizon = 64,
                                            std::uint64_t n = 1000,
                                            std::uint64_t seed = 0) {
    if (!(p > 0.0 && p < 1.0))
        throw input_error("assist_alternate_reward: p must be in (0,1)");
    double k = p / (1.0 - p);
    Vec vavg = mean_optimal_value(mdp, spec, gamma, n, seed);
    AssistReward out;
    out.coefficient = k;
    out.gamma_aup = (1.0 - p) * gamma;
    out.stationary = RewardFunction::states(spec.mean() + k * vavg);
    for (const Vec& d : detail::propagate(mdp, pi_noop, start, horizon))
        out.baseline.push_back(k * d.dot(vavg));
    return out;
}

}  // namespace powermdp
