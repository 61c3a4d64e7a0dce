#pragma once

#include <Eigen/Dense>
#include <cmath>

#include "powermdp/errors.hpp"
#include "powermdp/mdp.hpp"
#include "powermdp/solve.hpp"

namespace powermdp {

/// Proportional regret of a corrected policy: the fraction of the attainable
/// normalized value range lost by following pi for t steps before switching
/// to an optimal policy.
struct RegretReport {
    double pregret = 0.0;
    double v_opt_norm = 0.0;
    double v_switch_norm = 0.0;
    double v_min_norm = 0.0;
};

namespace detail {

// Normalized value of "follow pi for t steps, then act optimally" from s.
inline double switch_value_norm(const RewardlessMdp& mdp, const Policy& pi,
                                int t_correct, const RewardFunction& R, int s,
                                double gamma, std::size_t cap) {
    if (gamma == 1.0) {
        // Transient steps vanish in the average; only the correction state
        // distribution matters.
        Mat T = policy_matrix(mdp, pi);
        Vec d = Vec::Zero(mdp.num_states());
        d[s] = 1.0;
        for (int i = 0; i < t_correct; ++i) d = T * d;
        return d.dot(optimal_gain(mdp, R, cap));
    }
    Mat T = policy_matrix(mdp, pi);
    Vec d = Vec::Zero(mdp.num_states());
    d[s] = 1.0;
    Vec r = policy_reward(mdp, pi, R);
    double acc = 0.0, g = 1.0;
    for (int i = 0; i < t_correct; ++i, g *= gamma) {
        acc += g * d.dot(r);
        d = T * d;
    }
    acc += g * d.dot(optimal_value(mdp, R, gamma));
    return (1.0 - gamma) * acc;
}

}  // namespace detail

namespace detail {

inline RegretReport regret_from_norms(const RewardlessMdp& mdp,
                                      const RewardFunction& R, int s, double gamma,
                                      double v_followed, std::size_t cap) {
    RegretReport report;
    RewardFunction neg = RewardFunction::states(-R.state_reward);
    report.v_opt_norm = normalized_optimal_value(mdp, R, gamma, cap)[s];
    report.v_min_norm = -normalized_optimal_value(mdp, neg, gamma, cap)[s];
    report.v_switch_norm = v_followed;
    double denom = report.v_opt_norm - report.v_min_norm;
    if (std::abs(denom) <= 1e-12) {
        report.pregret = 0.0;
        return report;
    }
    report.pregret = (report.v_opt_norm - report.v_switch_norm) / denom;
    return report;
}

}  // namespace detail

/// Regret of following pi for t_correct steps before switching to an optimal
/// policy for R.
inline RegretReport proportional_regret(const RewardlessMdp& mdp, const Policy& pi,
                                        int t_correct, const RewardFunction& R,
                                        int s, double gamma,
                                        std::size_t cap = 1'000'000) {
    if (gamma < 0.0 || gamma > 1.0)
        throw domain_error("proportional_regret: gamma must be in [0,1]");
    if (t_correct < 0) throw input_error("proportional_regret: t_correct >= 0");
    return detail::regret_from_norms(
        mdp, R, s, gamma,
        detail::switch_value_norm(mdp, pi, t_correct, R, s, gamma, cap), cap);
}

/// Regret of following pi forever (never corrected). This is the form the
/// negation identity and the no-free-lunch bound quantify over.
inline RegretReport proportional_regret(const RewardlessMdp& mdp, const Policy& pi,
                                        const RewardFunction& R, int s,
                                        double gamma,
                                        std::size_t cap = 1'000'000) {
    if (gamma < 0.0 || gamma > 1.0)
        throw domain_error("proportional_regret: gamma must be in [0,1]");
    double v_pi = gamma == 1.0 ? policy_gain(mdp, pi, R)[s]
                               : (1.0 - gamma) * evaluate_policy(mdp, pi, R, gamma)[s];
    return detail::regret_from_norms(mdp, R, s, gamma, v_pi, cap);
}

struct NoFreeLunchReport {
    RegretReport forward;   // pregret under R
    RegretReport negated;   // pregret under -R
    bool nondegenerate = false;
    double worst = 0.0;     // max of the two pregrets

    /// The no-free-lunch bound: worst >= 1/2 whenever values are nondegenerate.
    bool holds(double slack = 1e-9) const {
        return !nondegenerate || worst >= 0.5 - slack;
    }
};

inline NoFreeLunchReport no_free_lunch_check(const RewardlessMdp& mdp,
                                             const Policy& pi,
                                             const RewardFunction& R, int s,
                                             double gamma,
                                             std::size_t cap = 1'000'000) {
    NoFreeLunchReport report;
    report.forward = proportional_regret(mdp, pi, R, s, gamma, cap);
    RewardFunction neg = RewardFunction::states(-R.state_reward);
    report.negated = proportional_regret(mdp, pi, neg, s, gamma, cap);
    report.nondegenerate =
        report.forward.v_opt_norm - report.forward.v_min_norm > 1e-12;
    report.worst = std::max(report.forward.pregret, report.negated.pregret);
    return report;
}

struct CorrigibilityBoundReport {
    double pregret = 0.0;
    double bound = 0.0;  // 1 - gamma^{t+k}
    bool holds = false;
};

/// Checks pregret <= 1 - gamma^{t+k} for a policy that can return to the
/// start within k steps of its correction time.
inline CorrigibilityBoundReport corrigibility_bound_check(
    const RewardlessMdp& mdp, const Policy& pi, int t_correct, int k_return,
    const RewardFunction& R, int s, double gamma, std::size_t cap = 1'000'000) {
    CorrigibilityBoundReport report;
    report.pregret = proportional_regret(mdp, pi, t_correct, R, s, gamma, cap).pregret;
    report.bound = 1.0 - std::pow(gamma, t_correct + k_return);
    report.holds = report.pregret <= report.bound + 1e-9;
    return report;
}

}  // namespace powermdp
