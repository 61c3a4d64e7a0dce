#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cstdint>
#include <numeric>
#include <vector>

#include "powermdp/errors.hpp"
#include "powermdp/mdp.hpp"
#include "powermdp/rng.hpp"
#include "powermdp/stats.hpp"

namespace powermdp {

inline constexpr int kBanditArms = 5;

/// Five-arm bandit trained with epsilon-greedy exploration: with probability
/// 1 - eps pull the current greedy arm, otherwise pull uniformly among the
/// other four. Learning rate 1, deterministic payoffs, estimates start at 0.
struct BanditConfig {
    Eigen::Matrix<double, kBanditArms, 1> utilities;
    double epsilon = 0.1;
    int trials = 100;

    void validate() const {
        if (!(epsilon > 0.0 && epsilon < 1.0))
            throw input_error("bandit: epsilon must be in (0,1)");
        if (trials < 0) throw input_error("bandit: trials must be >= 0");
    }
};

struct BanditTrainResult {
    std::array<EstimateWithCI, kBanditArms> arm_probability;
};

namespace detail {

// One training run; returns the exploitation distribution over arms
// (uniform over the final greedy set).
inline std::array<double, kBanditArms> bandit_run(const BanditConfig& cfg,
                                                  std::uint64_t seed,
                                                  std::uint64_t sim) {
    std::array<double, kBanditArms> est{};
    CounterRng rng(seed, sim, 0xBA4D17);
    for (int t = 0; t < cfg.trials; ++t) {
        int greedy = 0;
        int ties = 1;
        for (int a = 1; a < kBanditArms; ++a) {
            if (est[a] > est[greedy]) {
                greedy = a;
                ties = 1;
            } else if (est[a] == est[greedy]) {
                ++ties;
            }
        }
        if (ties > 1) {
            // Uniform tie-break among the greedy set.
            auto pick = rng.below(static_cast<std::uint64_t>(ties));
            for (int a = 0; a < kBanditArms; ++a)
                if (est[a] == est[greedy] && pick-- == 0) { greedy = a; break; }
        }
        int arm = greedy;
        if (rng.uniform() < cfg.epsilon) {
            auto other = rng.below(kBanditArms - 1);
            arm = other < static_cast<std::uint64_t>(greedy)
                      ? static_cast<int>(other)
                      : static_cast<int>(other) + 1;
        }
        est[arm] = cfg.utilities[arm];  // alpha = 1 on a deterministic payoff
    }
    double best = *std::max_element(est.begin(), est.end());
    int nbest = 0;
    for (double e : est) nbest += e == best;
    std::array<double, kBanditArms> out{};
    for (int a = 0; a < kBanditArms; ++a)
        if (est[a] == best) out[a] = 1.0 / nbest;
    return out;
}

}  // namespace detail

/// Monte Carlo exploitation probabilities per arm after training.
inline BanditTrainResult bandit_train_prob(const BanditConfig& cfg,
                                           std::uint64_t sims, std::uint64_t seed) {
    cfg.validate();
    if (sims < 1) throw input_error("bandit: need at least one simulation");
    BanditTrainResult result;
    std::array<double, kBanditArms> totals{};
    // One pass, all arms tallied together; rerunning per arm would be wasteful.
    std::vector<std::array<double, kBanditArms>> partial;
    for (std::uint64_t i = 0; i < sims; ++i) {
        auto probs = detail::bandit_run(cfg, seed, i);
        for (int a = 0; a < kBanditArms; ++a) totals[a] += probs[a];
    }
    for (int a = 0; a < kBanditArms; ++a) {
        result.arm_probability[a] = {totals[a] / static_cast<double>(sims),
                                     hoeffding_radius_prob(sims), sims, seed};
    }
    return result;
}

struct BanditOrbitTally {
    std::uint64_t count_b = 0;
    std::uint64_t count_a = 0;
    std::uint64_t count_eq = 0;
    bool holds(std::uint64_t n) const { return count_b >= n * count_a; }
};

/// Full 5!-orbit tally of f_train(B) vs f_train(A), A = {arm 0},
/// B = {arms 1..4}, estimated per orbit element with common seeds.
inline BanditOrbitTally bandit_orbit_tally(const BanditConfig& base,
                                           std::uint64_t sims, std::uint64_t seed) {
    BanditOrbitTally tally;
    std::array<int, kBanditArms> perm{};
    std::iota(perm.begin(), perm.end(), 0);
    do {
        BanditConfig cfg = base;
        for (int a = 0; a < kBanditArms; ++a)
            cfg.utilities[perm[a]] = base.utilities[a];
        BanditTrainResult r = bandit_train_prob(cfg, sims, seed);
        double fa = r.arm_probability[0].estimate;
        double fb = 0.0;
        for (int a = 1; a < kBanditArms; ++a) fb += r.arm_probability[a].estimate;
        if (fb > fa)
            ++tally.count_b;
        else if (fa > fb)
            ++tally.count_a;
        else
            ++tally.count_eq;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return tally;
}

}  // namespace powermdp
