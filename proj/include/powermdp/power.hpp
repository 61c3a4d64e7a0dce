#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "powermdp/errors.hpp"
#include "powermdp/mdp.hpp"
#include "powermdp/permutation.hpp"
#include "powermdp/reward_dist.hpp"
#include "powermdp/rng.hpp"
#include "powermdp/solve.hpp"
#include "powermdp/stats.hpp"
#include "powermdp/visit.hpp"

namespace powermdp {

/// Fast optimal-value evaluation for repeated reward samples. Where the
/// reachable policy space is small enough, V*(s) = max_{f in Fnd(s)} f(gamma)'r
/// reduces each query to a handful of dot products; otherwise every query
/// falls back to policy iteration.
class ValueOracle {
public:
    ValueOracle(const RewardlessMdp& mdp, double gamma, std::vector<int> states,
                std::size_t cap = 1'000'000)
        : mdp_(&mdp), gamma_(gamma), states_(std::move(states)) {
        if (!(gamma > 0.0 && gamma < 1.0))
            throw domain_error("ValueOracle: gamma must be in (0,1)");
        duals_.resize(mdp.num_states());
        try {
            for (int s : states_) {
                VisitSet set = enumerate_visit_functions(mdp, s, cap);
                NonDominationReport nd = non_dominated(set);
                std::vector<int> keep = nd.non_dominated;
                for (int i : nd.indeterminate) keep.push_back(i);
                if (keep.empty())
                    for (std::size_t i = 0; i < set.members.size(); ++i)
                        keep.push_back(static_cast<int>(i));
                Mat D(keep.size(), mdp.num_states());
                for (std::size_t k = 0; k < keep.size(); ++k)
                    D.row(k) = set.members[keep[k]](gamma).transpose();
                duals_[s] = std::move(D);
            }
            dual_mode_ = true;
        } catch (const size_error&) {
            dual_mode_ = false;
        }
    }

    bool dual_mode() const { return dual_mode_; }

    /// V*(s) for reward vector r at the oracle's discount.
    double value(const Vec& r, int s) const {
        if (dual_mode_) return (duals_[s] * r).maxCoeff();
        return optimal_value(*mdp_, RewardFunction::states(r), gamma_)[s];
    }

    /// V* at several states for one reward sample (one solve in fallback mode).
    Vec values(const Vec& r, const std::vector<int>& states) const {
        Vec out(states.size());
        if (dual_mode_) {
            for (std::size_t k = 0; k < states.size(); ++k)
                out[k] = (duals_[states[k]] * r).maxCoeff();
        } else {
            Vec V = optimal_value(*mdp_, RewardFunction::states(r), gamma_);
            for (std::size_t k = 0; k < states.size(); ++k) out[k] = V[states[k]];
        }
        return out;
    }

private:
    const RewardlessMdp* mdp_;
    double gamma_;
    std::vector<int> states_;
    std::vector<Mat> duals_;
    bool dual_mode_ = false;
};

/// gamma = 1 counterpart: gain(s) = max over RSD(s) of d'r.
class GainOracle {
public:
    GainOracle(const RewardlessMdp& mdp, std::vector<int> states,
               std::size_t cap = 1'000'000) {
        rsds_.resize(mdp.num_states());
        for (int s : states) {
            std::vector<Rsd> set = rsd_set(mdp, s, cap);
            Mat D(set.size(), mdp.num_states());
            for (std::size_t k = 0; k < set.size(); ++k)
                D.row(k) = set[k].distribution.transpose();
            rsds_[s] = std::move(D);
        }
    }

    double gain(const Vec& r, int s) const { return (rsds_[s] * r).maxCoeff(); }
    const Mat& rsd_matrix(int s) const { return rsds_[s]; }

private:
    std::vector<Mat> rsds_;
};

namespace detail {

inline void require_bounded(const RewardDistributionSpec& spec) {
    if (!std::isfinite(spec.lower()) || !std::isfinite(spec.upper()))
        throw input_error("reward distribution must have bounded support");
}

inline std::vector<int> children_of(const RewardlessMdp& mdp, int s) {
    std::vector<char> seen(mdp.num_states(), 0);
    std::vector<int> out;
    for (int a : mdp.actions_at(s)) {
        const Vec& row = mdp.transition(s, a);
        for (int t = 0; t < mdp.num_states(); ++t)
            if (row[t] > 0.0 && !seen[t]) {
                seen[t] = 1;
                out.push_back(t);
            }
    }
    return out;
}

}  // namespace detail

/// Vavg(s, gamma): mean optimal value over the reward distribution.
inline EstimateWithCI average_optimal_value(const RewardlessMdp& mdp, int s,
                                            double gamma,
                                            const RewardDistributionSpec& spec,
                                            std::uint64_t n, std::uint64_t seed) {
    detail::require_bounded(spec);
    if (n < 1) throw input_error("need at least one sample");
    ValueOracle oracle(mdp, gamma, {s});
    double mean = parallel_mean(n, [&](std::uint64_t i) {
        return oracle.value(spec.sample(seed, i), s);
    });
    double width = (spec.upper() - spec.lower()) / (1.0 - gamma);
    return {mean, hoeffding_radius(n, width), n, seed};
}

/// POWER(s, gamma) for gamma in (0,1): mean of (1-gamma)/gamma (V* - R(s)).
inline EstimateWithCI power(const RewardlessMdp& mdp, int s, double gamma,
                            const RewardDistributionSpec& spec, std::uint64_t n,
                            std::uint64_t seed) {
    detail::require_bounded(spec);
    if (!(gamma > 0.0 && gamma < 1.0))
        throw domain_error("power: gamma must be in (0,1); use power_limit");
    if (n < 1) throw input_error("need at least one sample");
    ValueOracle oracle(mdp, gamma, {s});
    const double scale = (1.0 - gamma) / gamma;
    double mean = parallel_mean(n, [&](std::uint64_t i) {
        Vec r = spec.sample(seed, i);
        return scale * (oracle.value(r, s) - r[s]);
    });
    return {mean, hoeffding_radius(n, spec.upper() - spec.lower()), n, seed};
}

/// POWER at the discount endpoints: expected best inner product against the
/// child distributions (gamma = 0) or the RSDs (gamma = 1). For uniform-iid
/// specs whose non-dominated set is k distinct one-hot vectors the exact
/// value k/(k+1) is returned with zero radius.
inline EstimateWithCI power_limit(const RewardlessMdp& mdp, int s, int end,
                                  const RewardDistributionSpec& spec,
                                  std::uint64_t n, std::uint64_t seed,
                                  std::size_t cap = 1'000'000) {
    detail::require_bounded(spec);
    if (end != 0 && end != 1) throw input_error("power_limit: end must be 0 or 1");
    std::vector<Vec> family;
    if (end == 0) {
        for (const auto& c : nd_child_distributions(mdp, s)) family.push_back(c.next);
    } else {
        for (const auto& d : rsd_nondominated(mdp, s, cap))
            family.push_back(d.distribution);
    }
    bool uniform_iid = spec.is_continuous_iid() && spec.lower() == 0.0 &&
                       spec.upper() == 1.0;
    if (uniform_iid) {
        // Check the marginal really is uniform and the family is
        // one-hot: then E[max of k draws] = k/(k+1) exactly.
        Vec probe = spec.sample(0xFEED, 7);
        bool is_uniform = true;
        for (int t = 0; t < probe.size(); ++t)
            is_uniform &= std::abs(probe[t] - counter_uniform(0xFEED, 7, t, 0)) < 1e-15;
        bool one_hot = true;
        std::vector<int> hits;
        for (const Vec& d : family) {
            int nz = -1;
            for (int t = 0; t < d.size(); ++t) {
                if (d[t] == 0.0) continue;
                if (d[t] != 1.0 || nz != -1) { one_hot = false; break; }
                nz = t;
            }
            if (!one_hot) break;
            hits.push_back(nz);
        }
        std::sort(hits.begin(), hits.end());
        one_hot = one_hot && std::adjacent_find(hits.begin(), hits.end()) == hits.end();
        if (is_uniform && one_hot) {
            double k = static_cast<double>(family.size());
            return {k / (k + 1.0), 0.0, 0, seed};
        }
    }
    if (n < 1) throw input_error("need at least one sample");
    Mat D(family.size(), mdp.num_states());
    for (std::size_t k = 0; k < family.size(); ++k) D.row(k) = family[k].transpose();
    double mean = parallel_mean(n, [&](std::uint64_t i) {
        return (D * spec.sample(seed, i)).maxCoeff();
    });
    return {mean, hoeffding_radius(n, spec.upper() - spec.lower()), n, seed};
}

/// POWER at any gamma in [0,1]; endpoints dispatch to power_limit.
inline EstimateWithCI power_any(const RewardlessMdp& mdp, int s, double gamma,
                                const RewardDistributionSpec& spec,
                                std::uint64_t n, std::uint64_t seed) {
    if (gamma == 0.0 || gamma == 1.0)
        return power_limit(mdp, s, static_cast<int>(gamma), spec, n, seed);
    return power(mdp, s, gamma, spec, n, seed);
}

// ---------------------------------------------------------------------------
// Optimality probability.

struct ActionTarget { int action; };
struct VisitTarget { std::vector<int> member_indices; };  // into the VisitSet
struct RsdTarget { std::vector<Vec> distributions; };
using OptTarget = std::variant<ActionTarget, VisitTarget, RsdTarget>;

namespace detail {

// Distinct RSDs achievable from s by policies taking action a at s.
inline std::vector<Vec> rsds_via_action(const RewardlessMdp& mdp, int s, int a,
                                        std::size_t cap) {
    std::vector<Vec> out;
    for (const Policy& pi : enumerate_policies(mdp, mdp.reachable_from(s), cap)) {
        if (pi(s) != a) continue;
        Vec d = ChainAnalysis(policy_matrix(mdp, pi)).limit_distribution(s);
        bool dup = false;
        for (const Vec& e : out)
            if ((e - d).lpNorm<Eigen::Infinity>() <= 1e-9) { dup = true; break; }
        if (!dup) out.push_back(std::move(d));
    }
    return out;
}

}  // namespace detail

/// P(target is optimal at s) under the reward distribution. gamma = 0 uses
/// greedy next-state argmax, gamma = 1 uses average optimality over RSDs, and
/// interior discounts use a Q-gap of kOptTol per sample.
inline EstimateWithCI optimality_probability(const RewardlessMdp& mdp, int s,
                                             const OptTarget& target, double gamma,
                                             const RewardDistributionSpec& spec,
                                             std::uint64_t n, std::uint64_t seed,
                                             std::size_t cap = 1'000'000) {
    detail::require_bounded(spec);
    if (n < 1) throw input_error("need at least one sample");
    if (gamma < 0.0 || gamma > 1.0)
        throw domain_error("optimality_probability: gamma must be in [0,1]");

    std::function<double(const Vec&)> indicator;

    if (const auto* at = std::get_if<ActionTarget>(&target)) {
        int a = at->action;
        if (!mdp.has_action(s, a)) throw input_error("target action not available");
        if (gamma == 0.0) {
            Vec row = mdp.transition(s, a);
            std::vector<Vec> rows;
            for (int b : mdp.actions_at(s)) rows.push_back(mdp.transition(s, b));
            indicator = [rows = std::move(rows), row = std::move(row)](const Vec& r) {
                double best = -std::numeric_limits<double>::infinity();
                for (const Vec& other : rows) best = std::max(best, other.dot(r));
                return row.dot(r) >= best - kOptTol ? 1.0 : 0.0;
            };
        } else if (gamma == 1.0) {
            Mat all(0, 0);
            {
                std::vector<Rsd> set = rsd_set(mdp, s, cap);
                all.resize(set.size(), mdp.num_states());
                for (std::size_t k = 0; k < set.size(); ++k)
                    all.row(k) = set[k].distribution.transpose();
            }
            std::vector<Vec> via = detail::rsds_via_action(mdp, s, a, cap);
            if (via.empty()) throw input_error("target action reaches no RSD");
            Mat mine(via.size(), mdp.num_states());
            for (std::size_t k = 0; k < via.size(); ++k) mine.row(k) = via[k].transpose();
            indicator = [all = std::move(all), mine = std::move(mine)](const Vec& r) {
                double best = (all * r).maxCoeff();
                return (mine * r).maxCoeff() >= best - kOptTol ? 1.0 : 0.0;
            };
        } else {
            std::vector<int> children = detail::children_of(mdp, s);
            auto oracle = std::make_shared<ValueOracle>(mdp, gamma, children, cap);
            std::vector<std::pair<Vec, bool>> rows;  // (row, is_target_equivalent)
            auto equiv = mdp.equivalent_actions(s, a);
            for (int b : mdp.actions_at(s))
                rows.emplace_back(mdp.transition(s, b),
                                  std::find(equiv.begin(), equiv.end(), b) != equiv.end());
            indicator = [oracle, children, rows = std::move(rows)](const Vec& r) {
                Vec V = oracle->values(r, children);
                Vec full = Vec::Zero(r.size());
                for (std::size_t k = 0; k < children.size(); ++k)
                    full[children[k]] = V[k];
                double best = -std::numeric_limits<double>::infinity();
                double target_best = -std::numeric_limits<double>::infinity();
                for (const auto& [row, is_target] : rows) {
                    double q = row.dot(full);
                    best = std::max(best, q);
                    if (is_target) target_best = std::max(target_best, q);
                }
                return target_best >= best - kOptTol ? 1.0 : 0.0;
            };
        }
    } else if (const auto* vt = std::get_if<VisitTarget>(&target)) {
        if (vt->member_indices.empty()) throw input_error("empty visit target");
        VisitSet set = enumerate_visit_functions(mdp, s, cap);
        if (gamma == 1.0) {
            Mat all(set.members.size(), mdp.num_states());
            for (std::size_t k = 0; k < set.members.size(); ++k)
                all.row(k) = set.members[k].rsd().transpose();
            Mat mine(vt->member_indices.size(), mdp.num_states());
            for (std::size_t k = 0; k < vt->member_indices.size(); ++k)
                mine.row(k) = all.row(vt->member_indices.at(k));
            indicator = [all = std::move(all), mine = std::move(mine)](const Vec& r) {
                return (mine * r).maxCoeff() >= (all * r).maxCoeff() - kOptTol ? 1.0
                                                                               : 0.0;
            };
        } else {
            double g = gamma == 0.0 ? 1e-9 : gamma;  // limit via tiny discount
            Mat all(set.members.size(), mdp.num_states());
            for (std::size_t k = 0; k < set.members.size(); ++k)
                all.row(k) = set.members[k](g).transpose();
            Mat mine(vt->member_indices.size(), mdp.num_states());
            for (std::size_t k = 0; k < vt->member_indices.size(); ++k)
                mine.row(k) = all.row(vt->member_indices.at(k));
            indicator = [all = std::move(all), mine = std::move(mine)](const Vec& r) {
                return (mine * r).maxCoeff() >= (all * r).maxCoeff() - kOptTol ? 1.0
                                                                               : 0.0;
            };
        }
    } else {
        const auto& rt = std::get<RsdTarget>(target);
        if (rt.distributions.empty()) throw input_error("empty rsd target");
        if (gamma != 1.0)
            throw domain_error("rsd targets require gamma = 1");
        std::vector<Rsd> set = rsd_set(mdp, s, cap);
        Mat all(set.size(), mdp.num_states());
        for (std::size_t k = 0; k < set.size(); ++k)
            all.row(k) = set[k].distribution.transpose();
        Mat mine(rt.distributions.size(), mdp.num_states());
        for (std::size_t k = 0; k < rt.distributions.size(); ++k)
            mine.row(k) = rt.distributions[k].transpose();
        indicator = [all = std::move(all), mine = std::move(mine)](const Vec& r) {
            return (mine * r).maxCoeff() >= (all * r).maxCoeff() - kOptTol ? 1.0 : 0.0;
        };
    }

    double mean = parallel_mean(
        n, [&](std::uint64_t i) { return indicator(spec.sample(seed, i)); });
    return {mean, hoeffding_radius_prob(n), n, seed};
}

// ---------------------------------------------------------------------------
// Paired comparisons under common random numbers.

/// E_{s_a}[POWER(s_a,gamma)] - E_{s_a'}[POWER(s_a',gamma)], paired per sample.
inline EstimateWithCI power_seeking_compare(const RewardlessMdp& mdp, int s,
                                            int a, int a_prime, double gamma,
                                            const RewardDistributionSpec& spec,
                                            std::uint64_t n, std::uint64_t seed,
                                            std::size_t cap = 1'000'000) {
    detail::require_bounded(spec);
    if (!mdp.has_action(s, a) || !mdp.has_action(s, a_prime))
        throw input_error("power_seeking_compare: action not available");
    Vec wa = mdp.transition(s, a), wb = mdp.transition(s, a_prime);
    Vec w = wa - wb;
    std::vector<int> support;
    for (int t = 0; t < mdp.num_states(); ++t)
        if (w[t] != 0.0) support.push_back(t);
    if (support.empty()) return {0.0, 0.0, n, seed};  // equivalent actions

    std::function<double(const Vec&)> sample_diff;
    if (gamma == 1.0) {
        auto oracle = std::make_shared<GainOracle>(mdp, support, cap);
        sample_diff = [oracle, support, w](const Vec& r) {
            double acc = 0.0;
            for (int t : support) acc += w[t] * oracle->gain(r, t);
            return acc;
        };
    } else if (gamma == 0.0) {
        // POWER(s', 0) is the expected best child inner product.
        std::vector<Mat> kids(mdp.num_states());
        for (int t : support) {
            auto cs = nd_child_distributions(mdp, t);
            Mat D(cs.size(), mdp.num_states());
            for (std::size_t k = 0; k < cs.size(); ++k) D.row(k) = cs[k].next.transpose();
            kids[t] = std::move(D);
        }
        sample_diff = [kids = std::move(kids), support, w](const Vec& r) {
            double acc = 0.0;
            for (int t : support) acc += w[t] * (kids[t] * r).maxCoeff();
            return acc;
        };
    } else {
        auto oracle = std::make_shared<ValueOracle>(mdp, gamma, support, cap);
        double scale = (1.0 - gamma) / gamma;
        sample_diff = [oracle, support, w, scale](const Vec& r) {
            double acc = 0.0;
            for (int t : support) acc += w[t] * scale * (oracle->value(r, t) - r[t]);
            return acc;
        };
    }
    double mean = parallel_mean(
        n, [&](std::uint64_t i) { return sample_diff(spec.sample(seed, i)); });
    return {mean, hoeffding_radius(n, 2.0 * (spec.upper() - spec.lower())), n, seed};
}

/// Attainable utility distance between state distributions, common samples.
inline EstimateWithCI au_distance(const RewardlessMdp& mdp, const Vec& delta,
                                  const Vec& delta_prime, double gamma,
                                  const RewardDistributionSpec& spec,
                                  std::uint64_t n, std::uint64_t seed,
                                  std::size_t cap = 1'000'000) {
    detail::require_bounded(spec);
    if (delta.size() != mdp.num_states() || delta_prime.size() != mdp.num_states())
        throw input_error("au_distance: state distribution dimension mismatch");
    if (std::abs(delta.sum() - 1.0) > 1e-9 || std::abs(delta_prime.sum() - 1.0) > 1e-9 ||
        delta.minCoeff() < 0.0 || delta_prime.minCoeff() < 0.0)
        throw input_error("au_distance: invalid state distribution");
    if (!(gamma >= 0.0 && gamma < 1.0))
        throw domain_error("au_distance: gamma must be in [0,1); use the "
                           "normalized variant at gamma = 1");
    Vec w = delta - delta_prime;
    std::vector<int> support;
    for (int t = 0; t < mdp.num_states(); ++t)
        if (w[t] != 0.0) support.push_back(t);
    if (support.empty()) return {0.0, 0.0, n, seed};
    double g = gamma == 0.0 ? 1e-12 : gamma;
    ValueOracle oracle(mdp, g, support, cap);
    double mean = parallel_mean(n, [&](std::uint64_t i) {
        Vec r = spec.sample(seed, i);
        double acc = 0.0;
        for (int t : support) acc += w[t] * oracle.value(r, t);
        return std::abs(acc);
    });
    double width = (spec.upper() - spec.lower()) / (1.0 - gamma);
    return {mean, hoeffding_radius(n, width), n, seed};
}

/// (1-gamma) d_au, defined on all of [0,1] via the gain limit at gamma = 1.
inline EstimateWithCI au_distance_normalized(const RewardlessMdp& mdp,
                                             const Vec& delta,
                                             const Vec& delta_prime, double gamma,
                                             const RewardDistributionSpec& spec,
                                             std::uint64_t n, std::uint64_t seed,
                                             std::size_t cap = 1'000'000) {
    if (gamma < 1.0) {
        EstimateWithCI est = au_distance(mdp, delta, delta_prime, gamma, spec, n, seed, cap);
        est.estimate *= (1.0 - gamma);
        est.ci_radius *= (1.0 - gamma);
        return est;
    }
    detail::require_bounded(spec);
    Vec w = delta - delta_prime;
    std::vector<int> support;
    for (int t = 0; t < mdp.num_states(); ++t)
        if (w[t] != 0.0) support.push_back(t);
    if (support.empty()) return {0.0, 0.0, n, seed};
    GainOracle oracle(mdp, support, cap);
    double mean = parallel_mean(n, [&](std::uint64_t i) {
        Vec r = spec.sample(seed, i);
        double acc = 0.0;
        for (int t : support) acc += w[t] * oracle.gain(r, t);
        return std::abs(acc);
    });
    return {mean, hoeffding_radius(n, spec.upper() - spec.lower()), n, seed};
}

// ---------------------------------------------------------------------------
// Orbit votes.

struct OrbitVote {
    std::uint64_t count_gt = 0;
    std::uint64_t count_lt = 0;
    std::uint64_t count_eq = 0;
    bool exact = false;  // full orbit enumerated rather than sampled
};

struct PowerVoteQuantity { int s, s_prime; double gamma; };
struct OptProbVoteQuantity { int s, a, a_prime; double gamma; };
using VoteQuantity = std::variant<PowerVoteQuantity, OptProbVoteQuantity>;

namespace detail {

inline std::vector<StatePermutation> orbit_permutations(int n, bool exact,
                                                        std::uint64_t samples,
                                                        std::uint64_t seed) {
    std::vector<StatePermutation> out;
    if (exact) {
        double fact = 1.0;
        for (int i = 2; i <= n; ++i) fact *= i;
        if (fact > 3'628'800.0)
            throw size_error("orbit enumeration needs |S|! <= 10!; "
                             "pass exact=false to sample permutations");
        std::vector<int> map(n);
        std::iota(map.begin(), map.end(), 0);
        do {
            out.emplace_back(map);
        } while (std::next_permutation(map.begin(), map.end()));
    } else {
        for (std::uint64_t k = 0; k < samples; ++k) {
            std::vector<int> map(n);
            std::iota(map.begin(), map.end(), 0);
            CounterRng rng(seed, k, 0x0B17);
            for (int i = n - 1; i > 0; --i)
                std::swap(map[i], map[rng.below(static_cast<std::uint64_t>(i) + 1)]);
            out.emplace_back(std::move(map));
        }
    }
    return out;
}

}  // namespace detail

/// Tallies, over the orbit of the reward distribution, how often the first
/// quantity strictly beats the second. An iid spec has a one-element orbit.
/// `mc_samples` only matters for non-degenerate specs, where each orbit
/// element's quantities are estimated with common random numbers.
inline OrbitVote orbit_vote(const RewardlessMdp& mdp, const VoteQuantity& quantity,
                            const RewardDistributionSpec& spec, bool exact,
                            std::uint64_t mc_samples = 10'000,
                            std::uint64_t perm_samples = 1'000,
                            std::uint64_t seed = 0) {
    OrbitVote vote;
    std::vector<StatePermutation> perms;
    if (spec.is_continuous_iid()) {
        perms.push_back(StatePermutation::identity(mdp.num_states()));
        vote.exact = true;
    } else {
        perms = detail::orbit_permutations(mdp.num_states(), exact, perm_samples, seed);
        vote.exact = exact;
        if (exact && spec.is_degenerate()) {
            // Distinct pushforwards only: dedupe by the permuted mean vector.
            std::vector<Vec> seen;
            std::vector<StatePermutation> unique;
            for (const auto& phi : perms) {
                Vec image = phi.apply(spec.mean());
                bool dup = false;
                for (const Vec& v : seen)
                    if ((v - image).lpNorm<Eigen::Infinity>() <= 1e-12) {
                        dup = true;
                        break;
                    }
                if (!dup) {
                    seen.push_back(std::move(image));
                    unique.push_back(phi);
                }
            }
            perms = std::move(unique);
        }
    }

    auto eval_pair = [&](const RewardDistributionSpec& d) -> std::pair<double, double> {
        if (const auto* pq = std::get_if<PowerVoteQuantity>(&quantity)) {
            if (d.is_degenerate()) {
                Vec r = d.mean();
                auto exact_power = [&](int state) {
                    if (pq->gamma == 1.0)
                        return GainOracle(mdp, {state}).gain(r, state);
                    if (pq->gamma == 0.0) {
                        auto cs = nd_child_distributions(mdp, state);
                        double best = -std::numeric_limits<double>::infinity();
                        for (const auto& c : cs) best = std::max(best, c.next.dot(r));
                        return best;
                    }
                    double V = optimal_value(mdp, RewardFunction::states(r), pq->gamma)[state];
                    return (1.0 - pq->gamma) / pq->gamma * (V - r[state]);
                };
                return {exact_power(pq->s), exact_power(pq->s_prime)};
            }
            return {power_any(mdp, pq->s, pq->gamma, d, mc_samples, seed).estimate,
                    power_any(mdp, pq->s_prime, pq->gamma, d, mc_samples, seed).estimate};
        }
        const auto& oq = std::get<OptProbVoteQuantity>(quantity);
        std::uint64_t n = d.is_degenerate() ? 1 : mc_samples;
        return {optimality_probability(mdp, oq.s, ActionTarget{oq.a}, oq.gamma, d,
                                       n, seed)
                    .estimate,
                optimality_probability(mdp, oq.s, ActionTarget{oq.a_prime}, oq.gamma,
                                       d, n, seed)
                    .estimate};
    };

    for (const auto& phi : perms) {
        RewardDistributionSpec permuted = RewardDistributionSpec::permuted(spec, phi);
        auto [q1, q2] = eval_pair(permuted);
        if (q1 > q2 + 1e-9)
            ++vote.count_gt;
        else if (q2 > q1 + 1e-9)
            ++vote.count_lt;
        else
            ++vote.count_eq;
    }
    return vote;
}

}  // namespace powermdp
