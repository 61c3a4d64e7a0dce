#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <fstream>
#include <string>
#include <vector>

#include "powermdp/errors.hpp"
#include "powermdp/markov_chain.hpp"
#include "powermdp/mdp.hpp"
#include "powermdp/simplex.hpp"
#include "powermdp/solve.hpp"

namespace powermdp {

inline constexpr std::array<double, 3> kWitnessGammas{0.25, 0.5, 0.75};
inline constexpr double kDedupTol = 1e-10;
inline constexpr double kLpMarginTol = 1e-9;

/// f^pi_s as an evaluable function of gamma: f(gamma) = (I - gamma T^pi)^-1 e_s.
class VisitDistributionFunction {
public:
    VisitDistributionFunction(const RewardlessMdp& mdp, Policy pi, int start)
        : pi_(std::move(pi)), start_(start), T_(policy_matrix(mdp, pi_)) {}

    Vec operator()(double gamma) const {
        if (!(gamma >= 0.0 && gamma < 1.0))
            throw domain_error("visit distribution: gamma must be in [0,1); "
                               "use rsd for the gamma=1 limit");
        const int n = static_cast<int>(T_.rows());
        Vec e = Vec::Zero(n);
        e[start_] = 1.0;
        return (Mat::Identity(n, n) - gamma * T_).partialPivLu().solve(e);
    }

    const Policy& policy() const { return pi_; }
    int start() const { return start_; }

    /// (1-gamma) f(gamma) in the gamma -> 1 limit.
    Vec rsd() const { return ChainAnalysis(T_).limit_distribution(start_); }

private:
    Policy pi_;
    int start_;
    Mat T_;
};

inline Vec visit_distribution(const RewardlessMdp& mdp, const Policy& pi,
                              int s, double gamma) {
    return VisitDistributionFunction(mdp, pi, s)(gamma);
}

/// Distinct visit distribution functions from one start state. Members are
/// order-normalized lexicographically by their value at gamma = 1/2 so the
/// enumeration is deterministic.
struct VisitSet {
    int start = 0;
    std::vector<VisitDistributionFunction> members;
    std::vector<Vec> at_half;  // cached f(1/2) per member
};

namespace detail {

inline bool lex_less(const Vec& a, const Vec& b) {
    for (int i = 0; i < a.size(); ++i) {
        if (a[i] < b[i] - 1e-14) return true;
        if (a[i] > b[i] + 1e-14) return false;
    }
    return false;
}

}  // namespace detail

/// All distinct f^pi_s. Policy choices at states unreachable from s cannot
/// affect f, so enumeration is restricted to the reachable set. Equality is
/// decided by agreement at the three witness discounts.
inline VisitSet enumerate_visit_functions(const RewardlessMdp& mdp, int s,
                                          std::size_t cap = 1'000'000) {
    VisitSet set;
    set.start = s;
    std::vector<std::vector<Vec>> signatures;  // per member, per witness gamma
    for (const Policy& pi : enumerate_policies(mdp, mdp.reachable_from(s), cap)) {
        VisitDistributionFunction f(mdp, pi, s);
        std::vector<Vec> sig;
        sig.reserve(kWitnessGammas.size());
        for (double g : kWitnessGammas) sig.push_back(f(g));
        bool dup = false;
        for (const auto& other : signatures) {
            bool same = true;
            for (std::size_t k = 0; k < sig.size(); ++k)
                if ((sig[k] - other[k]).lpNorm<Eigen::Infinity>() > kDedupTol) {
                    same = false;
                    break;
                }
            if (same) { dup = true; break; }
        }
        if (!dup) {
            set.members.push_back(std::move(f));
            set.at_half.push_back(sig[1]);
            signatures.push_back(std::move(sig));
        }
    }
    std::vector<std::size_t> order(set.members.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return detail::lex_less(set.at_half[a], set.at_half[b]);
    });
    VisitSet sorted;
    sorted.start = s;
    for (std::size_t i : order) {
        sorted.members.push_back(std::move(set.members[i]));
        sorted.at_half.push_back(std::move(set.at_half[i]));
    }
    return sorted;
}

/// Non-domination verdicts for a family of vectors: member i is kept when
/// some reward in the unit box makes it strictly better than all others.
struct NonDominationReport {
    std::vector<int> non_dominated;   // indices into the input family
    std::vector<int> indeterminate;   // LP margin within +-1e-9 of zero
    std::vector<Vec> witnesses;       // per non-dominated member, same order
    std::vector<double> margins;      // LP optimum per non-dominated member

    bool contains(int i) const {
        return std::find(non_dominated.begin(), non_dominated.end(), i) !=
               non_dominated.end();
    }
};

inline NonDominationReport non_dominated_vectors(const std::vector<Vec>& family) {
    NonDominationReport report;
    const int n = static_cast<int>(family.size());
    for (int i = 0; i < n; ++i) {
        std::vector<double> cand(family[i].data(),
                                 family[i].data() + family[i].size());
        std::vector<std::vector<double>> rivals;
        for (int j = 0; j < n; ++j)
            if (j != i)
                rivals.emplace_back(family[j].data(),
                                    family[j].data() + family[j].size());
        StrictOptResult lp = max_strict_margin(cand, rivals);
        if (std::abs(lp.margin) <= kLpMarginTol && !rivals.empty()) {
            report.indeterminate.push_back(i);
            continue;
        }
        if (lp.margin > kLpMarginTol) {
            report.non_dominated.push_back(i);
            report.witnesses.push_back(
                Eigen::Map<const Vec>(lp.witness.data(), lp.witness.size()));
            report.margins.push_back(lp.margin);
        }
    }
    return report;
}

/// Fnd(s): members strictly optimal for some reward at gamma = 1/2. The
/// single-discount test suffices because distinct members that are optimal
/// anywhere are strictly optimal at every interior discount.
inline NonDominationReport non_dominated(const VisitSet& set) {
    return non_dominated_vectors(set.at_half);
}

// ---------------------------------------------------------------------------
// Recurrent state distributions.

struct Rsd {
    Vec distribution;
    Policy policy;
    int start = 0;
};

inline Rsd rsd(const RewardlessMdp& mdp, const Policy& pi, int s) {
    return Rsd{ChainAnalysis(policy_matrix(mdp, pi)).limit_distribution(s), pi, s};
}

/// Distinct RSDs inducible from s, lexicographically ordered.
inline std::vector<Rsd> rsd_set(const RewardlessMdp& mdp, int s,
                                std::size_t cap = 1'000'000) {
    std::vector<Rsd> out;
    for (const Policy& pi : enumerate_policies(mdp, mdp.reachable_from(s), cap)) {
        Rsd cand = rsd(mdp, pi, s);
        bool dup = false;
        for (const Rsd& d : out)
            if ((d.distribution - cand.distribution).lpNorm<Eigen::Infinity>() <=
                1e-9) {
                dup = true;
                break;
            }
        if (!dup) out.push_back(std::move(cand));
    }
    std::sort(out.begin(), out.end(), [](const Rsd& a, const Rsd& b) {
        return detail::lex_less(a.distribution, b.distribution);
    });
    return out;
}

/// RSDnd(s): the RSDs that strictly maximize average reward for some reward.
inline std::vector<Rsd> rsd_nondominated(const RewardlessMdp& mdp, int s,
                                         std::size_t cap = 1'000'000) {
    std::vector<Rsd> all = rsd_set(mdp, s, cap);
    std::vector<Vec> family;
    for (const Rsd& d : all) family.push_back(d.distribution);
    NonDominationReport nd = non_dominated_vectors(family);
    std::vector<Rsd> out;
    for (int i : nd.non_dominated) out.push_back(all[i]);
    return out;
}

// ---------------------------------------------------------------------------
// Child state distributions Ch(s) = { T(s,a) | a }.

struct ChildDistribution {
    Vec next;
    int action = 0;
};

inline std::vector<ChildDistribution> child_distributions(const RewardlessMdp& mdp,
                                                          int s) {
    std::vector<ChildDistribution> out;
    for (int a : mdp.actions_at(s)) {
        const Vec& row = mdp.transition(s, a);
        bool dup = false;
        for (const auto& c : out)
            if ((c.next - row).lpNorm<Eigen::Infinity>() <= kActionEquivTol) {
                dup = true;
                break;
            }
        if (!dup) out.push_back({row, a});
    }
    return out;
}

inline std::vector<ChildDistribution> nd_child_distributions(
    const RewardlessMdp& mdp, int s) {
    std::vector<ChildDistribution> all = child_distributions(mdp, s);
    std::vector<Vec> family;
    for (const auto& c : all) family.push_back(c.next);
    NonDominationReport nd = non_dominated_vectors(family);
    std::vector<ChildDistribution> out;
    for (int i : nd.non_dominated) out.push_back(all[i]);
    return out;
}

// ---------------------------------------------------------------------------
// CSV export: one row per function, one column per state, one file per
// witness discount.

inline void export_visit_set_csv(const RewardlessMdp& mdp, const VisitSet& set,
                                 const std::string& path_prefix) {
    for (double g : kWitnessGammas) {
        std::ofstream out(path_prefix + "_gamma" + std::to_string(g) + ".csv");
        out << "member";
        for (const auto& name : mdp.state_names()) out << "," << name;
        out << "\n";
        for (std::size_t i = 0; i < set.members.size(); ++i) {
            Vec f = set.members[i](g);
            out << i;
            for (int t = 0; t < f.size(); ++t) out << "," << f[t];
            out << "\n";
        }
    }
}

inline void export_rsds_csv(const RewardlessMdp& mdp,
                            const std::vector<Rsd>& rsds,
                            const std::string& path) {
    std::ofstream out(path);
    out << "member";
    for (const auto& name : mdp.state_names()) out << "," << name;
    out << "\n";
    for (std::size_t i = 0; i < rsds.size(); ++i) {
        out << i;
        for (int t = 0; t < rsds[i].distribution.size(); ++t)
            out << "," << rsds[i].distribution[t];
        out << "\n";
    }
}

}  // namespace powermdp
