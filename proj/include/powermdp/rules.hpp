#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <variant>
#include <vector>

#include "powermdp/errors.hpp"
#include "powermdp/mdp.hpp"

namespace powermdp {

/// Finite decision problem over outcome lotteries C = A u B (disjoint).
struct OutcomeProblem {
    std::vector<Vec> outcomes;   // the lotteries, indexed 0..|C|-1
    std::vector<int> label_a;    // indices of A
    std::vector<int> label_b;    // indices of B

    int dim() const { return outcomes.empty() ? 0 : static_cast<int>(outcomes.front().size()); }

    void validate() const {
        if (label_a.empty() || label_b.empty())
            throw input_error("outcome problem: A and B must be non-empty");
        std::vector<int> all = label_a;
        all.insert(all.end(), label_b.begin(), label_b.end());
        std::sort(all.begin(), all.end());
        if (std::adjacent_find(all.begin(), all.end()) != all.end())
            throw input_error("outcome problem: A and B overlap");
        if (all.size() != outcomes.size() || all.front() != 0 ||
            all.back() != static_cast<int>(outcomes.size()) - 1)
            throw input_error("outcome problem: labels must partition C");
        for (const Vec& x : outcomes)
            if (!x.allFinite()) throw input_error("outcome problem: non-finite lottery");
    }
};

struct ArgmaxRule {};
struct FractionOptimalRule {};
struct AntiArgmaxRule {};
struct BoltzmannRule { double temperature; };
struct SatisficeRule { double threshold; };
struct BestOfKRule { int k; };
struct QuantilizerRule {
    double q;
    std::vector<double> base;  // P over C; empty means uniform
};
struct UniformRandomRule {};
struct StubbornRule { int index; };

using DecisionRule =
    std::variant<ArgmaxRule, FractionOptimalRule, AntiArgmaxRule, BoltzmannRule,
                 SatisficeRule, BestOfKRule, QuantilizerRule, UniformRandomRule,
                 StubbornRule>;

namespace detail {

inline std::vector<double> expected_utilities(const OutcomeProblem& p, const Vec& u) {
    std::vector<double> v(p.outcomes.size());
    for (std::size_t i = 0; i < p.outcomes.size(); ++i) v[i] = p.outcomes[i].dot(u);
    return v;
}

inline std::vector<char> member_mask(const OutcomeProblem& p, const std::vector<int>& X) {
    std::vector<char> in(p.outcomes.size(), 0);
    for (int i : X) in.at(i) = 1;
    return in;
}

}  // namespace detail

/// Closed-form quantilizer probability (threshold ties share the leftover
/// quantile mass in proportion to the base distribution).
inline double quantilize_prob(double q, const std::vector<double>& base,
                              const std::vector<int>& X, const OutcomeProblem& p,
                              const Vec& u) {
    if (!(q > 0.0 && q <= 1.0)) throw input_error("quantilizer: q must be in (0,1]");
    const std::size_t m = p.outcomes.size();
    std::vector<double> P = base;
    if (P.empty()) P.assign(m, 1.0 / static_cast<double>(m));
    if (P.size() != m) throw input_error("quantilizer: base distribution size mismatch");
    std::vector<double> v = detail::expected_utilities(p, u);

    // q-quantile threshold M: inf { M : P(value > M) <= q }.
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return v[a] > v[b]; });
    double mass_above = 0.0;
    double threshold = -std::numeric_limits<double>::infinity();
    bool all_above = true;
    for (std::size_t k = 0; k < m;) {
        std::size_t j = k;
        double group_mass = 0.0;
        while (j < m && v[order[j]] == v[order[k]]) group_mass += P[order[j++]];
        if (mass_above + group_mass > q + 1e-15) {
            threshold = v[order[k]];
            all_above = false;
            break;
        }
        mass_above += group_mass;
        k = j;
    }

    auto in_x = detail::member_mask(p, X);
    double out = 0.0;
    if (all_above) {
        for (std::size_t i = 0; i < m; ++i)
            if (in_x[i]) out += P[i] / q;
        return out;
    }
    double tie_mass = 0.0;
    double strict_mass = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        if (v[i] > threshold) strict_mass += P[i];
        if (v[i] == threshold) tie_mass += P[i];
    }
    for (std::size_t i = 0; i < m; ++i) {
        if (!in_x[i]) continue;
        if (v[i] > threshold) {
            out += P[i] / q;
        } else if (v[i] == threshold && P[i] > 0.0) {
            out += P[i] / q * (q - strict_mass) / tie_mass;
        }
    }
    return out;
}

/// Probability that the rule selects an element of X (exact closed forms).
inline double decision_prob(const DecisionRule& rule, const std::vector<int>& X,
                            const OutcomeProblem& p, const Vec& u) {
    p.validate();
    for (int i : X)
        if (i < 0 || i >= static_cast<int>(p.outcomes.size()))
            throw input_error("decision_prob: X not a subset of C");
    std::vector<double> v = detail::expected_utilities(p, u);
    auto in_x = detail::member_mask(p, X);
    const std::size_t m = p.outcomes.size();

    if (std::holds_alternative<ArgmaxRule>(rule)) {
        double best = *std::max_element(v.begin(), v.end());
        for (std::size_t i = 0; i < m; ++i)
            if (in_x[i] && v[i] >= best) return 1.0;
        return 0.0;
    }
    if (std::holds_alternative<FractionOptimalRule>(rule)) {
        double best = *std::max_element(v.begin(), v.end());
        int ties = 0, mine = 0;
        for (std::size_t i = 0; i < m; ++i)
            if (v[i] == best) {
                ++ties;
                if (in_x[i]) ++mine;
            }
        return static_cast<double>(mine) / ties;
    }
    if (std::holds_alternative<AntiArgmaxRule>(rule)) {
        double worst = *std::min_element(v.begin(), v.end());
        for (std::size_t i = 0; i < m; ++i)
            if (in_x[i] && v[i] <= worst) return 1.0;
        return 0.0;
    }
    if (const auto* b = std::get_if<BoltzmannRule>(&rule)) {
        if (!(b->temperature > 0.0))
            throw input_error("boltzmann: temperature must be positive");
        double shift = *std::max_element(v.begin(), v.end());
        // Weights are accumulated in sorted order so the result is invariant,
        // bit for bit, under joint permutation of outcomes and utilities.
        std::vector<double> wx, wc;
        for (std::size_t i = 0; i < m; ++i) {
            double w = std::exp((v[i] - shift) / b->temperature);
            wc.push_back(w);
            if (in_x[i]) wx.push_back(w);
        }
        std::sort(wx.begin(), wx.end());
        std::sort(wc.begin(), wc.end());
        double num = 0.0, den = 0.0;
        for (double w : wx) num += w;
        for (double w : wc) den += w;
        return num / den;
    }
    if (const auto* sat = std::get_if<SatisficeRule>(&rule)) {
        int den = 0, num = 0;
        for (std::size_t i = 0; i < m; ++i)
            if (v[i] >= sat->threshold) {
                ++den;
                if (in_x[i]) ++num;
            }
        return den == 0 ? 0.0 : static_cast<double>(num) / den;
    }
    if (const auto* bk = std::get_if<BestOfKRule>(&rule)) {
        if (bk->k < 1) throw input_error("best-of-k: k must be >= 1");
        // Group outcomes by utility; the drawn maximum lands in group G with
        // probability (cum<=G/k draws) - (cum<G), and ties within G split
        // uniformly, contributing |X n G|/|G|.
        std::map<double, std::pair<int, int>> groups;  // value -> (|G|, |X n G|)
        for (std::size_t i = 0; i < m; ++i) {
            auto& g = groups[v[i]];
            ++g.first;
            if (in_x[i]) ++g.second;
        }
        double out = 0.0;
        double cum_below = 0.0;
        for (const auto& [value, counts] : groups) {  // ascending utility
            double cum_incl = cum_below + counts.first;
            double p_max_here = std::pow(cum_incl / static_cast<double>(m), bk->k) -
                                std::pow(cum_below / static_cast<double>(m), bk->k);
            out += p_max_here * counts.second / counts.first;
            cum_below = cum_incl;
        }
        return out;
    }
    if (const auto* qt = std::get_if<QuantilizerRule>(&rule))
        return quantilize_prob(qt->q, qt->base, X, p, u);
    if (std::holds_alternative<UniformRandomRule>(rule))
        return static_cast<double>(X.size()) / static_cast<double>(m);
    if (const auto* st = std::get_if<StubbornRule>(&rule))
        return in_x.at(st->index) ? 1.0 : 0.0;
    throw input_error("decision_prob: unknown rule");
}

/// Full-orbit tendency tally: over every permutation of u, does the rule
/// prefer B over A at least n times as often as the reverse?
struct OrbitTendency {
    std::uint64_t count_b = 0;  // f(B|u') > f(A|u')
    std::uint64_t count_a = 0;  // f(A|u') > f(B|u')
    std::uint64_t count_eq = 0;
    bool holds(std::uint64_t n) const { return count_b >= n * count_a; }
};

inline OrbitTendency orbit_tendency_check(const DecisionRule& rule,
                                          const OutcomeProblem& p, const Vec& u,
                                          std::uint64_t n) {
    p.validate();
    const int d = p.dim();
    if (d > 8) throw size_error("orbit tendency check capped at d = 8 outcomes");
    if (u.size() != d) throw input_error("utility dimension mismatch");
    (void)n;
    OrbitTendency tally;
    std::vector<int> perm(d);
    std::iota(perm.begin(), perm.end(), 0);
    do {
        Vec pu(d);
        for (int i = 0; i < d; ++i) pu[perm[i]] = u[i];
        double fb = decision_prob(rule, p.label_b, p, pu);
        double fa = decision_prob(rule, p.label_a, p, pu);
        if (fb > fa)
            ++tally.count_b;
        else if (fa > fb)
            ++tally.count_a;
        else
            ++tally.count_eq;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return tally;
}

/// The three-card problem used throughout the decision-rule tests: C has
/// one-hot lotteries (spade, heart, diamond), A = {diamond}, B = {spade, heart}.
inline OutcomeProblem card_problem() {
    OutcomeProblem p;
    for (int i = 0; i < 3; ++i) {
        Vec e = Vec::Zero(3);
        e[i] = 1.0;
        p.outcomes.push_back(e);
    }
    p.label_b = {0, 1};  // spade, heart
    p.label_a = {2};     // diamond
    return p;
}

}  // namespace powermdp
