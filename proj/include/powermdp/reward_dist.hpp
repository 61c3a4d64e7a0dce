#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "powermdp/errors.hpp"
#include "powermdp/mdp.hpp"
#include "powermdp/permutation.hpp"
#include "powermdp/rng.hpp"

namespace powermdp {

/// One-dimensional marginal on the unit interval: uniform, CDF x^k, or a
/// quantile (inverse-CDF) table evaluated by linear interpolation.
struct Marginal {
    enum class Kind { Uniform, CdfPower, QuantileTable };
    Kind kind = Kind::Uniform;
    double power = 1.0;                 // for CdfPower: CDF(x) = x^power
    std::vector<double> quantiles;      // values of the inverse CDF on [0,1]

    static Marginal uniform() { return {}; }
    static Marginal cdf_power(double k) {
        if (!(k > 0.0)) throw input_error("cdfpow: exponent must be positive");
        return {Kind::CdfPower, k, {}};
    }
    static Marginal quantile_table(std::vector<double> q) {
        if (q.size() < 2) throw input_error("quantile table needs >= 2 points");
        for (std::size_t i = 0; i + 1 < q.size(); ++i)
            if (q[i] > q[i + 1])
                throw input_error("quantile table must be non-decreasing");
        if (q.front() < 0.0 || q.back() > 1.0)
            throw input_error("quantile table must map into [0,1]");
        return {Kind::QuantileTable, 1.0, std::move(q)};
    }

    double sample(double u) const {
        switch (kind) {
            case Kind::Uniform: return u;
            case Kind::CdfPower: return std::pow(u, 1.0 / power);
            case Kind::QuantileTable: {
                double pos = u * (quantiles.size() - 1);
                auto lo = static_cast<std::size_t>(pos);
                if (lo + 1 >= quantiles.size()) return quantiles.back();
                double frac = pos - static_cast<double>(lo);
                return quantiles[lo] * (1.0 - frac) + quantiles[lo + 1] * frac;
            }
        }
        return u;
    }

    double mean() const {
        switch (kind) {
            case Kind::Uniform: return 0.5;
            case Kind::CdfPower: return power / (power + 1.0);
            case Kind::QuantileTable: {
                double acc = 0.0;
                for (std::size_t i = 0; i + 1 < quantiles.size(); ++i)
                    acc += 0.5 * (quantiles[i] + quantiles[i + 1]);
                return acc / (quantiles.size() - 1);
            }
        }
        return 0.5;
    }
};

/// Sampleable distribution over reward vectors. Draws are a pure function of
/// (seed, sample index), with one stream per state, so the same sample can be
/// regenerated independently on any worker.
class RewardDistributionSpec {
public:
    enum class Kind { Iid, Product, Degenerate, Mixture, Permuted };

    static RewardDistributionSpec iid(int num_states, Marginal marginal) {
        RewardDistributionSpec d;
        d.kind_ = Kind::Iid;
        d.num_states_ = num_states;
        d.marginals_ = {std::move(marginal)};
        d.lo_ = 0.0;
        d.hi_ = 1.0;
        return d;
    }

    static RewardDistributionSpec product(std::vector<Marginal> marginals) {
        if (marginals.empty()) throw input_error("product spec: no marginals");
        RewardDistributionSpec d;
        d.kind_ = Kind::Product;
        d.num_states_ = static_cast<int>(marginals.size());
        d.marginals_ = std::move(marginals);
        d.lo_ = 0.0;
        d.hi_ = 1.0;
        return d;
    }

    static RewardDistributionSpec degenerate(Vec r) {
        if (!r.allFinite()) throw input_error("degenerate spec: non-finite reward");
        RewardDistributionSpec d;
        d.kind_ = Kind::Degenerate;
        d.num_states_ = static_cast<int>(r.size());
        d.lo_ = r.minCoeff();
        d.hi_ = r.maxCoeff();
        d.fixed_ = std::move(r);
        return d;
    }

    static RewardDistributionSpec mixture(std::vector<double> weights,
                                          std::vector<RewardDistributionSpec> parts) {
        if (weights.size() != parts.size() || parts.empty())
            throw input_error("mixture spec: weights and parts mismatch");
        double total = 0.0;
        for (double w : weights) {
            if (w < 0.0) throw input_error("mixture spec: negative weight");
            total += w;
        }
        if (std::abs(total - 1.0) > 1e-9)
            throw input_error("mixture spec: weights must sum to 1");
        RewardDistributionSpec d;
        d.kind_ = Kind::Mixture;
        d.num_states_ = parts.front().num_states();
        d.lo_ = parts.front().lower();
        d.hi_ = parts.front().upper();
        for (const auto& part : parts) {
            if (part.num_states() != d.num_states_)
                throw input_error("mixture spec: dimension mismatch");
            d.lo_ = std::min(d.lo_, part.lower());
            d.hi_ = std::max(d.hi_, part.upper());
        }
        d.weights_ = std::move(weights);
        d.parts_ = std::make_shared<std::vector<RewardDistributionSpec>>(std::move(parts));
        return d;
    }

    static RewardDistributionSpec permuted(RewardDistributionSpec base,
                                           StatePermutation phi) {
        if (phi.size() != base.num_states())
            throw input_error("permuted spec: permutation dimension mismatch");
        RewardDistributionSpec d;
        d.kind_ = Kind::Permuted;
        d.num_states_ = base.num_states();
        d.lo_ = base.lower();
        d.hi_ = base.upper();
        d.parts_ = std::make_shared<std::vector<RewardDistributionSpec>>();
        d.parts_->push_back(std::move(base));
        d.perm_ = std::make_shared<StatePermutation>(std::move(phi));
        return d;
    }

    int num_states() const { return num_states_; }
    double lower() const { return lo_; }
    double upper() const { return hi_; }
    Kind kind() const { return kind_; }
    bool is_degenerate() const {
        if (kind_ == Kind::Degenerate) return true;
        if (kind_ == Kind::Permuted) return parts_->front().is_degenerate();
        return false;
    }
    bool is_continuous_iid() const { return kind_ == Kind::Iid; }

    /// Deterministic draw for (seed, index).
    Vec sample(std::uint64_t seed, std::uint64_t index) const {
        switch (kind_) {
            case Kind::Degenerate:
                return fixed_;
            case Kind::Iid: {
                Vec r(num_states_);
                for (int s = 0; s < num_states_; ++s)
                    r[s] = marginals_[0].sample(counter_uniform(seed, index, s, 0));
                return r;
            }
            case Kind::Product: {
                Vec r(num_states_);
                for (int s = 0; s < num_states_; ++s)
                    r[s] = marginals_[s].sample(counter_uniform(seed, index, s, 0));
                return r;
            }
            case Kind::Mixture: {
                double u = counter_uniform(seed, index, kMixtureStream, 0);
                double acc = 0.0;
                for (std::size_t k = 0; k < weights_.size(); ++k) {
                    acc += weights_[k];
                    if (u < acc || k + 1 == weights_.size())
                        return (*parts_)[k].sample(seed, index);
                }
                return parts_->back().sample(seed, index);
            }
            case Kind::Permuted:
                return perm_->apply(parts_->front().sample(seed, index));
        }
        throw input_error("reward spec: unknown kind");
    }

    /// Exact mean reward vector.
    Vec mean() const {
        switch (kind_) {
            case Kind::Degenerate:
                return fixed_;
            case Kind::Iid:
                return Vec::Constant(num_states_, marginals_[0].mean());
            case Kind::Product: {
                Vec m(num_states_);
                for (int s = 0; s < num_states_; ++s) m[s] = marginals_[s].mean();
                return m;
            }
            case Kind::Mixture: {
                Vec m = Vec::Zero(num_states_);
                for (std::size_t k = 0; k < weights_.size(); ++k)
                    m += weights_[k] * (*parts_)[k].mean();
                return m;
            }
            case Kind::Permuted:
                return perm_->apply(parts_->front().mean());
        }
        throw input_error("reward spec: unknown kind");
    }

    /// Finite support when the distribution is degenerate or a mixture of such;
    /// empty otherwise. Pairs of (weight, reward vector).
    std::vector<std::pair<double, Vec>> finite_support() const {
        switch (kind_) {
            case Kind::Degenerate:
                return {{1.0, fixed_}};
            case Kind::Mixture: {
                std::vector<std::pair<double, Vec>> out;
                for (std::size_t k = 0; k < weights_.size(); ++k) {
                    auto inner = (*parts_)[k].finite_support();
                    if (inner.empty()) return {};
                    for (auto& [w, r] : inner) out.emplace_back(weights_[k] * w, r);
                }
                return out;
            }
            case Kind::Permuted: {
                auto inner = parts_->front().finite_support();
                for (auto& [w, r] : inner) r = perm_->apply(r);
                return inner;
            }
            default:
                return {};
        }
    }

private:
    static constexpr std::uint64_t kMixtureStream = 0xABCDEF01ULL;

    Kind kind_ = Kind::Iid;
    int num_states_ = 0;
    double lo_ = 0.0, hi_ = 1.0;
    std::vector<Marginal> marginals_;
    Vec fixed_;
    std::vector<double> weights_;
    std::shared_ptr<std::vector<RewardDistributionSpec>> parts_;
    std::shared_ptr<StatePermutation> perm_;
};

inline Vec sample_reward(const RewardDistributionSpec& spec, std::uint64_t seed,
                         std::uint64_t index) {
    return spec.sample(seed, index);
}

// ---------------------------------------------------------------------------
// Mini-language:
//   uniform01 | cdfpow:k | degenerate:<file> | mix:w1*spec1+w2*spec2
//   | perm:<cycles>*<spec> | prod:spec1,spec2,...

namespace detail {

inline Vec load_reward_vector(const RewardlessMdp& mdp, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw input_error("cannot open reward file '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw input_error(std::string("reward file: ") + e.what());
    }
    Vec r = Vec::Zero(mdp.num_states());
    if (j.is_array()) {
        if (static_cast<int>(j.size()) != mdp.num_states())
            throw input_error("reward file: wrong number of entries");
        for (int s = 0; s < mdp.num_states(); ++s) r[s] = j[s].get<double>();
    } else if (j.is_object()) {
        for (const auto& [name, value] : j.items())
            r[mdp.state_index(name)] = value.get<double>();
    } else {
        throw input_error("reward file: expected array or object");
    }
    return r;
}

inline Marginal parse_marginal(const std::string& text) {
    if (text == "uniform01") return Marginal::uniform();
    if (text.rfind("cdfpow:", 0) == 0)
        return Marginal::cdf_power(std::stod(text.substr(7)));
    throw input_error("unknown marginal spec '" + text + "'");
}

// Splits at top level on `sep`, ignoring separators inside (...) groups.
inline std::vector<std::string> split_top(const std::string& text, char sep) {
    std::vector<std::string> parts;
    int depth = 0;
    std::string cur;
    for (char ch : text) {
        if (ch == '(') ++depth;
        if (ch == ')') --depth;
        if (ch == sep && depth == 0) {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    parts.push_back(cur);
    return parts;
}

}  // namespace detail

inline RewardDistributionSpec parse_reward_spec(const RewardlessMdp& mdp,
                                                const std::string& text) {
    const int n = mdp.num_states();
    if (text == "uniform01")
        return RewardDistributionSpec::iid(n, Marginal::uniform());
    if (text.rfind("cdfpow:", 0) == 0)
        return RewardDistributionSpec::iid(
            n, Marginal::cdf_power(std::stod(text.substr(7))));
    if (text.rfind("degenerate:", 0) == 0)
        return RewardDistributionSpec::degenerate(
            detail::load_reward_vector(mdp, text.substr(11)));
    if (text.rfind("mix:", 0) == 0) {
        std::vector<double> weights;
        std::vector<RewardDistributionSpec> parts;
        for (const std::string& term : detail::split_top(text.substr(4), '+')) {
            auto star = term.find('*');
            if (star == std::string::npos)
                throw input_error("mix spec: expected weight*spec in '" + term + "'");
            weights.push_back(std::stod(term.substr(0, star)));
            parts.push_back(parse_reward_spec(mdp, term.substr(star + 1)));
        }
        return RewardDistributionSpec::mixture(std::move(weights), std::move(parts));
    }
    if (text.rfind("perm:", 0) == 0) {
        std::string rest = text.substr(5);
        auto star = rest.find("*");
        // The cycles themselves contain no '*', so the first one ends them.
        if (star == std::string::npos)
            throw input_error("perm spec: expected perm:<cycles>*<spec>");
        StatePermutation phi =
            StatePermutation::from_cycles(mdp, rest.substr(0, star));
        return RewardDistributionSpec::permuted(
            parse_reward_spec(mdp, rest.substr(star + 1)), std::move(phi));
    }
    if (text.rfind("prod:", 0) == 0) {
        std::vector<Marginal> marginals;
        for (const std::string& part : detail::split_top(text.substr(5), ','))
            marginals.push_back(detail::parse_marginal(part));
        if (static_cast<int>(marginals.size()) != n)
            throw input_error("prod spec: need one marginal per state");
        return RewardDistributionSpec::product(std::move(marginals));
    }
    throw input_error("unknown reward distribution spec '" + text + "'");
}

}  // namespace powermdp
