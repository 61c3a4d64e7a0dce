#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <numeric>
#include <string>
#include <vector>

#include "powermdp/errors.hpp"
#include "powermdp/mdp.hpp"

namespace powermdp {

/// Bijection on state indices. map[i] = phi(i).
class StatePermutation {
public:
    explicit StatePermutation(std::vector<int> map) : map_(std::move(map)) {
        std::vector<int> sorted = map_;
        std::sort(sorted.begin(), sorted.end());
        for (std::size_t i = 0; i < sorted.size(); ++i)
            if (sorted[i] != static_cast<int>(i))
                throw input_error("permutation: not a bijection");
    }

    static StatePermutation identity(int n) {
        std::vector<int> map(n);
        std::iota(map.begin(), map.end(), 0);
        return StatePermutation(std::move(map));
    }

    int size() const { return static_cast<int>(map_.size()); }
    int operator()(int i) const { return map_.at(i); }

    bool is_involution() const {
        for (int i = 0; i < size(); ++i)
            if (map_[map_[i]] != i) return false;
        return true;
    }

    /// Pushforward of a vector: out[phi(i)] = v[i].
    Vec apply(const Vec& v) const {
        Vec out(v.size());
        for (int i = 0; i < size(); ++i) out[map_[i]] = v[i];
        return out;
    }

    StatePermutation inverse() const {
        std::vector<int> inv(map_.size());
        for (int i = 0; i < size(); ++i) inv[map_[i]] = i;
        return StatePermutation(std::move(inv));
    }

    const std::vector<int>& map() const { return map_; }

private:
    std::vector<int> map_;

public:
    /// Parses disjoint cycle notation over state names, e.g. "(a b)(c d)".
    /// States not mentioned are fixed.
    static StatePermutation from_cycles(const RewardlessMdp& mdp,
                                        const std::string& text) {
        std::vector<int> map(mdp.num_states());
        std::iota(map.begin(), map.end(), 0);
        std::size_t pos = 0;
        auto skip_ws = [&] {
            while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
        };
        skip_ws();
        while (pos < text.size()) {
            if (text[pos] != '(')
                throw input_error("permutation: expected '(' in cycle notation");
            ++pos;
            std::vector<int> cycle;
            for (;;) {
                skip_ws();
                if (pos < text.size() && text[pos] == ')') { ++pos; break; }
                std::size_t end = pos;
                while (end < text.size() && text[end] != ' ' && text[end] != ')')
                    ++end;
                if (end == pos) throw input_error("permutation: malformed cycle");
                cycle.push_back(mdp.state_index(text.substr(pos, end - pos)));
                pos = end;
            }
            if (cycle.size() < 2)
                throw input_error("permutation: cycles need at least two states");
            for (std::size_t i = 0; i < cycle.size(); ++i)
                map[cycle[i]] = cycle[(i + 1) % cycle.size()];
            skip_ws();
        }
        return StatePermutation(std::move(map));
    }
};

}  // namespace powermdp
