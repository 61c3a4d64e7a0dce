#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <vector>

#include "powermdp/mdp.hpp"

namespace powermdp {

/// Long-run state-frequency analysis of a finite Markov chain given by a
/// left-stochastic matrix P (column s holds the distribution of the next
/// state from s).
class ChainAnalysis {
public:
    explicit ChainAnalysis(const Mat& P) : P_(P), n_(static_cast<int>(P.cols())) {
        find_closed_classes();
        if (!deterministic()) solve_stationary_and_absorption();
    }

    /// Cesaro-limit distribution of P^t e_s: the recurrent state distribution
    /// of the chain started at s.
    Vec limit_distribution(int s) const {
        if (deterministic()) return deterministic_limit(s);
        Vec out = Vec::Zero(n_);
        for (std::size_t k = 0; k < classes_.size(); ++k)
            out += absorb_(s, static_cast<int>(k)) * stationary_[k];
        return out;
    }

    bool deterministic() const { return det_; }

private:
    // Kosaraju-style SCC over the support graph, then keep closed classes.
    void find_closed_classes() {
        det_ = true;
        for (int s = 0; s < n_ && det_; ++s)
            for (int t = 0; t < n_; ++t)
                if (P_(t, s) != 0.0 && P_(t, s) != 1.0) { det_ = false; break; }
        if (det_) return;

        std::vector<int> order;
        std::vector<char> seen(n_, 0);
        for (int s = 0; s < n_; ++s) dfs_order(s, seen, order);
        std::vector<int> comp(n_, -1);
        int ncomp = 0;
        for (auto it = order.rbegin(); it != order.rend(); ++it)
            if (comp[*it] == -1) {
                assign_comp(*it, ncomp, comp);
                ++ncomp;
            }
        // A component is a closed (recurrent) class if no edge leaves it.
        std::vector<char> closed(ncomp, 1);
        for (int s = 0; s < n_; ++s)
            for (int t = 0; t < n_; ++t)
                if (P_(t, s) > 0.0 && comp[t] != comp[s]) closed[comp[s]] = 0;
        comp_ = comp;
        classes_.clear();
        class_of_comp_.assign(ncomp, -1);
        for (int k = 0; k < ncomp; ++k)
            if (closed[k]) {
                class_of_comp_[k] = static_cast<int>(classes_.size());
                classes_.emplace_back();
            }
        for (int s = 0; s < n_; ++s)
            if (class_of_comp_[comp[s]] >= 0)
                classes_[class_of_comp_[comp[s]]].push_back(s);
    }

    void dfs_order(int root, std::vector<char>& seen, std::vector<int>& order) {
        if (seen[root]) return;
        std::vector<std::pair<int, int>> stack{{root, 0}};
        seen[root] = 1;
        while (!stack.empty()) {
            auto& [s, next] = stack.back();
            bool descended = false;
            for (int t = next; t < n_; ++t)
                if (P_(t, s) > 0.0 && !seen[t]) {
                    stack.back().second = t + 1;
                    seen[t] = 1;
                    stack.push_back({t, 0});
                    descended = true;
                    break;
                }
            if (!descended) {
                order.push_back(s);
                stack.pop_back();
            }
        }
    }

    // Reverse-graph DFS for component assignment.
    void assign_comp(int root, int label, std::vector<int>& comp) {
        std::vector<int> stack{root};
        comp[root] = label;
        while (!stack.empty()) {
            int s = stack.back();
            stack.pop_back();
            for (int t = 0; t < n_; ++t)
                if (P_(s, t) > 0.0 && comp[t] == -1) {
                    comp[t] = label;
                    stack.push_back(t);
                }
        }
    }

    void solve_stationary_and_absorption() {
        stationary_.clear();
        for (const auto& cls : classes_) {
            const int m = static_cast<int>(cls.size());
            Mat Pc(m, m);
            for (int i = 0; i < m; ++i)
                for (int j = 0; j < m; ++j) Pc(i, j) = P_(cls[i], cls[j]);
            // Solve x' Pc = x', sum x = 1 by replacing one balance row.
            Mat A = Pc.transpose() - Mat::Identity(m, m);
            A.row(m - 1).setOnes();
            Vec rhs = Vec::Zero(m);
            rhs[m - 1] = 1.0;
            Vec x = A.partialPivLu().solve(rhs);
            Vec full = Vec::Zero(n_);
            for (int i = 0; i < m; ++i) full[cls[i]] = x[i];
            stationary_.push_back(std::move(full));
        }
        // Absorption probabilities from every state into each closed class.
        std::vector<int> transient;
        std::vector<int> in_class(n_, -1);
        for (std::size_t k = 0; k < classes_.size(); ++k)
            for (int s : classes_[k]) in_class[s] = static_cast<int>(k);
        for (int s = 0; s < n_; ++s)
            if (in_class[s] == -1) transient.push_back(s);
        const int nt = static_cast<int>(transient.size());
        const int nc = static_cast<int>(classes_.size());
        absorb_ = Mat::Zero(n_, nc);
        for (int s = 0; s < n_; ++s)
            if (in_class[s] >= 0) absorb_(s, in_class[s]) = 1.0;
        if (nt == 0) return;
        Mat Q(nt, nt), R(nt, nc);
        R.setZero();
        for (int i = 0; i < nt; ++i)
            for (int j = 0; j < nt; ++j) Q(i, j) = P_(transient[j], transient[i]);
        for (int i = 0; i < nt; ++i)
            for (int t = 0; t < n_; ++t)
                if (in_class[t] >= 0) R(i, in_class[t]) += P_(t, transient[i]);
        Mat B = (Mat::Identity(nt, nt) - Q).partialPivLu().solve(R);
        for (int i = 0; i < nt; ++i) absorb_.row(transient[i]) = B.row(i);
    }

    // Deterministic chain: walk until the cycle closes, average over it.
    Vec deterministic_limit(int s) const {
        std::vector<int> when(n_, -1);
        std::vector<int> path;
        int cur = s;
        while (when[cur] == -1) {
            when[cur] = static_cast<int>(path.size());
            path.push_back(cur);
            int next = -1;
            for (int t = 0; t < n_; ++t)
                if (P_(t, cur) == 1.0) { next = t; break; }
            cur = next;
        }
        Vec out = Vec::Zero(n_);
        const int start = when[cur];
        const int len = static_cast<int>(path.size()) - start;
        for (int i = start; i < static_cast<int>(path.size()); ++i)
            out[path[i]] += 1.0 / len;
        return out;
    }

    Mat P_;
    int n_;
    bool det_ = false;
    std::vector<int> comp_;
    std::vector<int> class_of_comp_;
    std::vector<std::vector<int>> classes_;
    std::vector<Vec> stationary_;
    Mat absorb_;
};

}  // namespace powermdp
