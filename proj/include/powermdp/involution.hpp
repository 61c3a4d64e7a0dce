#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <optional>
#include <vector>

#include "powermdp/errors.hpp"
#include "powermdp/mdp.hpp"
#include "powermdp/permutation.hpp"

namespace powermdp {

inline constexpr int kInvolutionIndexCap = 12;

struct CopySearchOptions {
    /// Indices allowed to move; everything else must be fixed. Empty means
    /// all indices may move.
    std::vector<int> movable;
    double tol = 1e-9;
};

namespace detail {

inline bool vector_in(const std::vector<Vec>& set, const Vec& v, double tol) {
    for (const Vec& u : set)
        if ((u - v).lpNorm<Eigen::Infinity>() <= tol) return true;
    return false;
}

inline bool maps_into(const StatePermutation& phi, const std::vector<Vec>& from,
                      const std::vector<Vec>& into, double tol) {
    for (const Vec& x : from)
        if (!vector_in(into, phi.apply(x), tol)) return false;
    return true;
}

inline bool fixes_set(const StatePermutation& phi, const std::vector<Vec>& set,
                      double tol) {
    for (const Vec& x : set)
        if (!vector_in(set, phi.apply(x), tol)) return false;
    return true;
}

inline void enumerate_involutions(int dim, const std::vector<char>& movable,
                                  std::vector<int>& map, int next,
                                  std::vector<StatePermutation>& out) {
    while (next < dim && map[next] != -1) ++next;
    if (next == dim) {
        out.emplace_back(map);
        return;
    }
    // Fix `next`.
    map[next] = next;
    enumerate_involutions(dim, movable, map, next + 1, out);
    map[next] = -1;
    if (!movable[next]) return;
    // Or transpose it with a later movable index.
    for (int j = next + 1; j < dim; ++j) {
        if (map[j] != -1 || !movable[j]) continue;
        map[next] = j;
        map[j] = next;
        enumerate_involutions(dim, movable, map, next + 1, out);
        map[next] = -1;
        map[j] = -1;
    }
}

}  // namespace detail

/// All involutions on {0..dim-1} honoring the movability constraint.
inline std::vector<StatePermutation> all_involutions(
    int dim, const CopySearchOptions& opts = {}) {
    if (dim > kInvolutionIndexCap)
        throw size_error("involution search capped at dimension " +
                         std::to_string(kInvolutionIndexCap));
    std::vector<char> movable(dim, 1);
    if (!opts.movable.empty()) {
        std::fill(movable.begin(), movable.end(), 0);
        for (int i : opts.movable) movable.at(i) = 1;
    }
    std::vector<StatePermutation> out;
    std::vector<int> map(dim, -1);
    detail::enumerate_involutions(dim, movable, map, 0, out);
    return out;
}

/// Involutions phi with phi . x_prime in X for every x_prime in X_prime:
/// the "X contains a copy of X_prime" witnesses.
inline std::vector<StatePermutation> check_copy_containment(
    const std::vector<Vec>& X, const std::vector<Vec>& X_prime,
    const CopySearchOptions& opts = {}) {
    if (X_prime.empty()) throw input_error("copy containment: empty source set");
    const int dim = static_cast<int>(X_prime.front().size());
    std::vector<StatePermutation> witnesses;
    for (const StatePermutation& phi : all_involutions(dim, opts))
        if (detail::maps_into(phi, X_prime, X, opts.tol)) witnesses.push_back(phi);
    return witnesses;
}

/// Largest family of witnesses phi_1..phi_n establishing that B contains n
/// copies of A: each phi_i . A lies in B and phi_i fixes every other copy
/// phi_j . A setwise. Exhaustive over witness subsets (witness counts here
/// are tiny), preferring lexicographically earliest families of maximal size.
struct CopiesResult {
    int copies = 0;
    std::vector<StatePermutation> witnesses;
};

inline CopiesResult count_copies(const std::vector<Vec>& A,
                                 const std::vector<Vec>& B,
                                 const CopySearchOptions& opts = {}) {
    std::vector<StatePermutation> cands = check_copy_containment(B, A, opts);
    std::vector<std::vector<Vec>> images;
    for (const auto& phi : cands) {
        std::vector<Vec> img;
        for (const Vec& a : A) img.push_back(phi.apply(a));
        images.push_back(std::move(img));
    }
    CopiesResult best;
    std::vector<int> chosen;
    // Depth-first over candidate subsets with pairwise-fixing compatibility.
    std::function<void(std::size_t)> grow = [&](std::size_t from) {
        if (static_cast<int>(chosen.size()) > best.copies) {
            best.copies = static_cast<int>(chosen.size());
            best.witnesses.clear();
            for (int i : chosen) best.witnesses.push_back(cands[i]);
        }
        for (std::size_t k = from; k < cands.size(); ++k) {
            bool ok = true;
            for (int i : chosen) {
                if (!detail::fixes_set(cands[k], images[i], opts.tol) ||
                    !detail::fixes_set(cands[i], images[k], opts.tol)) {
                    ok = false;
                    break;
                }
            }
            if (!ok) continue;
            chosen.push_back(static_cast<int>(k));
            grow(k + 1);
            chosen.pop_back();
        }
    };
    grow(0);
    return best;
}

}  // namespace powermdp
