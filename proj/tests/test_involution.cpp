#include <catch2/catch_amalgamated.hpp>

#include "oracles.hpp"
#include "powermdp/powermdp.hpp"

using namespace powermdp;

namespace {

Vec unit(int dim, int i, double scale = 1.0) {
    Vec e = Vec::Zero(dim);
    e[i] = scale;
    return e;
}

}  // namespace

TEST_CASE("a subset is always witnessed by the identity involution") {
    std::vector<Vec> X = {unit(4, 0), unit(4, 1), unit(4, 2)};
    std::vector<Vec> Xp = {unit(4, 0), unit(4, 2)};
    auto witnesses = check_copy_containment(X, Xp);
    bool has_identity = false;
    for (const auto& phi : witnesses) {
        bool id = true;
        for (int i = 0; i < 4; ++i) id &= phi(i) == i;
        has_identity |= id;
        REQUIRE(phi.is_involution());
    }
    REQUIRE(has_identity);
}

TEST_CASE("the fork's right option set contains a copy of the left one") {
    RewardlessMdp m = toy::case_study();
    VisitSet left = enumerate_visit_functions(m, m.state_index("l_sw"));
    VisitSet right = enumerate_visit_functions(m, m.state_index("r_se"));
    std::vector<Vec> L, R;
    for (const Vec& f : left.at_half) L.push_back(f);
    for (const Vec& f : right.at_half) R.push_back(f);
    auto witnesses = check_copy_containment(R, L, {{}, 1e-9});
    REQUIRE_FALSE(witnesses.empty());
    // The natural witness swaps the l and r wings.
    bool found_swap = false;
    for (const auto& phi : witnesses)
        if (phi(m.state_index("l_sw")) == m.state_index("r_se") &&
            phi(m.state_index("l_nw")) == m.state_index("r_ne"))
            found_swap = true;
    REQUIRE(found_swap);
}

TEST_CASE("graph-options style fixed-point constraints restrict the search") {
    RewardlessMdp m = toy::case_study();
    int star = m.state_index("star");
    VisitSet set = enumerate_visit_functions(m, star);
    NonDominationReport nd = non_dominated(set);
    // F(star | left) and F(star | right): members by the first action taken.
    std::vector<Vec> via_left, via_right;
    for (std::size_t i = 0; i < set.members.size(); ++i) {
        int first = set.members[i].policy()(star);
        if (first == m.action_index("left")) {
            if (nd.contains(static_cast<int>(i))) via_left.push_back(set.at_half[i]);
        } else if (first == m.action_index("right")) {
            via_right.push_back(set.at_half[i]);
        }
    }
    CopySearchOptions opts;
    // Only the states reachable after left or right may move.
    for (const char* name : {"l_w", "l_nw", "l_sw", "r_e", "r_ne", "r_se"})
        opts.movable.push_back(m.state_index(name));
    auto witnesses = check_copy_containment(via_right, via_left, opts);
    REQUIRE_FALSE(witnesses.empty());
    for (const auto& phi : witnesses) {
        REQUIRE(phi(star) == star);
        REQUIRE(phi(m.state_index("terminal")) == m.state_index("terminal"));
    }
}

TEST_CASE("the two-card set contains two copies of the one-card set") {
    // A = {e_diamond}, B = {e_heart, e_spade} over 3 outcomes.
    std::vector<Vec> A = {unit(3, 2)};
    std::vector<Vec> B = {unit(3, 0), unit(3, 1)};
    CopiesResult copies = count_copies(A, B);
    REQUIRE(copies.copies >= 2);
    // The two witnesses are the transpositions diamond<->spade, diamond<->heart.
    int swaps = 0;
    for (const auto& phi : copies.witnesses)
        if (phi(2) == 0 || phi(2) == 1) ++swaps;
    REQUIRE(swaps >= 2);
}

TEST_CASE("dimension cap raises a size error") {
    std::vector<Vec> big = {Vec::Zero(13)};
    REQUIRE_THROWS_AS(check_copy_containment(big, big), size_error);
}

TEST_CASE("involution enumeration honors movability and involution structure") {
    auto all = all_involutions(4);
    REQUIRE(all.size() == 10);  // involutions on 4 elements
    CopySearchOptions opts;
    opts.movable = {0, 1};
    auto constrained = all_involutions(4, opts);
    REQUIRE(constrained.size() == 2);  // identity and (0 1)
    for (const auto& phi : constrained) {
        REQUIRE(phi(2) == 2);
        REQUIRE(phi(3) == 3);
    }
}
