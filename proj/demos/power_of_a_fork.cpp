// Walks through the fork environment: enumerates its visit distribution
// functions, drops the dominated ones, and estimates POWER at a few states.

#include <iostream>

#include "powermdp/powermdp.hpp"

int main() {
    using namespace powermdp;
    RewardlessMdp mdp = toy::case_study();
    RewardDistributionSpec uniform =
        RewardDistributionSpec::iid(mdp.num_states(), Marginal::uniform());

    int star = mdp.state_index("star");
    VisitSet set = enumerate_visit_functions(mdp, star);
    NonDominationReport nd = non_dominated(set);
    std::cout << "|F(star)| = " << set.members.size() << ", |Fnd(star)| = "
              << nd.non_dominated.size() << "\n";

    for (const char* name : {"terminal", "l_sw", "r_se", "star"}) {
        EstimateWithCI est =
            power(mdp, mdp.state_index(name), 0.5, uniform, 200000, 0);
        std::cout << "POWER(" << name << ", 0.5) ~= " << est.estimate << " +- "
                  << est.ci_radius << "\n";
    }

    OrbitVote vote = orbit_vote(
        mdp,
        PowerVoteQuantity{mdp.state_index("r_se"), mdp.state_index("l_sw"), 0.5},
        uniform, true);
    std::cout << "orbit vote r_se vs l_sw: gt=" << vote.count_gt
              << " lt=" << vote.count_lt << " eq=" << vote.count_eq << "\n";
    return 0;
}
