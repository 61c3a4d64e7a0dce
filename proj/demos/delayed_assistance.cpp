// Solves a small delayed-specification game: the surrogate reward trades off
// mean reward against the agent's future ability to optimize the unknown goal.

#include <iostream>

#include "powermdp/powermdp.hpp"

int main() {
    using namespace powermdp;
    RewardlessMdp mdp = toy::case_study();
    RewardDistributionSpec uniform =
        RewardDistributionSpec::iid(mdp.num_states(), Marginal::uniform());

    DelayedSolution sol = solve_delayed_geometric(mdp, uniform, 0.2, 0.9, 400, 1);
    std::cout << "gamma_aup = " << sol.gamma_aup << "\n";
    for (int s = 0; s < mdp.num_states(); ++s)
        std::cout << mdp.state_name(s) << ": R' = " << sol.surrogate.at(s)
                  << ", prefix action = " << mdp.action_name(sol.prefix(s)) << "\n";

    int star = mdp.state_index("star");
    EstimateWithCI score =
        delayed_spec_score(mdp, sol.prefix, uniform, 0.9, 10, star, 400, 1);
    std::cout << "delayed-spec score from star (t=10): " << score.estimate
              << " +- " << score.ci_radius << "\n";
    return 0;
}
