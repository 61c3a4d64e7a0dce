#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "powermdp/errors.hpp"
#include "powermdp/mdp.hpp"

namespace powermdp {
namespace toy {

// Small environments used by the bundled figure files, the test suite, and
// the `figures` CLI subcommand. State names follow the compass/arrow reading
// of the original diagrams.

/// Seven-state fork: star branches left toward a 2-cycle pair, right toward
/// a pair of linked self-loop states, or down to an inescapable terminal.
inline RewardlessMdp case_study() {
    RewardlessMdp m({"star", "l_w", "l_nw", "l_sw", "r_e", "r_ne", "r_se",
                     "terminal"},
                    {"left", "right", "down", "up", "stay"});
    m.set_deterministic("star", "left", "l_w");
    m.set_deterministic("star", "right", "r_e");
    m.set_deterministic("star", "down", "terminal");
    m.set_deterministic("l_w", "up", "l_nw");
    m.set_deterministic("l_w", "down", "l_sw");
    m.set_deterministic("l_nw", "down", "l_sw");
    m.set_deterministic("l_sw", "stay", "l_sw");
    m.set_deterministic("l_sw", "up", "l_nw");
    m.set_deterministic("r_e", "up", "r_ne");
    m.set_deterministic("r_e", "down", "r_se");
    m.set_deterministic("r_ne", "stay", "r_ne");
    m.set_deterministic("r_ne", "down", "r_se");
    m.set_deterministic("r_se", "stay", "r_se");
    m.set_deterministic("r_se", "up", "r_ne");
    m.set_deterministic("terminal", "stay", "terminal");
    m.validate();
    return m;
}

/// From s1, N reaches a single 1-cycle while NE reaches two; the detached
/// exhibit state s2 owns three 1-cycles of its own.
inline RewardlessMdp power_not_ic() {
    RewardlessMdp m({"s1", "x1", "s3", "y1", "y2", "s2", "z1", "z2", "z3"},
                    {"N", "NE", "a", "b", "c", "stay"});
    m.set_deterministic("s1", "N", "x1");
    m.set_deterministic("s1", "NE", "s3");
    m.set_deterministic("x1", "stay", "x1");
    m.set_deterministic("s3", "a", "y1");
    m.set_deterministic("s3", "b", "y2");
    m.set_deterministic("y1", "stay", "y1");
    m.set_deterministic("y2", "stay", "y2");
    m.set_deterministic("s2", "a", "z1");
    m.set_deterministic("s2", "b", "z2");
    m.set_deterministic("s2", "c", "z3");
    m.set_deterministic("z1", "stay", "z1");
    m.set_deterministic("z2", "stay", "z2");
    m.set_deterministic("z3", "stay", "z3");
    m.validate();
    return m;
}

/// Three 1-cycles sit one step from s; `right` leads to a hub with two more.
inline RewardlessMdp opt_prob_half_prob() {
    RewardlessMdp m({"s", "c1", "c2", "c3", "hub", "h1", "h2"},
                    {"up", "left", "down", "right", "stay"});
    m.set_deterministic("s", "up", "c1");
    m.set_deterministic("s", "left", "c2");
    m.set_deterministic("s", "down", "c3");
    m.set_deterministic("s", "right", "hub");
    m.set_deterministic("c1", "stay", "c1");
    m.set_deterministic("c2", "stay", "c2");
    m.set_deterministic("c3", "stay", "c3");
    m.set_deterministic("hub", "up", "h1");
    m.set_deterministic("hub", "down", "h2");
    m.set_deterministic("h1", "stay", "h1");
    m.set_deterministic("h2", "stay", "h2");
    m.validate();
    return m;
}

/// up parks immediately; right is a forced ride through two transients into
/// a five-cycle entered uniformly at random. The branch's discounted state
/// weights at gamma = 1/2 are (1/2, 1/4, 1/20 x 5), so for the CDF-x^2
/// marginal P(up) = 1 - [1/2 q + 4/9 (1-q)] with q = 0.325: exactly 0.5375.
/// The uniform marginal leaves up and right equally probable.
inline RewardlessMdp impossibility_graphical() {
    RewardlessMdp m({"s1", "s2", "s3", "s4", "c1", "c2", "c3", "c4", "c5"},
                    {"up", "right", "go", "stay"});
    m.set_deterministic("s1", "up", "s2");
    m.set_deterministic("s1", "right", "s3");
    m.set_deterministic("s2", "stay", "s2");
    m.set_deterministic("s3", "go", "s4");
    Vec enter = Vec::Zero(9);
    for (int i = 4; i < 9; ++i) enter[i] = 0.2;
    m.set_transition("s4", "go", enter);
    const char* cycle[] = {"c1", "c2", "c3", "c4", "c5"};
    for (int i = 0; i < 5; ++i)
        m.set_deterministic(cycle[i], "go", cycle[(i + 1) % 5]);
    m.validate();
    return m;
}

/// Time-uniform funnel: 2 choices, then 3, then a single absorbing state.
inline RewardlessMdp uniform_a() {
    RewardlessMdp m({"s1", "m1", "m2", "r1", "r2", "r3", "g"},
                    {"a", "b", "c", "stay"});
    m.set_deterministic("s1", "a", "m1");
    m.set_deterministic("s1", "b", "m2");
    for (const char* mid : {"m1", "m2"}) {
        m.set_deterministic(mid, "a", "r1");
        m.set_deterministic(mid, "b", "r2");
        m.set_deterministic(mid, "c", "r3");
    }
    for (const char* r : {"r1", "r2", "r3"}) m.set_deterministic(r, "a", "g");
    m.set_deterministic("g", "stay", "g");
    m.validate();
    return m;
}

/// Three absorbing children; used with a per-state product distribution.
inline RewardlessMdp power_calc() {
    RewardlessMdp m({"s0", "s1", "s2", "s3"}, {"a", "b", "c", "stay"});
    m.set_deterministic("s0", "a", "s1");
    m.set_deterministic("s0", "b", "s2");
    m.set_deterministic("s0", "c", "s3");
    m.set_deterministic("s1", "stay", "s1");
    m.set_deterministic("s2", "stay", "s2");
    m.set_deterministic("s3", "stay", "s3");
    m.validate();
    return m;
}

/// s1 <-> s2 shuttle with an absorbing s3 on the left.
inline RewardlessMdp sharp_bound() {
    RewardlessMdp m({"s1", "s2", "s3"}, {"right", "left", "back", "stay"});
    m.set_deterministic("s1", "right", "s2");
    m.set_deterministic("s1", "left", "s3");
    m.set_deterministic("s2", "back", "s1");
    m.set_deterministic("s3", "stay", "s3");
    m.validate();
    return m;
}

inline RewardFunction sharp_bound_reward() {
    Vec r(3);
    r << 0.0, 0.5, 1.0;
    return RewardFunction::states(r);
}

/// Two parallel two-step corridors with distinct reward profiles.
inline RewardlessMdp no_transfer_greedy() {
    RewardlessMdp m({"s0", "s1", "s1p", "s2", "s2p"}, {"up", "down", "go", "stay"});
    m.set_deterministic("s0", "up", "s1");
    m.set_deterministic("s0", "down", "s1p");
    m.set_deterministic("s1", "go", "s2");
    m.set_deterministic("s1p", "go", "s2p");
    m.set_deterministic("s2", "stay", "s2");
    m.set_deterministic("s2p", "stay", "s2p");
    m.validate();
    return m;
}

inline RewardFunction no_transfer_greedy_reward() {
    Vec r(5);
    r << 0.0, 1.0, 0.5, 0.0, 0.5;
    return RewardFunction::states(r);
}

/// Transfer counterexample for policy orderings: left/down park, right shuttles.
inline RewardlessMdp order_not_preserved() {
    RewardlessMdp m({"s1", "s2", "s3", "s4"}, {"left", "down", "right", "back", "stay"});
    m.set_deterministic("s1", "left", "s2");
    m.set_deterministic("s1", "down", "s3");
    m.set_deterministic("s1", "right", "s4");
    m.set_deterministic("s2", "stay", "s2");
    m.set_deterministic("s3", "stay", "s3");
    m.set_deterministic("s4", "back", "s1");
    m.validate();
    return m;
}

/// Two trajectories that induce the same visit distribution at gamma = 1/2.
inline RewardlessMdp same_dist() {
    RewardlessMdp m({"s1", "s2", "s3"}, {"a", "b", "stay", "cross"});
    m.set_deterministic("s1", "a", "s2");
    m.set_deterministic("s1", "b", "s3");
    m.set_deterministic("s2", "stay", "s2");
    m.set_deterministic("s2", "cross", "s3");
    m.set_deterministic("s3", "stay", "s3");
    m.set_deterministic("s3", "cross", "s2");
    m.validate();
    return m;
}

/// Non-dominated detour: both the direct hop and the two-step route to the
/// absorbing state survive domination.
inline RewardlessMdp nd_not_geo() {
    RewardlessMdp m({"s0", "s1", "s2"}, {"a", "b", "stay"});
    m.set_deterministic("s0", "a", "s1");
    m.set_deterministic("s0", "b", "s2");
    m.set_deterministic("s1", "a", "s2");
    m.set_deterministic("s2", "stay", "s2");
    m.validate();
    return m;
}

/// The 50/50 bifurcated action is dominated by its deterministic siblings.
inline RewardlessMdp stoch_vf_indifference() {
    RewardlessMdp m({"s1", "s2", "s3"}, {"a", "b", "both", "stay"});
    m.set_deterministic("s1", "a", "s2");
    m.set_deterministic("s1", "b", "s3");
    Vec split = Vec::Zero(3);
    split[1] = 0.5;
    split[2] = 0.5;
    m.set_transition("s1", "both", split);
    m.set_deterministic("s2", "stay", "s2");
    m.set_deterministic("s3", "stay", "s3");
    m.validate();
    return m;
}

/// Both exits from s lead to a single 1-cycle each, one with a delay.
inline RewardlessMdp sim_rsd_loss() {
    RewardlessMdp m({"s", "u", "mid", "v"}, {"a", "b", "stay"});
    m.set_deterministic("s", "a", "u");
    m.set_deterministic("s", "b", "mid");
    m.set_deterministic("u", "stay", "u");
    m.set_deterministic("mid", "a", "v");
    m.set_deterministic("v", "stay", "v");
    m.validate();
    return m;
}

/// Early irreversible fork; the right branch keeps one more option open.
inline RewardlessMdp robust_impossible() {
    RewardlessMdp m({"s1", "s2", "s3", "s4"}, {"left", "right", "stay"});
    m.set_deterministic("s1", "left", "s2");
    m.set_deterministic("s1", "right", "s3");
    m.set_deterministic("s2", "stay", "s2");
    m.set_deterministic("s3", "stay", "s3");
    m.set_deterministic("s3", "right", "s4");
    m.set_deterministic("s4", "stay", "s4");
    m.validate();
    return m;
}

/// right is POWER-seeking for all interior discounts yet up tends to be
/// optimal for bottom-heavy reward marginals.
inline RewardlessMdp counterex_powerseeking() {
    RewardlessMdp m({"s1", "s2", "s3", "s4", "s5", "s6"},
                    {"up", "right", "a", "b", "stay"});
    m.set_deterministic("s1", "up", "s2");
    m.set_deterministic("s1", "right", "s3");
    m.set_deterministic("s2", "stay", "s2");
    m.set_deterministic("s3", "a", "s4");
    m.set_deterministic("s4", "a", "s5");
    m.set_deterministic("s4", "b", "s6");
    m.set_deterministic("s5", "stay", "s5");
    m.set_deterministic("s6", "stay", "s6");
    m.validate();
    return m;
}

/// Identical non-dominated children at s1 and s4 despite different wiring.
inline RewardlessMdp same_succ() {
    RewardlessMdp m({"s1", "s2", "s3", "s4"}, {"a", "b", "both", "stay", "go"});
    m.set_deterministic("s1", "a", "s2");
    m.set_deterministic("s1", "b", "s3");
    Vec split = Vec::Zero(4);
    split[1] = 0.5;
    split[2] = 0.5;
    m.set_transition("s1", "both", split);
    m.set_deterministic("s2", "stay", "s2");
    m.set_deterministic("s2", "go", "s4");
    m.set_deterministic("s3", "stay", "s3");
    m.set_deterministic("s4", "a", "s2");
    m.set_deterministic("s4", "b", "s3");
    m.validate();
    return m;
}

/// Two mutually reachable self-loop states (the no-free-lunch picture).
inline RewardlessMdp two_state_shuttle() {
    RewardlessMdp m({"s1", "s2"}, {"stay", "switch"});
    m.set_deterministic("s1", "stay", "s1");
    m.set_deterministic("s1", "switch", "s2");
    m.set_deterministic("s2", "stay", "s2");
    m.set_deterministic("s2", "switch", "s1");
    m.validate();
    return m;
}

/// Registry for the CLI `gen-figures` subcommand and the acceptance suite.
inline const std::map<std::string, std::function<RewardlessMdp()>>& registry() {
    static const std::map<std::string, std::function<RewardlessMdp()>> reg = {
        {"case_study", case_study},
        {"power_not_ic", power_not_ic},
        {"opt_prob_half_prob", opt_prob_half_prob},
        {"impossibility_graphical", impossibility_graphical},
        {"uniform_a", uniform_a},
        {"power_calc", power_calc},
        {"sharp_bound", sharp_bound},
        {"no_transfer_greedy", no_transfer_greedy},
        {"order_not_preserved", order_not_preserved},
        {"same_dist", same_dist},
        {"nd_not_geo", nd_not_geo},
        {"stoch_vf_indifference", stoch_vf_indifference},
        {"sim_rsd_loss", sim_rsd_loss},
        {"robust_impossible", robust_impossible},
        {"counterex_powerseeking", counterex_powerseeking},
        {"same_succ", same_succ},
        {"two_state_shuttle", two_state_shuttle},
    };
    return reg;
}

}  // namespace toy
}  // namespace powermdp
