#pragma once

// Umbrella header for the powermdp library.

#include "powermdp/aup.hpp"
#include "powermdp/bandit.hpp"
#include "powermdp/delayed.hpp"
#include "powermdp/errors.hpp"
#include "powermdp/gridworld.hpp"
#include "powermdp/involution.hpp"
#include "powermdp/markov_chain.hpp"
#include "powermdp/mdp.hpp"
#include "powermdp/permutation.hpp"
#include "powermdp/power.hpp"
#include "powermdp/regret.hpp"
#include "powermdp/reward_dist.hpp"
#include "powermdp/rng.hpp"
#include "powermdp/rules.hpp"
#include "powermdp/simplex.hpp"
#include "powermdp/solve.hpp"
#include "powermdp/stats.hpp"
#include "powermdp/toy_mdps.hpp"
#include "powermdp/visit.hpp"
