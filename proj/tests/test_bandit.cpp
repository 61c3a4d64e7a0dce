#include <catch2/catch_amalgamated.hpp>

#include "powermdp/powermdp.hpp"

using namespace powermdp;
using Catch::Approx;

TEST_CASE("constant utilities give each arm probability 1/5") {
    BanditConfig cfg;
    cfg.utilities << 2, 2, 2, 2, 2;
    BanditTrainResult r = bandit_train_prob(cfg, 20000, 0);
    for (int a = 0; a < kBanditArms; ++a) {
        REQUIRE(r.arm_probability[a].estimate ==
                Approx(0.2).margin(r.arm_probability[a].ci_radius + 0.01));
    }
}

TEST_CASE("a strictly maximal arm is selected at least the training bound") {
    BanditConfig cfg;
    cfg.utilities << 1, 7, 2, 3, 4;  // arm 1 strictly maximal
    cfg.epsilon = 0.1;
    cfg.trials = 100;
    BanditTrainResult r = bandit_train_prob(cfg, 10000, 1);
    double bound = 1.0 - std::pow(1.0 - cfg.epsilon / 4.0, cfg.trials);
    REQUIRE(r.arm_probability[1].estimate >= bound - r.arm_probability[1].ci_radius);
}

TEST_CASE("zero trials leave a uniform exploitation policy") {
    BanditConfig cfg;
    cfg.utilities << 5, 4, 3, 2, 1;
    cfg.trials = 0;
    BanditTrainResult r = bandit_train_prob(cfg, 100, 2);
    for (int a = 0; a < kBanditArms; ++a)
        REQUIRE(r.arm_probability[a].estimate == Approx(0.2).margin(1e-12));
}

TEST_CASE("per-arm probabilities sum to one within combined CI") {
    BanditConfig cfg;
    cfg.utilities << 0.3, 0.1, 0.9, 0.2, 0.5;
    BanditTrainResult r = bandit_train_prob(cfg, 5000, 3);
    double total = 0.0;
    for (int a = 0; a < kBanditArms; ++a) total += r.arm_probability[a].estimate;
    REQUIRE(total == Approx(1.0).margin(1e-9));
}

TEST_CASE("training is deterministic in the seed") {
    BanditConfig cfg;
    cfg.utilities << 1, 2, 3, 4, 5;
    BanditTrainResult a = bandit_train_prob(cfg, 2000, 9);
    BanditTrainResult b = bandit_train_prob(cfg, 2000, 9);
    for (int arm = 0; arm < kBanditArms; ++arm)
        REQUIRE(a.arm_probability[arm].estimate == b.arm_probability[arm].estimate);
}

TEST_CASE("the full 5!-orbit holds the ratio-4 tendency") {
    BanditConfig cfg;
    cfg.utilities << 5, 4, 3, 2, 1;
    // Modest simulation count per orbit element keeps this test quick; the
    // acceptance suite reruns it at full scale.
    BanditOrbitTally tally = bandit_orbit_tally(cfg, 400, 4);
    REQUIRE(tally.count_b + tally.count_a + tally.count_eq == 120);
    REQUIRE(tally.holds(4));
}

TEST_CASE("invalid configurations are rejected") {
    BanditConfig cfg;
    cfg.utilities << 1, 2, 3, 4, 5;
    cfg.epsilon = 0.0;
    REQUIRE_THROWS_AS(bandit_train_prob(cfg, 10, 0), input_error);
    cfg.epsilon = 0.1;
    cfg.trials = -1;
    REQUIRE_THROWS_AS(bandit_train_prob(cfg, 10, 0), input_error);
}
