#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "oracles.hpp"
#include "powermdp/powermdp.hpp"

using namespace powermdp;

TEST_CASE("mdp JSON loader round-trips the fork environment") {
    RewardlessMdp m = toy::case_study();
    nlohmann::json j = mdp_to_json(m);
    std::stringstream ss;
    ss << j.dump();
    RewardlessMdp back = load_mdp(ss);
    REQUIRE(back.num_states() == m.num_states());
    REQUIRE(back.num_actions() == m.num_actions());
    for (int s = 0; s < m.num_states(); ++s) {
        auto acts = m.actions_at(s);
        REQUIRE(back.actions_at(s) == acts);
        for (int a : acts)
            REQUIRE((back.transition(s, a) - m.transition(s, a))
                        .lpNorm<Eigen::Infinity>() == 0.0);
    }
}

TEST_CASE("loader rejects rows that do not sum to one") {
    std::stringstream ss;
    ss << R"({"states":["a","b"],"actions":["x"],
          "transitions":{"a":{"x":[["a",0.6],["b",0.5]]},
                         "b":{"x":[["b",1.0]]}}})";
    REQUIRE_THROWS_AS(load_mdp(ss), input_error);
}

TEST_CASE("loader rejects unknown states and missing sections") {
    std::stringstream ss;
    ss << R"({"states":["a"],"actions":["x"],
          "transitions":{"a":{"x":[["zzz",1.0]]}}})";
    REQUIRE_THROWS_AS(load_mdp(ss), input_error);
    std::stringstream ss2;
    ss2 << R"({"states":["a"],"actions":["x"]})";
    REQUIRE_THROWS_AS(load_mdp(ss2), input_error);
    std::stringstream ss3;
    ss3 << "not json";
    REQUIRE_THROWS_AS(load_mdp(ss3), input_error);
}

TEST_CASE("duplicate names and empty spaces are rejected") {
    REQUIRE_THROWS_AS(RewardlessMdp({"a", "a"}, {"x"}), input_error);
    REQUIRE_THROWS_AS(RewardlessMdp({}, {"x"}), input_error);
    RewardlessMdp m({"a", "b"}, {"x"});
    m.set_deterministic("a", "x", "b");
    REQUIRE_THROWS_AS(m.validate(), input_error);  // b has no actions
}

TEST_CASE("action equivalence uses exact row comparison") {
    RewardlessMdp m({"a", "b"}, {"x", "y", "z"});
    m.set_deterministic("a", "x", "b");
    m.set_deterministic("a", "y", "b");
    m.set_deterministic("a", "z", "a");
    m.set_deterministic("b", "x", "b");
    auto equiv = m.equivalent_actions(0, 0);
    REQUIRE(equiv == std::vector<int>{0, 1});
}

TEST_CASE("every bundled figure MDP validates and round-trips") {
    for (const auto& [name, build] : toy::registry()) {
        INFO(name);
        RewardlessMdp m = build();
        std::stringstream ss;
        ss << mdp_to_json(m).dump();
        RewardlessMdp back = load_mdp(ss);
        REQUIRE(back.num_states() == m.num_states());
    }
}
