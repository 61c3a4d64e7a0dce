#include <catch2/catch_amalgamated.hpp>

#include "oracles.hpp"
#include "powermdp/powermdp.hpp"

using namespace powermdp;
using Catch::Approx;

namespace {
const std::uint64_t kN = 200000;
}

TEST_CASE("sample_reward basics") {
    SECTION("degenerate returns the same vector for every index") {
        Vec r(3);
        r << 0.2, -1.0, 4.0;
        RewardDistributionSpec d = RewardDistributionSpec::degenerate(r);
        for (std::uint64_t i : {0ULL, 5ULL, 999ULL})
            REQUIRE((sample_reward(d, 1, i) - r).lpNorm<Eigen::Infinity>() == 0.0);
    }
    SECTION("iid uniform coordinates have mean 1/2") {
        RewardDistributionSpec d = RewardDistributionSpec::iid(3, Marginal::uniform());
        Vec acc = Vec::Zero(3);
        const std::uint64_t n = 100000;
        for (std::uint64_t i = 0; i < n; ++i) acc += sample_reward(d, 7, i);
        acc /= static_cast<double>(n);
        for (int s = 0; s < 3; ++s) REQUIRE(acc[s] == Approx(0.5).margin(0.01));
    }
    SECTION("permuted draws are the permutation of the base draws") {
        RewardDistributionSpec base = RewardDistributionSpec::iid(4, Marginal::uniform());
        StatePermutation phi({1, 0, 3, 2});
        RewardDistributionSpec d = RewardDistributionSpec::permuted(base, phi);
        for (std::uint64_t i = 0; i < 50; ++i) {
            Vec expect = phi.apply(sample_reward(base, 3, i));
            REQUIRE((sample_reward(d, 3, i) - expect).lpNorm<Eigen::Infinity>() == 0.0);
        }
    }
    SECTION("cdf-power marginal has CDF x^k") {
        RewardDistributionSpec d = RewardDistributionSpec::iid(1, Marginal::cdf_power(2.0));
        std::uint64_t below = 0;
        const std::uint64_t n = 100000;
        for (std::uint64_t i = 0; i < n; ++i)
            below += sample_reward(d, 9, i)[0] <= 0.6;
        REQUIRE(static_cast<double>(below) / n == Approx(0.36).margin(0.01));
    }
    SECTION("mixture weights must sum to one") {
        auto u = RewardDistributionSpec::iid(2, Marginal::uniform());
        REQUIRE_THROWS_AS(RewardDistributionSpec::mixture({0.5, 0.2}, {u, u}),
                          input_error);
    }
}

TEST_CASE("the distribution mini-language parses and validates") {
    RewardlessMdp m = toy::same_dist();
    REQUIRE(parse_reward_spec(m, "uniform01").is_continuous_iid());
    REQUIRE(parse_reward_spec(m, "cdfpow:2").num_states() == 3);
    REQUIRE(parse_reward_spec(m, "mix:0.5*uniform01+0.5*cdfpow:3").num_states() == 3);
    RewardDistributionSpec p = parse_reward_spec(m, "perm:(s1 s2)*uniform01");
    REQUIRE(p.num_states() == 3);
    REQUIRE(parse_reward_spec(m, "prod:uniform01,cdfpow:2,uniform01").num_states() == 3);
    REQUIRE_THROWS_AS(parse_reward_spec(m, "nope"), input_error);
    REQUIRE_THROWS_AS(parse_reward_spec(m, "prod:uniform01"), input_error);
}

TEST_CASE("POWER on the fork environment matches the closed forms") {
    RewardlessMdp m = toy::case_study();
    RewardDistributionSpec u = RewardDistributionSpec::iid(m.num_states(), Marginal::uniform());
    for (double g : {0.1, 0.5, 0.9}) {
        REQUIRE(power(m, m.state_index("terminal"), g, u, kN, 0).estimate ==
                Approx(0.5).margin(0.01));
        REQUIRE(power(m, m.state_index("r_se"), g, u, kN, 0).estimate ==
                Approx(2.0 / 3.0).margin(0.01));
        REQUIRE(power(m, m.state_index("l_sw"), g, u, kN, 0).estimate ==
                Approx((2.0 / 3.0 + g / 2.0) / (1.0 + g)).margin(0.01));
    }
}

TEST_CASE("POWER of a degenerate constant distribution is that constant") {
    RewardlessMdp m = toy::case_study();
    RewardDistributionSpec d =
        RewardDistributionSpec::degenerate(Vec::Constant(m.num_states(), 0.37));
    EstimateWithCI est = power(m, m.state_index("star"), 0.5, d, 10, 0);
    REQUIRE(est.estimate == Approx(0.37).margin(1e-9));
}

TEST_CASE("factored POWER: the product-distribution figure gives 4/5") {
    RewardlessMdp m = toy::power_calc();
    RewardDistributionSpec d = RewardDistributionSpec::product(
        {Marginal::uniform(), Marginal::uniform(), Marginal::cdf_power(2.0),
         Marginal::uniform()});
    for (double g : {0.3, 0.7})
        REQUIRE(power(m, m.state_index("s0"), g, d, kN, 1).estimate ==
                Approx(0.8).margin(0.01));
}

TEST_CASE("time-uniform POWER formula on the funnel figure") {
    RewardlessMdp m = toy::uniform_a();
    RewardDistributionSpec u = RewardDistributionSpec::iid(m.num_states(), Marginal::uniform());
    for (double g : {0.1, 0.5, 0.9})
        REQUIRE(power(m, m.state_index("s1"), g, u, kN, 2).estimate ==
                Approx((1 - g) * (2.0 / 3.0 + 0.75 * g) + 0.5 * g * g).margin(0.01));
}

TEST_CASE("POWER limits use exact k/(k+1) for one-hot non-dominated sets") {
    RewardlessMdp m = toy::power_not_ic();
    RewardDistributionSpec u = RewardDistributionSpec::iid(m.num_states(), Marginal::uniform());
    EstimateWithCI s2 = power_limit(m, m.state_index("s2"), 1, u, 10, 0);
    REQUIRE(s2.estimate == 0.75);
    REQUIRE(s2.ci_radius == 0.0);
    EstimateWithCI s3 = power_limit(m, m.state_index("s3"), 1, u, 10, 0);
    REQUIRE(s3.estimate == Approx(2.0 / 3.0).margin(1e-15));
    REQUIRE(s3.ci_radius == 0.0);
    // Terminal-like 1-cycle: POWER(x1, 1) = E[single uniform draw] = 1/2.
    REQUIRE(power_limit(m, m.state_index("x1"), 1, u, 10, 0).estimate == 0.5);
}

TEST_CASE("POWER respects the iid bounds E[D] and E[max of |S| draws]") {
    RewardlessMdp m = toy::case_study();
    RewardDistributionSpec u = RewardDistributionSpec::iid(m.num_states(), Marginal::uniform());
    double emax = static_cast<double>(m.num_states()) / (m.num_states() + 1);
    for (const char* name : {"star", "l_sw", "r_se", "terminal"}) {
        EstimateWithCI est = power(m, m.state_index(name), 0.5, u, 50000, 3);
        REQUIRE(est.estimate + est.ci_radius >= 0.5);
        REQUIRE(est.estimate - est.ci_radius <= emax);
    }
}

TEST_CASE("POWER identity: state form equals next-state form per sample") {
    RewardlessMdp m = toy::case_study();
    RewardDistributionSpec u = RewardDistributionSpec::iid(m.num_states(), Marginal::uniform());
    int star = m.state_index("star");
    double gamma = 0.6;
    for (std::uint64_t i = 0; i < 200; ++i) {
        Vec r = sample_reward(u, 17, i);
        Vec V = optimal_value(m, RewardFunction::states(r), gamma);
        double lhs = (1.0 - gamma) / gamma * (V[star] - r[star]);
        double rhs = -std::numeric_limits<double>::infinity();
        for (int a : m.actions_at(star))
            rhs = std::max(rhs, (1.0 - gamma) * m.transition(star, a).dot(V));
        REQUIRE(lhs == Approx(rhs).margin(1e-9));
    }
}

TEST_CASE("POWER is Lipschitz along the discount grid") {
    RewardlessMdp m = toy::case_study();
    RewardDistributionSpec u = RewardDistributionSpec::iid(m.num_states(), Marginal::uniform());
    int lsw = m.state_index("l_sw");
    const double h = 0.1;
    // Support width 1 controls the constant; allow 3x the combined CI slack.
    double prev = power(m, lsw, 0.1, u, 100000, 5).estimate;
    double ci = power(m, lsw, 0.1, u, 100000, 5).ci_radius;
    for (double g = 0.2; g < 0.95; g += h) {
        double cur = power(m, lsw, g, u, 100000, 5).estimate;
        REQUIRE(std::abs(cur - prev) <= 2.0 * h + 3 * (2 * ci));
        prev = cur;
    }
}

TEST_CASE("optimality probabilities on the bundled environments") {
    SECTION("detached-exhibit fork: P(N)=1/3 and P(NE)=2/3 at gamma=1") {
        RewardlessMdp m = toy::power_not_ic();
        RewardDistributionSpec u = RewardDistributionSpec::iid(m.num_states(), Marginal::uniform());
        int s1 = m.state_index("s1");
        REQUIRE(optimality_probability(m, s1, ActionTarget{m.action_index("N")}, 1.0,
                                       u, kN, 0)
                    .estimate == Approx(1.0 / 3.0).margin(0.01));
        REQUIRE(optimality_probability(m, s1, ActionTarget{m.action_index("NE")}, 1.0,
                                       u, kN, 0)
                    .estimate == Approx(2.0 / 3.0).margin(0.01));
    }
    SECTION("hub figure: P(s, right, 1) = 2/5") {
        RewardlessMdp m = toy::opt_prob_half_prob();
        RewardDistributionSpec u = RewardDistributionSpec::iid(m.num_states(), Marginal::uniform());
        REQUIRE(optimality_probability(m, m.state_index("s"),
                                       ActionTarget{m.action_index("right")}, 1.0, u,
                                       kN, 1)
                    .estimate == Approx(0.4).margin(0.01));
    }
    SECTION("bottom-heavy marginal: P(s1, up, 0.5) = 0.5375") {
        RewardlessMdp m = toy::impossibility_graphical();
        RewardDistributionSpec d = RewardDistributionSpec::iid(m.num_states(), Marginal::cdf_power(2.0));
        REQUIRE(optimality_probability(m, m.state_index("s1"),
                                       ActionTarget{m.action_index("up")}, 0.5, d, kN,
                                       2)
                    .estimate == Approx(0.5375).margin(0.01));
        // Uniform marginal leaves up and right equally probable.
        RewardDistributionSpec u = RewardDistributionSpec::iid(m.num_states(), Marginal::uniform());
        REQUIRE(optimality_probability(m, m.state_index("s1"),
                                       ActionTarget{m.action_index("up")}, 0.5, u, kN,
                                       2)
                    .estimate == Approx(0.5).margin(0.01));
    }
    SECTION("empty targets are input errors") {
        RewardlessMdp m = toy::case_study();
        RewardDistributionSpec u = RewardDistributionSpec::iid(m.num_states(), Marginal::uniform());
        REQUIRE_THROWS_AS(optimality_probability(m, 0, VisitTarget{{}}, 0.5, u, 10, 0),
                          input_error);
    }
}

TEST_CASE("optimality probability is additive over Fnd for continuous iid") {
    RewardlessMdp m = toy::case_study();
    RewardDistributionSpec u = RewardDistributionSpec::iid(m.num_states(), Marginal::uniform());
    int star = m.state_index("star");
    VisitSet set = enumerate_visit_functions(m, star);
    NonDominationReport nd = non_dominated(set);
    double total = 0.0, combined_ci = 0.0;
    for (int i : nd.non_dominated) {
        EstimateWithCI est =
            optimality_probability(m, star, VisitTarget{{i}}, 0.5, u, 50000, 4);
        total += est.estimate;
        combined_ci += est.ci_radius;
    }
    REQUIRE(total == Approx(1.0).margin(combined_ci + 1e-6));
}

TEST_CASE("power_seeking_compare") {
    RewardlessMdp m = toy::case_study();
    RewardDistributionSpec u = RewardDistributionSpec::iid(m.num_states(), Marginal::uniform());
    int star = m.state_index("star");
    SECTION("an action against itself is exactly zero") {
        EstimateWithCI est = power_seeking_compare(
            m, star, m.action_index("left"), m.action_index("left"), 0.5, u, 1000, 0);
        REQUIRE(est.estimate == 0.0);
    }
    SECTION("right seeks more POWER than left at the fork") {
        EstimateWithCI est = power_seeking_compare(
            m, star, m.action_index("right"), m.action_index("left"), 0.5, u, kN, 0);
        REQUIRE(est.estimate > 0.0);
    }
    SECTION("counterexample figure: right seeks more POWER than up on (0,1]") {
        RewardlessMdp c = toy::counterex_powerseeking();
        RewardDistributionSpec cu = RewardDistributionSpec::iid(c.num_states(), Marginal::uniform());
        int s1 = c.state_index("s1");
        for (double g : {0.12, 0.5, 0.9, 1.0}) {
            EstimateWithCI est = power_seeking_compare(
                c, s1, c.action_index("right"), c.action_index("up"), g, cu, kN, 0);
            REQUIRE(est.estimate > 0.0);
        }
        // ...and yet up is the more probably optimal action at gamma=0.12
        // for the x^2 marginal.
        RewardDistributionSpec d = RewardDistributionSpec::iid(c.num_states(), Marginal::cdf_power(2.0));
        double up = optimality_probability(c, s1, ActionTarget{c.action_index("up")},
                                           0.12, d, 400000, 0)
                        .estimate;
        REQUIRE(up > 0.5);
    }
}

TEST_CASE("attainable utility distance") {
    RewardlessMdp m = toy::case_study();
    RewardDistributionSpec u = RewardDistributionSpec::iid(m.num_states(), Marginal::uniform());
    SECTION("identical distributions are exactly zero") {
        Vec d1 = Vec::Zero(m.num_states());
        d1[m.state_index("star")] = 1.0;
        REQUIRE(au_distance(m, d1, d1, 0.5, u, 100, 0).estimate == 0.0);
    }
    SECTION("one-step mutually reachable states are closer than 1") {
        RewardlessMdp s = toy::two_state_shuttle();
        RewardDistributionSpec su = RewardDistributionSpec::iid(2, Marginal::uniform());
        Vec a = Vec::Zero(2), b = Vec::Zero(2);
        a[0] = 1.0;
        b[1] = 1.0;
        EstimateWithCI est = au_distance(s, a, b, 0.9, su, 50000, 0);
        REQUIRE(est.estimate < 1.0);
        REQUIRE(est.estimate >= 0.0);
    }
    SECTION("at gamma = 1, all non-start states are equidistant from s") {
        RewardlessMdp g = toy::sim_rsd_loss();
        RewardDistributionSpec gu = RewardDistributionSpec::iid(g.num_states(), Marginal::uniform());
        Vec from = Vec::Zero(g.num_states());
        from[g.state_index("s")] = 1.0;
        std::vector<EstimateWithCI> vals;
        for (const char* other : {"u", "mid", "v"}) {
            Vec to = Vec::Zero(g.num_states());
            to[g.state_index(other)] = 1.0;
            vals.push_back(au_distance_normalized(g, from, to, 1.0, gu, 50000, 9));
        }
        // mid and v lose exactly the same gains sample by sample.
        REQUIRE(vals[1].estimate == vals[2].estimate);
        // u matches in distribution: same value within the combined radii,
        // and all three equal the closed form E[(Y-X)^+] = 1/6.
        REQUIRE(vals[0].estimate ==
                Approx(vals[1].estimate).margin(vals[0].ci_radius + vals[1].ci_radius));
        for (const auto& v : vals)
            REQUIRE(v.estimate == Approx(1.0 / 6.0).margin(v.ci_radius));
    }
    SECTION("metric axioms hold per shared-sample batch") {
        int n = m.num_states();
        RewardDistributionSpec spec = RewardDistributionSpec::iid(n, Marginal::uniform());
        Vec da = Vec::Zero(n), db = Vec::Zero(n), dc = Vec::Zero(n);
        da[m.state_index("star")] = 1.0;
        db[m.state_index("l_sw")] = 1.0;
        dc[m.state_index("r_se")] = 1.0;
        double ab = 0, ba = 0, ac = 0, cb = 0;
        for (std::uint64_t i = 0; i < 500; ++i) {
            Vec r = sample_reward(spec, 21, i);
            Vec V = optimal_value(m, RewardFunction::states(r), 0.5);
            double va = da.dot(V), vb = db.dot(V), vc = dc.dot(V);
            ab += std::abs(va - vb);
            ba += std::abs(vb - va);
            ac += std::abs(va - vc);
            cb += std::abs(vc - vb);
            // Pointwise triangle inequality.
            REQUIRE(std::abs(va - vc) <= std::abs(va - vb) + std::abs(vb - vc) + 1e-12);
        }
        REQUIRE(ab == ba);  // symmetry is bit-exact
        REQUIRE(ac <= ab + cb + 1e-9);
    }
}

TEST_CASE("exact orbit enumeration is capped at 10! states") {
    std::vector<std::string> states, actions{"stay"};
    for (int i = 0; i < 11; ++i) states.push_back("s" + std::to_string(i));
    RewardlessMdp big(states, actions);
    for (int i = 0; i < 11; ++i) big.set_deterministic(states[i], "stay", states[i]);
    big.validate();
    RewardDistributionSpec d = RewardDistributionSpec::degenerate(Vec::Zero(11));
    REQUIRE_THROWS_AS(orbit_vote(big, PowerVoteQuantity{0, 1, 0.5}, d, true),
                      size_error);
}

TEST_CASE("orbit votes") {
    RewardlessMdp m = toy::case_study();
    SECTION("an iid spec has a one-element orbit") {
        RewardDistributionSpec u = RewardDistributionSpec::iid(m.num_states(), Marginal::uniform());
        OrbitVote vote = orbit_vote(
            m, PowerVoteQuantity{m.state_index("r_se"), m.state_index("l_sw"), 0.5}, u,
            true, 50000);
        REQUIRE(vote.count_gt + vote.count_lt + vote.count_eq == 1);
        REQUIRE(vote.count_gt == 1);
    }
    SECTION("r_se never loses the POWER vote against l_sw on indicator orbits") {
        Vec e = Vec::Zero(m.num_states());
        e[m.state_index("l_w")] = 1.0;
        RewardDistributionSpec d = RewardDistributionSpec::degenerate(e);
        OrbitVote vote = orbit_vote(
            m, PowerVoteQuantity{m.state_index("r_se"), m.state_index("l_sw"), 0.5}, d,
            true);
        REQUIRE(vote.count_gt >= vote.count_lt);
        REQUIRE(vote.count_gt + vote.count_lt + vote.count_eq ==
                static_cast<std::uint64_t>(m.num_states()));
    }
    SECTION("average-optimal policies tend to avoid the terminal 1-cycle") {
        // Cor avg-avoid-terminal on the fork: votes for RSD \ {e_terminal}
        // dominate votes for {e_terminal}, strictly somewhere, because a
        // third 1-cycle exists.
        Vec e = Vec::Zero(m.num_states());
        e[m.state_index("terminal")] = 1.0;
        RewardDistributionSpec d = RewardDistributionSpec::degenerate(e);
        int star = m.state_index("star");
        std::vector<Rsd> all = rsd_set(m, star);
        RsdTarget avoid, enter;
        for (const Rsd& x : all) {
            if (x.distribution[m.state_index("terminal")] == 1.0)
                enter.distributions.push_back(x.distribution);
            else
                avoid.distributions.push_back(x.distribution);
        }
        std::uint64_t gt = 0, lt = 0;
        for (int i = 0; i < m.num_states(); ++i) {
            std::vector<int> map(m.num_states());
            std::iota(map.begin(), map.end(), 0);
            std::swap(map[m.state_index("terminal")], map[i]);
            StatePermutation phi(map);
            RewardDistributionSpec pd = RewardDistributionSpec::permuted(d, phi);
            double pa = optimality_probability(m, star, avoid, 1.0, pd, 1, 0).estimate;
            double pe = optimality_probability(m, star, enter, 1.0, pd, 1, 0).estimate;
            gt += pa > pe;
            lt += pe > pa;
        }
        REQUIRE(gt > lt);
    }
}
