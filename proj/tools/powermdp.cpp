// Command-line front end: load MDP/problem files, dispatch analyses, emit CSV.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "powermdp/powermdp.hpp"

using namespace powermdp;

namespace {

struct Common {
    std::string mdp_path;
    std::string state, state2, action, action2;
    double gamma = 0.5;
    std::string dist = "uniform01";
    std::uint64_t samples = 100000;
    std::uint64_t seed = 0;
    double confidence = 0.95;
    std::string out_path;
};

std::ostream& output(const Common& c, std::ofstream& file) {
    if (c.out_path.empty()) return std::cout;
    file.open(c.out_path);
    if (!file) throw input_error("cannot open output file '" + c.out_path + "'");
    return file;
}

void print_config(const CLI::App* sub, const Common& c) {
    std::cerr << "# " << sub->get_name() << " mdp=" << c.mdp_path
              << " state=" << c.state << " state2=" << c.state2
              << " action=" << c.action << " action2=" << c.action2
              << " gamma=" << c.gamma << " dist=" << c.dist
              << " samples=" << c.samples << " seed=" << c.seed
              << " ci=" << c.confidence
              << " threads=" << worker_count() << "\n";
}

void add_common(CLI::App* sub, Common& c, bool needs_mdp = true) {
    auto* opt = sub->add_option("--mdp", c.mdp_path, "MDP JSON file");
    if (needs_mdp) opt->required();
    sub->add_option("--state", c.state, "state name");
    sub->add_option("--state2", c.state2, "second state name");
    sub->add_option("--action", c.action, "action name");
    sub->add_option("--action2", c.action2, "second action name");
    sub->add_option("--gamma", c.gamma, "discount rate in [0,1]");
    sub->add_option("--dist", c.dist, "reward distribution spec");
    sub->add_option("--samples", c.samples, "Monte Carlo sample count");
    sub->add_option("--seed", c.seed, "RNG seed");
    sub->add_option("--ci", c.confidence, "confidence level for Hoeffding radii");
    sub->add_option("--out", c.out_path, "write CSV here instead of stdout");
}

void emit_estimate(std::ostream& os, const std::string& quantity,
                   const std::string& state, double gamma,
                   const EstimateWithCI& est) {
    os << quantity << "," << state << "," << gamma << "," << est.estimate << ","
       << est.ci_radius << "," << est.samples << "," << est.seed << "\n";
}

void warn_degenerate_at_one(const RewardDistributionSpec& spec, double gamma) {
    if (gamma == 1.0 && spec.is_degenerate())
        std::cerr << "# warning: gamma=1 optimality uses average optimality over "
                     "RSDs; for degenerate distributions this can disagree with "
                     "the Blackwell limit on a measure-zero set\n";
}

std::string cycles_of(const StatePermutation& phi, const RewardlessMdp* mdp) {
    std::string out;
    std::vector<char> seen(phi.size(), 0);
    for (int i = 0; i < phi.size(); ++i) {
        if (seen[i] || phi(i) == i) continue;
        out += "(";
        int j = i;
        bool first = true;
        while (!seen[j]) {
            seen[j] = 1;
            if (!first) out += " ";
            out += mdp ? mdp->state_name(j) : std::to_string(j);
            first = false;
            j = phi(j);
        }
        out += ")";
    }
    return out.empty() ? "()" : out;
}

int run_figures(std::ostream& os, std::uint64_t samples, std::uint64_t seed);

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"powermdp: finite-MDP power-seeking and side-effect analyses"};
    app.require_subcommand(1);

    Common c;

    auto* power_cmd = app.add_subcommand("power", "POWER(s, gamma) estimate");
    add_common(power_cmd, c);
    auto* vavg_cmd = app.add_subcommand("vavg", "average optimal value at a state");
    add_common(vavg_cmd, c);
    auto* optprob_cmd =
        app.add_subcommand("optprob", "optimality probability of an action");
    add_common(optprob_cmd, c);
    auto* nd_cmd =
        app.add_subcommand("nondominated", "non-dominated visit distribution functions");
    add_common(nd_cmd, c);
    auto* rsd_cmd = app.add_subcommand("rsd", "recurrent state distributions");
    add_common(rsd_cmd, c);
    auto* audist_cmd =
        app.add_subcommand("au-dist", "attainable utility distance between states");
    add_common(audist_cmd, c);
    bool normalized = false;
    audist_cmd->add_flag("--normalized", normalized, "report (1-gamma) d_au");
    auto* orbit_cmd = app.add_subcommand("orbit-vote", "orbit tally of a comparison");
    add_common(orbit_cmd, c);
    bool exact_orbit = false;
    std::uint64_t perm_samples = 1000;
    orbit_cmd->add_flag("--exact", exact_orbit, "enumerate the full orbit");
    orbit_cmd->add_option("--perm-samples", perm_samples,
                          "sampled permutations when not exact");
    auto* seeking_cmd =
        app.add_subcommand("power-seeking", "paired POWER comparison of two actions");
    add_common(seeking_cmd, c);

    auto* copies_cmd = app.add_subcommand("copies", "copy-containment involutions");
    std::string problem_path;
    copies_cmd->add_option("--problem", problem_path, "problem JSON")->required();
    copies_cmd->add_option("--out", c.out_path, "output path");

    auto* retarget_cmd =
        app.add_subcommand("retarget", "orbit tendency tally for a decision rule");
    retarget_cmd->add_option("--problem", problem_path, "problem JSON")->required();
    retarget_cmd->add_option("--out", c.out_path, "output path");

    auto* bandit_cmd = app.add_subcommand("bandit", "epsilon-greedy bandit training");
    std::string utilities = "5,4,3,2,1";
    double epsilon = 0.1;
    int trials = 100;
    std::uint64_t sims = 10000;
    bandit_cmd->add_option("--utilities", utilities, "five comma-separated payoffs");
    bandit_cmd->add_option("--epsilon", epsilon, "exploration rate");
    bandit_cmd->add_option("--trials", trials, "training trials T");
    bandit_cmd->add_option("--sims", sims, "Monte Carlo simulations");
    bandit_cmd->add_option("--seed", c.seed, "RNG seed");
    bandit_cmd->add_option("--out", c.out_path, "output path");

    auto* aup_cmd =
        app.add_subcommand("aup-train", "gridworld AUP vs vanilla experiment");
    std::string env_name = "options";
    double lambda = 0.01;
    int aux_count = 20;
    int episodes = 5000;
    int num_seeds = 1;
    double aup_gamma = 0.996;
    std::uint64_t score_samples = 200;
    aup_cmd->add_option("--env", env_name, "options | damage");
    aup_cmd->add_option("--lambda", lambda, "penalty coefficient");
    aup_cmd->add_option("--aux-count", aux_count, "number of auxiliary rewards");
    aup_cmd->add_option("--episodes", episodes, "Q-learning episodes");
    aup_cmd->add_option("--seeds", num_seeds, "number of training seeds");
    aup_cmd->add_option("--gamma", aup_gamma, "discount");
    aup_cmd->add_option("--samples", score_samples, "reward samples for D_rand scores");
    aup_cmd->add_option("--seed", c.seed, "base seed");
    aup_cmd->add_option("--out", c.out_path, "output path");

    auto* delayed_cmd =
        app.add_subcommand("delayed-spec", "geometric delayed-specification solver");
    double pcorrect = 0.1;
    add_common(delayed_cmd, c);
    delayed_cmd->add_option("--p", pcorrect, "per-step correction probability");

    auto* regret_cmd = app.add_subcommand("regret", "proportional regret report");
    std::string reward_path, proxy_path;
    int t_correct = 1;
    add_common(regret_cmd, c);
    regret_cmd->add_option("--reward", reward_path, "true reward JSON")->required();
    regret_cmd->add_option("--proxy", proxy_path,
                           "proxy reward JSON the prefix policy optimizes");
    regret_cmd->add_option("--t", t_correct, "correction time");

    auto* gen_cmd = app.add_subcommand("gen-figures", "write the bundled figure MDPs");
    std::string gen_dir = "data";
    gen_cmd->add_option("--dir", gen_dir, "output directory");

    auto* figures_cmd =
        app.add_subcommand("figures", "run the pinned figure-value checks");
    figures_cmd->add_option("--samples", c.samples, "Monte Carlo sample count");
    figures_cmd->add_option("--seed", c.seed, "RNG seed");
    figures_cmd->add_option("--out", c.out_path, "output path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    std::ofstream file;
    try {
        std::ostream& os = output(c, file);

        if (power_cmd->parsed() || vavg_cmd->parsed()) {
            auto* sub = power_cmd->parsed() ? power_cmd : vavg_cmd;
            print_config(sub, c);
            RewardlessMdp mdp = load_mdp_file(c.mdp_path);
            RewardDistributionSpec spec = parse_reward_spec(mdp, c.dist);
            int s = mdp.state_index(c.state);
            os << "quantity,state,gamma,estimate,ci_radius,n,seed\n";
            EstimateWithCI est =
                power_cmd->parsed()
                    ? power_any(mdp, s, c.gamma, spec, c.samples, c.seed)
                    : average_optimal_value(mdp, s, c.gamma, spec, c.samples, c.seed);
            emit_estimate(os, sub->get_name(), c.state, c.gamma, est);
        } else if (optprob_cmd->parsed()) {
            print_config(optprob_cmd, c);
            RewardlessMdp mdp = load_mdp_file(c.mdp_path);
            RewardDistributionSpec spec = parse_reward_spec(mdp, c.dist);
            warn_degenerate_at_one(spec, c.gamma);
            int s = mdp.state_index(c.state);
            int a = mdp.action_index(c.action);
            os << "quantity,state,gamma,estimate,ci_radius,n,seed\n";
            EstimateWithCI est = optimality_probability(
                mdp, s, ActionTarget{a}, c.gamma, spec, c.samples, c.seed);
            emit_estimate(os, "optprob:" + c.action, c.state, c.gamma, est);
        } else if (nd_cmd->parsed()) {
            print_config(nd_cmd, c);
            RewardlessMdp mdp = load_mdp_file(c.mdp_path);
            int s = mdp.state_index(c.state);
            VisitSet set = enumerate_visit_functions(mdp, s);
            NonDominationReport nd = non_dominated(set);
            os << "member,status,margin";
            for (const auto& name : mdp.state_names()) os << "," << name;
            os << "\n";
            for (std::size_t i = 0; i < set.members.size(); ++i) {
                std::string status = nd.contains(static_cast<int>(i)) ? "nd"
                                     : std::find(nd.indeterminate.begin(),
                                                 nd.indeterminate.end(),
                                                 static_cast<int>(i)) !=
                                               nd.indeterminate.end()
                                         ? "indeterminate"
                                         : "dominated";
                double margin = 0.0;
                for (std::size_t k = 0; k < nd.non_dominated.size(); ++k)
                    if (nd.non_dominated[k] == static_cast<int>(i))
                        margin = nd.margins[k];
                os << i << "," << status << "," << margin;
                for (int t = 0; t < mdp.num_states(); ++t)
                    os << "," << set.at_half[i][t];
                os << "\n";
            }
        } else if (rsd_cmd->parsed()) {
            print_config(rsd_cmd, c);
            RewardlessMdp mdp = load_mdp_file(c.mdp_path);
            int s = mdp.state_index(c.state);
            std::vector<Rsd> all = rsd_set(mdp, s);
            std::vector<Rsd> nd = rsd_nondominated(mdp, s);
            os << "member,status";
            for (const auto& name : mdp.state_names()) os << "," << name;
            os << "\n";
            for (std::size_t i = 0; i < all.size(); ++i) {
                bool is_nd = false;
                for (const Rsd& d : nd)
                    if ((d.distribution - all[i].distribution)
                            .lpNorm<Eigen::Infinity>() <= 1e-9)
                        is_nd = true;
                os << i << "," << (is_nd ? "nd" : "dominated");
                for (int t = 0; t < mdp.num_states(); ++t)
                    os << "," << all[i].distribution[t];
                os << "\n";
            }
        } else if (audist_cmd->parsed()) {
            print_config(audist_cmd, c);
            RewardlessMdp mdp = load_mdp_file(c.mdp_path);
            RewardDistributionSpec spec = parse_reward_spec(mdp, c.dist);
            Vec d1 = Vec::Zero(mdp.num_states());
            Vec d2 = Vec::Zero(mdp.num_states());
            d1[mdp.state_index(c.state)] = 1.0;
            d2[mdp.state_index(c.state2)] = 1.0;
            os << "quantity,state,gamma,estimate,ci_radius,n,seed\n";
            EstimateWithCI est =
                (normalized || c.gamma == 1.0)
                    ? au_distance_normalized(mdp, d1, d2, c.gamma, spec, c.samples,
                                             c.seed)
                    : au_distance(mdp, d1, d2, c.gamma, spec, c.samples, c.seed);
            emit_estimate(os, "au_dist:" + c.state + ":" + c.state2, c.state,
                          c.gamma, est);
        } else if (seeking_cmd->parsed()) {
            print_config(seeking_cmd, c);
            RewardlessMdp mdp = load_mdp_file(c.mdp_path);
            RewardDistributionSpec spec = parse_reward_spec(mdp, c.dist);
            int s = mdp.state_index(c.state);
            EstimateWithCI est = power_seeking_compare(
                mdp, s, mdp.action_index(c.action), mdp.action_index(c.action2),
                c.gamma, spec, c.samples, c.seed);
            os << "quantity,state,gamma,estimate,ci_radius,n,seed\n";
            emit_estimate(os, "power_seek:" + c.action + "-" + c.action2, c.state,
                          c.gamma, est);
        } else if (orbit_cmd->parsed()) {
            print_config(orbit_cmd, c);
            RewardlessMdp mdp = load_mdp_file(c.mdp_path);
            RewardDistributionSpec spec = parse_reward_spec(mdp, c.dist);
            VoteQuantity q =
                !c.action.empty()
                    ? VoteQuantity{OptProbVoteQuantity{mdp.state_index(c.state),
                                                       mdp.action_index(c.action),
                                                       mdp.action_index(c.action2),
                                                       c.gamma}}
                    : VoteQuantity{PowerVoteQuantity{mdp.state_index(c.state),
                                                     mdp.state_index(c.state2),
                                                     c.gamma}};
            OrbitVote vote = orbit_vote(mdp, q, spec, exact_orbit, c.samples,
                                        perm_samples, c.seed);
            os << "count_gt,count_lt,count_eq,exact\n";
            os << vote.count_gt << "," << vote.count_lt << "," << vote.count_eq
               << "," << (vote.exact ? 1 : 0) << "\n";
        } else if (copies_cmd->parsed()) {
            std::ifstream in(problem_path);
            if (!in) throw input_error("cannot open '" + problem_path + "'");
            nlohmann::json j;
            in >> j;
            auto parse_set = [&](const char* key) {
                std::vector<Vec> out;
                for (const auto& row : j.at(key)) {
                    Vec v(row.size());
                    for (std::size_t i = 0; i < row.size(); ++i)
                        v[static_cast<int>(i)] = row[i].get<double>();
                    out.push_back(std::move(v));
                }
                return out;
            };
            std::vector<Vec> X = parse_set("x"), Xp = parse_set("x_prime");
            CopySearchOptions opts;
            if (j.contains("movable"))
                opts.movable = j.at("movable").get<std::vector<int>>();
            auto witnesses = check_copy_containment(X, Xp, opts);
            os << "witness,cycles\n";
            for (std::size_t i = 0; i < witnesses.size(); ++i)
                os << i << "," << cycles_of(witnesses[i], nullptr) << "\n";
        } else if (retarget_cmd->parsed()) {
            std::ifstream in(problem_path);
            if (!in) throw input_error("cannot open '" + problem_path + "'");
            nlohmann::json j;
            in >> j;
            OutcomeProblem prob;
            for (const auto& row : j.at("outcomes")) {
                Vec v(row.size());
                for (std::size_t i = 0; i < row.size(); ++i)
                    v[static_cast<int>(i)] = row[i].get<double>();
                prob.outcomes.push_back(std::move(v));
            }
            prob.label_a = j.at("a").get<std::vector<int>>();
            prob.label_b = j.at("b").get<std::vector<int>>();
            Vec u(j.at("utility").size());
            for (std::size_t i = 0; i < j.at("utility").size(); ++i)
                u[static_cast<int>(i)] = j.at("utility")[i].get<double>();
            std::string kind = j.at("rule").at("kind").get<std::string>();
            DecisionRule rule = ArgmaxRule{};
            if (kind == "argmax") rule = ArgmaxRule{};
            else if (kind == "fraction-optimal") rule = FractionOptimalRule{};
            else if (kind == "anti-argmax") rule = AntiArgmaxRule{};
            else if (kind == "boltzmann")
                rule = BoltzmannRule{j.at("rule").at("temperature").get<double>()};
            else if (kind == "satisfice")
                rule = SatisficeRule{j.at("rule").at("threshold").get<double>()};
            else if (kind == "best-of-k")
                rule = BestOfKRule{j.at("rule").at("k").get<int>()};
            else if (kind == "quantilizer")
                rule = QuantilizerRule{j.at("rule").at("q").get<double>(), {}};
            else if (kind == "uniform-random") rule = UniformRandomRule{};
            else if (kind == "stubborn")
                rule = StubbornRule{j.at("rule").at("index").get<int>()};
            else throw input_error("unknown rule kind '" + kind + "'");
            std::uint64_t ratio = j.value("ratio", 1);
            OrbitTendency tally = orbit_tendency_check(rule, prob, u, ratio);
            os << "count_b,count_a,count_eq,ratio,holds\n";
            os << tally.count_b << "," << tally.count_a << "," << tally.count_eq
               << "," << ratio << "," << (tally.holds(ratio) ? 1 : 0) << "\n";
        } else if (bandit_cmd->parsed()) {
            BanditConfig cfg;
            std::stringstream ss(utilities);
            std::string tok;
            int idx = 0;
            while (std::getline(ss, tok, ',') && idx < kBanditArms)
                cfg.utilities[idx++] = std::stod(tok);
            if (idx != kBanditArms)
                throw input_error("bandit: need exactly five utilities");
            cfg.epsilon = epsilon;
            cfg.trials = trials;
            std::cerr << "# bandit utilities=" << utilities << " eps=" << epsilon
                      << " T=" << trials << " sims=" << sims << " seed=" << c.seed
                      << "\n";
            BanditTrainResult r = bandit_train_prob(cfg, sims, c.seed);
            os << "arm,estimate,ci_radius,n,seed,train_lower_bound\n";
            double lb = 1.0 - std::pow(1.0 - epsilon / 4.0, trials);
            for (int a = 0; a < kBanditArms; ++a)
                os << a << "," << r.arm_probability[a].estimate << ","
                   << r.arm_probability[a].ci_radius << "," << sims << "," << c.seed
                   << "," << lb << "\n";
        } else if (aup_cmd->parsed()) {
            GridworldEnv env = build_gridworld(env_name);
            GroundTruthDists dists = ground_truth_dists(env);
            RewardFunction r_env = env_reward(env, aup_gamma);
            Policy vanilla = optimal_policy(env.mdp, r_env, aup_gamma);
            std::cerr << "# aup-train env=" << env_name << " states="
                      << env.mdp.num_states() << " lambda=" << lambda
                      << " aux=" << aux_count << " episodes=" << episodes
                      << " gamma=" << aup_gamma << " seeds=" << num_seeds << "\n";
            os << "seed,condition,dist,score,residual\n";
            for (int k = 0; k < num_seeds; ++k) {
                std::uint64_t seed = c.seed + static_cast<std::uint64_t>(k);
                AupConfig acfg{lambda, sample_auxiliaries(env.mdp, aux_count, seed),
                               env.noop_action, aup_gamma};
                RewardFunction r_aup = build_aup_reward(env.mdp, r_env, acfg);
                QLearningConfig qcfg{aup_gamma, 0.1, episodes, env.horizon, env.start};
                Policy aup = greedy_policy(env.mdp, q_learning(env.mdp, r_aup, qcfg, seed));
                struct Row { const char* name; const RewardDistributionSpec* d; std::uint64_t n; };
                const Row rows[] = {{"rand", &dists.d_rand, score_samples},
                                    {"true", &dists.d_true, 1},
                                    {"true-inv", &dists.d_true_inv, 1}};
                for (const Row& row : rows) {
                    double sv = delayed_spec_score(env.mdp, vanilla, *row.d, aup_gamma,
                                                   10, env.start, row.n, seed)
                                    .estimate;
                    double sa = delayed_spec_score(env.mdp, aup, *row.d, aup_gamma, 10,
                                                   env.start, row.n, seed)
                                    .estimate;
                    os << seed << ",vanilla," << row.name << "," << sv << ","
                       << (sv - sa) << "\n";
                    os << seed << ",aup," << row.name << "," << sa << ","
                       << (sa - sv) << "\n";
                }
            }
        } else if (delayed_cmd->parsed()) {
            print_config(delayed_cmd, c);
            RewardlessMdp mdp = load_mdp_file(c.mdp_path);
            RewardDistributionSpec spec = parse_reward_spec(mdp, c.dist);
            DelayedSolution sol =
                solve_delayed_geometric(mdp, spec, pcorrect, c.gamma, c.samples, c.seed);
            os << "state,surrogate_reward,prefix_action,gamma_aup\n";
            for (int s = 0; s < mdp.num_states(); ++s)
                os << mdp.state_name(s) << "," << sol.surrogate.at(s) << ","
                   << mdp.action_name(sol.prefix(s)) << "," << sol.gamma_aup << "\n";
        } else if (regret_cmd->parsed()) {
            print_config(regret_cmd, c);
            RewardlessMdp mdp = load_mdp_file(c.mdp_path);
            RewardFunction truth =
                RewardFunction::states(detail::load_reward_vector(mdp, reward_path));
            Policy pi = proxy_path.empty()
                            ? optimal_policy(mdp, truth, c.gamma)
                            : optimal_policy(mdp,
                                             RewardFunction::states(
                                                 detail::load_reward_vector(mdp, proxy_path)),
                                             c.gamma == 1.0 ? 0.5 : c.gamma);
            int s = mdp.state_index(c.state);
            RegretReport rep = proportional_regret(mdp, pi, t_correct, truth, s, c.gamma);
            os << "state,gamma,t,pregret,v_opt_norm,v_switch_norm,v_min_norm\n";
            os << c.state << "," << c.gamma << "," << t_correct << "," << rep.pregret
               << "," << rep.v_opt_norm << "," << rep.v_switch_norm << ","
               << rep.v_min_norm << "\n";
        } else if (gen_cmd->parsed()) {
            for (const auto& [name, build] : toy::registry()) {
                std::string path = gen_dir + "/" + name + ".json";
                std::ofstream out(path);
                if (!out) throw input_error("cannot write '" + path + "'");
                out << mdp_to_json(build()).dump(2) << "\n";
                std::cerr << "wrote " << path << "\n";
            }
        } else if (figures_cmd->parsed()) {
            return run_figures(os, c.samples, c.seed);
        }
    } catch (const size_error& e) {
        std::cerr << "size error: " << e.what() << "\n";
        return 3;
    } catch (const input_error& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}

namespace {

// Pinned figure values at CLI scale (fewer samples than the acceptance
// suite; tolerances widened accordingly).
int run_figures(std::ostream& os, std::uint64_t samples, std::uint64_t seed) {
    int failures = 0;
    auto check = [&](const std::string& name, double got, double want, double tol) {
        bool ok = std::abs(got - want) <= tol;
        failures += !ok;
        os << (ok ? "PASS" : "FAIL") << " " << name << " got=" << got
           << " want=" << want << " tol=" << tol << "\n";
    };
    const std::uint64_t n = samples;

    {
        RewardlessMdp m = toy::case_study();
        RewardDistributionSpec u =
            RewardDistributionSpec::iid(m.num_states(), Marginal::uniform());
        for (double g : {0.1, 0.5, 0.9}) {
            check("case_study POWER(terminal)",
                  power(m, m.state_index("terminal"), g, u, n, seed).estimate, 0.5,
                  0.01);
            check("case_study POWER(r_se)",
                  power(m, m.state_index("r_se"), g, u, n, seed).estimate, 2.0 / 3.0,
                  0.01);
            check("case_study POWER(l_sw)",
                  power(m, m.state_index("l_sw"), g, u, n, seed).estimate,
                  (2.0 / 3.0 + g / 2.0) / (1.0 + g), 0.01);
        }
    }
    {
        RewardlessMdp m = toy::power_not_ic();
        RewardDistributionSpec u =
            RewardDistributionSpec::iid(m.num_states(), Marginal::uniform());
        check("power_not_ic POWER(s2,1)",
              power_limit(m, m.state_index("s2"), 1, u, n, seed).estimate, 0.75, 0.0);
        check("power_not_ic POWER(s3,1)",
              power_limit(m, m.state_index("s3"), 1, u, n, seed).estimate, 2.0 / 3.0,
              0.0);
        check("power_not_ic P(s1,N,1)",
              optimality_probability(m, m.state_index("s1"),
                                     ActionTarget{m.action_index("N")}, 1.0, u, n, seed)
                  .estimate,
              1.0 / 3.0, 0.01);
        check("power_not_ic P(s1,NE,1)",
              optimality_probability(m, m.state_index("s1"),
                                     ActionTarget{m.action_index("NE")}, 1.0, u, n,
                                     seed)
                  .estimate,
              2.0 / 3.0, 0.01);
    }
    {
        RewardlessMdp m = toy::opt_prob_half_prob();
        RewardDistributionSpec u =
            RewardDistributionSpec::iid(m.num_states(), Marginal::uniform());
        check("opt_prob_half_prob P(s,right,1)",
              optimality_probability(m, m.state_index("s"),
                                     ActionTarget{m.action_index("right")}, 1.0, u, n,
                                     seed)
                  .estimate,
              0.4, 0.01);
    }
    {
        RewardlessMdp m = toy::impossibility_graphical();
        RewardDistributionSpec d =
            RewardDistributionSpec::iid(m.num_states(), Marginal::cdf_power(2.0));
        check("impossibility_graphical P(s1,up,0.5)",
              optimality_probability(m, m.state_index("s1"),
                                     ActionTarget{m.action_index("up")}, 0.5, d, n,
                                     seed)
                  .estimate,
              0.5375, 0.01);
    }
    {
        RewardlessMdp m = toy::uniform_a();
        RewardDistributionSpec u =
            RewardDistributionSpec::iid(m.num_states(), Marginal::uniform());
        for (double g : {0.1, 0.5, 0.9})
            check("uniform_a POWER(s1)",
                  power(m, m.state_index("s1"), g, u, n, seed).estimate,
                  (1 - g) * (2.0 / 3.0 + 0.75 * g) + 0.5 * g * g, 0.01);
    }
    {
        RewardlessMdp m = toy::power_calc();
        std::vector<Marginal> ms = {Marginal::uniform(), Marginal::uniform(),
                                    Marginal::cdf_power(2.0), Marginal::uniform()};
        RewardDistributionSpec d = RewardDistributionSpec::product(ms);
        for (double g : {0.3, 0.7})
            check("power_calc POWER(s0)",
                  power(m, m.state_index("s0"), g, d, n, seed).estimate, 0.8, 0.01);
    }
    {
        RewardlessMdp m = toy::sharp_bound();
        Policy right{{m.action_index("right"), m.action_index("back"),
                      m.action_index("stay")}};
        for (double g : {0.25, 0.5, 0.75})
            check("sharp_bound pregret",
                  proportional_regret(m, right, 1, toy::sharp_bound_reward(),
                                      m.state_index("s1"), g)
                      .pregret,
                  1.0 - g * g, 1e-9);
    }
    os << (failures == 0 ? "ALL FIGURES PASS" : "FIGURE FAILURES PRESENT") << "\n";
    return failures == 0 ? 0 : 1;
}

}  // namespace
