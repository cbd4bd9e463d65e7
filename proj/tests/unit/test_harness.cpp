#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <stdexcept>

#include "doctest.h"

#include "banditlab/ars_ucb.hpp"
#include "banditlab/config.hpp"
#include "banditlab/csv.hpp"
#include "banditlab/errors.hpp"
#include "banditlab/experiment.hpp"
#include "invariants.hpp"
#include "oracles.hpp"

using namespace banditlab;

namespace {

// Plays a fixed action list.
class ScriptPolicy final : public Policy {
public:
    explicit ScriptPolicy(std::vector<std::size_t> a) : actions_(std::move(a)) {}
    std::string name() const override { return "script"; }
    void begin(std::size_t, std::optional<std::uint64_t>) override {}
    std::size_t select(std::size_t t) override { return actions_[(t - 1) % actions_.size()]; }
    void observe(std::size_t, double) override {}

private:
    std::vector<std::size_t> actions_;
};

std::filesystem::path temp_path(const std::string& name) {
    return std::filesystem::temp_directory_path() / ("banditlab_test_" + name);
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

ExperimentConfig small_config(const std::string& preset, std::uint64_t T, std::size_t reps) {
    auto cfg = load_config(preset);
    cfg.horizon = T;
    cfg.reps = reps;
    cfg.stride = 0;
    cfg.validate();
    return cfg;
}

}  // namespace

TEST_SUITE("regret") {

TEST_CASE("pseudo-regret sums the gaps of the actions") {
    auto acc = RegretAccount::pseudo({0.9, 0.5});
    acc.record(1, 1, 0.0);
    acc.record(2, 1, 0.0);
    CHECK(acc.record(3, 0, 0.0) == doctest::Approx(0.8));
}

TEST_CASE("always pulling the best arm gives zero pseudo-regret") {
    auto inst = std::make_shared<const StochasticInstance>(
        std::vector<SpreadKernel>{SpreadKernel(family::Discounted{0.5}, 0.7), SpreadKernel(family::PointMass{2}, 0.2)});
    StochasticEnvironment env(inst, Rng(1));
    ScriptPolicy p({0});
    const auto res = run_episode(env, p, RegretAccount::pseudo(inst->means()), {500, 50, false});
    CHECK(res.curve.final_regret == 0.0);
    CHECK(res.curve.samples.size() == 10);
}

TEST_CASE("realized regret is zero when the leader is always pulled") {
    std::vector<double> v;
    for (int t = 0; t < 100; ++t) {
        v.push_back(0.6);
        v.push_back(t % 3 == 0 ? 1.0 : 0.0);
    }
    auto inst = std::make_shared<const AdversarialInstance>(2, 100, v, delay::Streak{5, 2});
    AdversarialEnvironment env(inst);
    ScriptPolicy p({0});
    const auto res = run_episode(env, p, RegretAccount::realized(inst), {100, 10, false});
    CHECK(res.curve.final_regret == doctest::Approx(0.0).epsilon(1e-12));
    // the other arm: G_0(T) - G_1(T)
    AdversarialEnvironment env2(inst);
    ScriptPolicy q({1});
    const auto r2 = run_episode(env2, q, RegretAccount::realized(inst), {100, 10, false});
    CHECK(r2.curve.final_regret == doctest::Approx(inst->totals()[0] - inst->totals()[1]));
}

TEST_CASE("samples at multiples of the stride and at T") {
    auto inst = std::make_shared<const StochasticInstance>(
        std::vector<SpreadKernel>{SpreadKernel(family::PointMass{1}, 0.7), SpreadKernel(family::PointMass{1}, 0.2)});
    StochasticEnvironment env(inst, Rng(1));
    ScriptPolicy p({1});
    const auto res = run_episode(env, p, RegretAccount::pseudo(inst->means()), {25, 10, false});
    REQUIRE(res.curve.samples.size() == 3);
    CHECK(res.curve.samples[0].t == 10);
    CHECK(res.curve.samples[2].t == 25);
    CHECK(res.curve.samples[2].regret == doctest::Approx(25 * 0.5));
}

}

TEST_SUITE("aggregate") {

TEST_CASE("one curve has zero spread") {
    RegretCurve c{"p", 1, {{1, 1.0}, {2, 3.0}}, 3.0};
    const auto a = aggregate_reps({c});
    CHECK(a.mean == std::vector<double>{1.0, 3.0});
    CHECK(a.std == std::vector<double>{0.0, 0.0});
}

TEST_CASE("two curves 2 and 4 give mean 3 and std sqrt 2") {
    RegretCurve a{"p", 1, {{5, 2.0}}, 2.0};
    RegretCurve b{"p", 2, {{5, 4.0}}, 4.0};
    const auto g = aggregate_reps({a, b});
    CHECK(g.mean[0] == 3.0);
    CHECK(g.std[0] == doctest::Approx(std::sqrt(2.0)));
    CHECK(g.reps == 2);
}

TEST_CASE("mismatched grids are input errors") {
    RegretCurve a{"p", 1, {{5, 2.0}}, 2.0};
    RegretCurve b{"p", 2, {{6, 4.0}}, 4.0};
    RegretCurve c{"p", 3, {{5, 4.0}, {6, 1.0}}, 1.0};
    CHECK_THROWS_AS(aggregate_reps({a, b}), std::invalid_argument);
    CHECK_THROWS_AS(aggregate_reps({a, c}), std::invalid_argument);
}

TEST_CASE("uniform random on the nine-arm preset") {
    auto cfg = small_config("preset_random_delay", 20000, 20);
    std::size_t idx = 0;
    while (cfg.policies[idx].name != "uniform") ++idx;
    cfg.policies = {cfg.policies[idx]};
    const auto curves = Experiment(cfg).run_all(4);
    const auto agg = aggregate_by_policy(curves);
    const double expect = 20000 * 0.4;
    CHECK(std::abs(agg[0].mean.back() - expect) < 0.05 * expect);
}

}

TEST_SUITE("csv") {

TEST_CASE("one policy, one seed, three samples") {
    RegretCurve c{"ars-ucb", 7, {{10, 1.0}, {20, 1.5}, {25, 2.25}}, 2.25};
    const std::string csv = regret_csv(regret_rows({c}, "stochastic", "point_mass[1]"));
    CHECK(csv == "policy,setting,kernel,seed,t,cum_regret\n"
                 "ars-ucb,stochastic,point_mass[1],7,10,1\n"
                 "ars-ucb,stochastic,point_mass[1],7,20,1.5\n"
                 "ars-ucb,stochastic,point_mass[1],7,25,2.25\n");
}

TEST_CASE("export and read back") {
    const auto path = temp_path("roundtrip/regret.csv");
    std::filesystem::remove_all(path.parent_path());
    RegretCurve a{"b", 2, {{1, 0.125}, {2, 1.0 / 3.0}}, 1.0 / 3.0};
    RegretCurve b{"a", 1, {{1, 0.5}, {2, 0.75}}, 0.75};
    export_csv({a, b}, "adversarial", "streak[d=10:m=3]", path.string());
    const auto rows = read_regret_csv(path.string());
    REQUIRE(rows.size() == 4);
    CHECK(rows[0].policy == "a");  // sorted by policy, seed, t
    CHECK(rows[2].seed == 2);
    CHECK(rows[3].cum_regret == doctest::Approx(1.0 / 3.0).epsilon(1e-8));
    CHECK(rows[1].kernel == "streak[d=10:m=3]");
    std::filesystem::remove_all(path.parent_path());
}

TEST_CASE("aggregate csv") {
    AggregateCurve g{"p", {5}, {3.0}, {1.5}, 2};
    CHECK(aggregate_csv({g}, "stochastic", "k") ==
          "policy,setting,kernel,t,mean_regret,std_regret,reps\np,stochastic,k,5,3,1.5,2\n");
}

TEST_CASE("trace parsing") {
    const auto d = parse_trace("t,arm,reward\n1,1,0.5\n1,2,1\n3,2,0.25\n");
    CHECK(d.arms == 2);
    CHECK(d.steps == 3);
    CHECK(d.values == std::vector<double>{0.5, 1.0, 0.0, 0.0, 0.0, 0.25});
}

TEST_CASE("trace errors") {
    CHECK_THROWS_AS(parse_trace(""), ParseError);
    CHECK_THROWS_WITH_AS(parse_trace("t,arm,reward\n"), doctest::Contains("no rows"), ParseError);
    CHECK_THROWS_WITH_AS(parse_trace("t,arm,reward\n1,1,0.5\n2,x,0.5\n"), doctest::Contains("line 3"), ParseError);
    CHECK_THROWS_WITH_AS(parse_trace("t,arm,reward\n1,1,0.5\n2,1\n"), doctest::Contains("line 3"), ParseError);
    CHECK_THROWS_WITH_AS(parse_trace("t,arm,reward\n2,1,0.5\n1,1,0.5\n"), doctest::Contains("decreases"), ParseError);
    CHECK_THROWS_WITH_AS(parse_trace("t,arm,reward\n1,1,0.5\n1,1,0.2\n"), doctest::Contains("duplicate"), ParseError);
    CHECK_THROWS_AS(parse_trace("t,arm,reward\n1,1,1.5\n"), ParseError);
    CHECK_THROWS_AS(parse_trace("time,arm,reward\n1,1,0.5\n"), ParseError);
    try {
        parse_trace("t,arm,reward\n1,1,0.5\n\n1,0,0.5\n");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 4);
    }
}

TEST_CASE("trace replay drives the adversarial environment") {
    const auto path = temp_path("trace.csv");
    {
        std::ofstream out(path);
        out << "t,arm,reward\n";
        for (int t = 1; t <= 300; ++t) out << t << ',' << (t % 3 == 0 ? 2 : 1) << ",1\n";
    }
    auto cfg = load_config("preset_adv_oblivious");
    cfg.adversarial->rewards = rewards::Trace{path.string()};
    cfg.arms = 0;
    cfg.horizon = 300;
    cfg.reps = 1;
    Experiment exp(cfg);
    CHECK(exp.config().arms == 2);
    const auto inst = exp.adversarial_instance(0);
    CHECK(inst->totals()[0] == 200.0);
    CHECK(inst->totals()[1] == 100.0);
    cfg.horizon = 301;
    CHECK_THROWS_AS(Experiment{cfg}, ConfigError);
    std::filesystem::remove(path);
}

}

TEST_SUITE("config") {

TEST_CASE("every preset parses and validates") {
    for (const auto& name : preset_names()) {
        const auto text = preset_text(name);
        REQUIRE(text.has_value());
        const auto cfg = parse_config_text(*text);
        CHECK(cfg.policies.size() >= 3);
        CHECK(cfg.arms >= 2);
        Experiment exp(cfg);
        CHECK(exp.kernel_label().find(',') == std::string::npos);
    }
    CHECK(reference_means().size() == 9);
}

TEST_CASE("unknown keys are named") {
    auto text = *preset_text("preset_random_delay");
    text.insert(text.find('{') + 1, "\"horizn\": 5,");
    CHECK_THROWS_WITH_AS(parse_config_text(text), doctest::Contains("horizn"), ConfigError);
    const char* bad_policy = R"({"setting":"stochastic","horizon":10,
        "stochastic":{"means":[0.5,0.4],"kernel":{"family":"point_mass","delay":1}},
        "policies":[{"name":"ars-ucb","label":"x","gama":0.1}]})";
    CHECK_THROWS_WITH_AS(parse_config_text(bad_policy), doctest::Contains("gama"), ConfigError);
}

TEST_CASE("cross-field validation") {
    CHECK_THROWS_AS(parse_config_text("{not json"), ConfigError);
    CHECK_THROWS_AS(load_config("no_such_preset_or_file"), ConfigError);
    const char* dup = R"({"setting":"stochastic","horizon":10,
        "stochastic":{"means":[0.5,0.4],"kernel":{"family":"point_mass","delay":1}},
        "policies":[{"name":"uniform","label":"u"},{"name":"uniform","label":"u"}]})";
    CHECK_THROWS_WITH_AS(parse_config_text(dup), doctest::Contains("duplicate"), ConfigError);
    const char* no_d = R"({"setting":"adversarial","horizon":10,
        "adversarial":{"rewards":{"generator":"bernoulli","means":[0.5,0.4]},"delay":{"strategy":"streak","d":3,"multiplier":3}},
        "policies":[{"name":"clw","label":"c"}]})";
    CHECK_THROWS_AS(parse_config_text(no_d), ConfigError);
    const char* kernel = R"({"setting":"stochastic","horizon":10,
        "stochastic":{"means":[0.5,0.4],"kernel":{"family":"bounded_interval","dmin":5,"dmax":5}},
        "policies":[{"name":"uniform","label":"u"}]})";
    CHECK_THROWS_AS(Experiment(parse_config_text(kernel)), ConfigError);
}

TEST_CASE("jobs from the environment") {
    ::setenv("BANDITLAB_JOBS", "3", 1);
    CHECK(jobs_from_env() == 3);
    ::setenv("BANDITLAB_JOBS", "0", 1);
    CHECK(jobs_from_env() >= 1);
    ::setenv("BANDITLAB_JOBS", "two", 1);
    CHECK_THROWS_AS(jobs_from_env(), ConfigError);
    ::unsetenv("BANDITLAB_JOBS");
    CHECK(jobs_from_env() >= 1);
}

}

TEST_SUITE("determinism") {

TEST_CASE("identical CSV bytes across parallelism levels") {
    for (const char* preset : {"preset_random_delay", "preset_discounted", "preset_adv_streak", "preset_adv_oblivious"}) {
        const auto cfg = small_config(preset, 3000, 3);
        Experiment exp(cfg);
        const auto a = regret_csv(regret_rows(exp.run_all(1), to_string(cfg.setting), exp.kernel_label()));
        const auto b = regret_csv(regret_rows(exp.run_all(4), to_string(cfg.setting), exp.kernel_label()));
        CHECK(a == b);
    }
}

TEST_CASE("episodes repeat exactly and reps differ") {
    const auto cfg = small_config("preset_adv_streak", 2000, 2);
    Experiment exp(cfg);
    const auto a = exp.run_episode(0, 0);
    const auto b = exp.run_episode(0, 0);
    const auto c = exp.run_episode(0, 1);
    CHECK(a.actions == b.actions);
    CHECK(a.actions != c.actions);
    CHECK(a.curve.seed == cfg.base_seed);
    CHECK(c.curve.seed == cfg.base_seed + 1);
}

}

TEST_SUITE("invariants") {

namespace {

std::vector<KernelFamily> families() {
    return {family::RandomDelay{0, 12},     family::BoundedInterval{3, 9}, family::LinearDecreasing{7},
            family::LinearIncreasing{5},    family::Discounted{0.6},       family::PolynomialDecay{4.0},
            family::PointMass{4},           family::Custom{{0.5, 0.0, 0.5}}};
}

}  // namespace

TEST_CASE("triangle identity and conservation on random kernels") {
    Rng rng(2024);
    for (int ep = 0; ep < 60; ++ep) {
        const auto fams = families();
        const std::size_t n = 2 + rng() % 4;
        std::vector<SpreadKernel> ks;
        for (std::size_t i = 0; i < n; ++i)
            ks.emplace_back(fams[rng() % fams.size()], std::uniform_real_distribution<double>(0, 1)(rng),
                            rng() % 2 ? TotalMode::Bernoulli : TotalMode::Deterministic);
        auto inst = std::make_shared<const StochasticInstance>(ks);
        StochasticEnvironment env(inst, Rng(rng()));
        oracle::BlockyPolicy pol(rng(), 15);
        pol.begin(n, std::nullopt);
        const auto log = check::run_logged(env, pol, 150);
        const auto tri = check::triangle(log);
        CHECK(tri.max_error < 1e-9);
        CHECK(tri.max_y_error < 1e-12);
        CHECK(check::conservation_error(log) < 1e-9);
    }
}

TEST_CASE("bounded gap between observed and true mass for ars-ucb") {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        std::vector<SpreadKernel> ks;
        for (double m : reference_means()) ks.emplace_back(family::BoundedInterval{5, 25}, m, TotalMode::Bernoulli);
        auto inst = std::make_shared<const StochasticInstance>(ks);
        StochasticEnvironment env(inst, Rng(seed));
        ArsUcb pol({});
        pol.begin(ks.size(), std::nullopt);
        const auto log = check::run_logged(env, pol, 20000);
        CHECK(check::bounded_gap_violations(pol, log, inst->max_offset()) == 0);
    }
}

TEST_CASE("degenerate ars-exp3 is classic exp3 on the shifted reward") {
    const auto res = check::degenerate_exp3({0.9, 0.6, 0.3, 0.1}, 5000, 17);
    CHECK(res.mismatches == 0);
    CHECK(res.max_p_diff < 1e-9);
}

}
