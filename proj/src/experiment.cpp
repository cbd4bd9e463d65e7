#include "banditlab/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "banditlab/ars_exp3.hpp"
#include "banditlab/ars_ucb.hpp"
#include "banditlab/baselines.hpp"
#include "banditlab/clw.hpp"
#include "banditlab/csv.hpp"
#include "banditlab/errors.hpp"
#include "banditlab/rng.hpp"

namespace banditlab {

RegretAccount RegretAccount::pseudo(std::vector<double> means) {
    if (means.empty()) throw std::invalid_argument("pseudo-regret needs arm means");
    RegretAccount a;
    a.best_ = *std::max_element(means.begin(), means.end());
    a.means_ = std::move(means);
    return a;
}

RegretAccount RegretAccount::realized(std::shared_ptr<const AdversarialInstance> instance) {
    if (!instance) throw std::invalid_argument("realized regret needs an instance");
    RegretAccount a;
    a.instance_ = std::move(instance);
    return a;
}

double RegretAccount::record(std::size_t t, std::size_t arm, double true_total) {
    if (instance_) {
        cumulative_ += true_total;
        return instance_->best_cumulative(t) - cumulative_;
    }
    cumulative_ += best_ - means_[arm];
    return cumulative_;
}

EpisodeResult run_episode(Environment& env, Policy& policy, RegretAccount account, const EpisodeOptions& options) {
    if (options.horizon < 1) throw ConfigError("horizon must be >= 1");
    const std::uint64_t stride = std::max<std::uint64_t>(1, options.stride);
    EpisodeResult out;
    out.curve.policy = policy.name();
    out.actions.reserve(options.horizon);
    out.curve.samples.reserve(options.horizon / stride + 1);
    if (options.record_trace) out.trace.reserve(options.horizon);

    double regret = 0.0;
    for (std::uint64_t t = 1; t <= options.horizon; ++t) {
        const std::size_t arm = policy.select(t);
        const Observation obs = env.step(t, arm);
        policy.observe(t, obs.aggregate);
        policy.reveal(t, obs.true_pull_total);
        regret = account.record(t, arm, obs.true_pull_total);
        out.actions.push_back(arm);
        out.delivered += obs.aggregate;
        out.pulled += obs.true_pull_total;
        if (t % stride == 0 || t == options.horizon) out.curve.samples.push_back({t, regret});
        if (options.record_trace) out.trace.push_back({arm, obs.aggregate, obs.true_pull_total, env.last_vector()});
    }
    out.curve.final_regret = regret;
    out.pending = env.ledger().total_pending();
    return out;
}

AggregateCurve aggregate_reps(const std::vector<RegretCurve>& curves) {
    if (curves.empty()) throw std::invalid_argument("no curves to aggregate");
    AggregateCurve agg;
    agg.policy = curves.front().policy;
    agg.reps = curves.size();
    const auto& grid = curves.front().samples;
    for (const auto& c : curves) {
        if (c.samples.size() != grid.size()) throw std::invalid_argument("regret curves have different grids");
        for (std::size_t j = 0; j < grid.size(); ++j)
            if (c.samples[j].t != grid[j].t) throw std::invalid_argument("regret curves have different grids");
    }
    const double n = static_cast<double>(curves.size());
    for (std::size_t j = 0; j < grid.size(); ++j) {
        double sum = 0.0;
        for (const auto& c : curves) sum += c.samples[j].regret;
        const double mean = sum / n;
        double ss = 0.0;
        for (const auto& c : curves) ss += (c.samples[j].regret - mean) * (c.samples[j].regret - mean);
        agg.t.push_back(grid[j].t);
        agg.mean.push_back(mean);
        agg.std.push_back(curves.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0);
    }
    return agg;
}

std::vector<AggregateCurve> aggregate_by_policy(const std::vector<RegretCurve>& curves) {
    std::vector<std::string> order;
    for (const auto& c : curves)
        if (std::find(order.begin(), order.end(), c.policy) == order.end()) order.push_back(c.policy);
    std::vector<AggregateCurve> out;
    for (const auto& name : order) {
        std::vector<RegretCurve> group;
        for (const auto& c : curves)
            if (c.policy == name) group.push_back(c);
        out.push_back(aggregate_reps(group));
    }
    return out;
}

std::size_t jobs_from_env() {
    const char* raw = std::getenv("BANDITLAB_JOBS");
    std::size_t jobs = 0;
    if (raw && *raw) {
        char* end = nullptr;
        const long v = std::strtol(raw, &end, 10);
        if (*end != '\0' || v < 0) throw ConfigError("BANDITLAB_JOBS must be a non-negative integer");
        jobs = static_cast<std::size_t>(v);
    }
    if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
    return jobs;
}

std::unique_ptr<Policy> make_policy(const PolicySpec& spec, std::uint64_t seed) {
    Rng rng(seed);
    if (spec.name == "ars-ucb") {
        ArsUcbParams p;
        if (spec.alpha) p.alpha = *spec.alpha;
        if (spec.f) p.f = RoundSchedule::parse(*spec.f);
        return std::make_unique<ArsUcb>(p);
    }
    if (spec.name == "ars-exp3") {
        ArsExp3Params p;
        if (spec.g) p.g = RoundSchedule::parse(*spec.g);
        p.gamma = spec.gamma;
        return std::make_unique<ArsExp3>(p, rng);
    }
    if (spec.name == "ars-clw") {
        Clw::Adaptive p;
        if (spec.h) p.h = GrowthFunction::parse(*spec.h);
        if (spec.t1) p.t1 = *spec.t1;
        return std::make_unique<Clw>(p, rng);
    }
    if (spec.name == "clw") return std::make_unique<Clw>(Clw::Fixed{spec.d}, rng);
    if (spec.name == "oracle-exp3") return std::make_unique<OracleExp3>(spec.gamma, rng);
    if (spec.name == "oracle-ucb") return std::make_unique<OracleUcb>();
    if (spec.name == "uniform") return std::make_unique<UniformRandom>(rng);
    throw ConfigError("policies: unknown policy '" + spec.name + "'");
}

Experiment::Experiment(ExperimentConfig config) : config_(std::move(config)) {
    if (config_.adversarial) {
        if (const auto* tr = std::get_if<rewards::Trace>(&config_.adversarial->rewards)) {
            auto data = std::make_shared<TraceData>(load_trace(tr->path));
            if (config_.arms == 0) config_.arms = data->arms;
            if (data->arms != config_.arms)
                throw ConfigError("adversarial.rewards.trace: trace has " + std::to_string(data->arms) +
                                  " arms but arms = " + std::to_string(config_.arms));
            if (data->steps < config_.horizon)
                throw ConfigError("adversarial.rewards.trace: trace has " + std::to_string(data->steps) +
                                  " steps, fewer than horizon " + std::to_string(config_.horizon));
            trace_ = std::move(data);
        }
    }
    config_.validate();
    if (config_.setting == Setting::Stochastic) {
        const auto& s = *config_.stochastic;
        std::vector<SpreadKernel> kernels;
        for (double m : s.means) kernels.emplace_back(s.kernel, m, s.totals, s.truncation);
        stochastic_ = std::make_shared<const StochasticInstance>(std::move(kernels));
    }
}

std::string Experiment::kernel_label() const {
    if (stochastic_) return stochastic_->kernels().front().label();
    const auto& d = config_.adversarial->delay;
    if (const auto* o = std::get_if<ObliviousDelay>(&d))
        return "oblivious[" + std::to_string(o->lo) + ":" + std::to_string(o->hi) + "]";
    const auto& s = std::get<StreakDelay>(d);
    return "streak[d=" + std::to_string(s.d) + ":m=" + std::to_string(s.multiplier) + "]";
}

std::shared_ptr<const AdversarialInstance> Experiment::adversarial_instance(std::size_t rep) const {
    if (config_.setting != Setting::Adversarial) throw std::logic_error("not an adversarial experiment");
    const std::uint64_t seed = seed_for(rep);
    const auto& adv = *config_.adversarial;
    const std::size_t T = config_.horizon;

    std::vector<double> values;
    if (trace_) {
        values.assign(trace_->values.begin(), trace_->values.begin() + static_cast<std::ptrdiff_t>(T * config_.arms));
    } else {
        Rng rng(derive_seed(seed, "instance"));
        if (const auto* c = std::get_if<rewards::Categorical>(&adv.rewards))
            values = categorical_values(c->probs, T, rng);
        else
            values = bernoulli_values(std::get<rewards::Bernoulli>(adv.rewards).means, T, rng);
    }

    DelayStrategy strategy;
    if (const auto* o = std::get_if<ObliviousDelay>(&adv.delay))
        strategy = delay::Oblivious{o->lo, o->hi, derive_seed(seed, "placement")};
    else {
        const auto& s = std::get<StreakDelay>(adv.delay);
        strategy = delay::Streak{s.d, s.multiplier};
    }
    return std::make_shared<const AdversarialInstance>(config_.arms, T, std::move(values), strategy);
}

std::unique_ptr<Environment> Experiment::make_environment(std::size_t rep) const {
    if (stochastic_) return std::make_unique<StochasticEnvironment>(stochastic_, Rng(derive_seed(seed_for(rep), "env")));
    return std::make_unique<AdversarialEnvironment>(adversarial_instance(rep));
}

EpisodeResult Experiment::run_episode(std::size_t policy_index, std::size_t rep, bool record_trace) const {
    const PolicySpec& spec = config_.policies.at(policy_index);
    const std::uint64_t seed = seed_for(rep);
    auto policy = make_policy(spec, derive_seed(seed, "policy/" + spec.label));
    policy->begin(config_.arms, config_.horizon);

    std::unique_ptr<Environment> env;
    RegretAccount account = RegretAccount::pseudo({0.0});
    if (stochastic_) {
        env = std::make_unique<StochasticEnvironment>(stochastic_, Rng(derive_seed(seed, "env")));
        account = RegretAccount::pseudo(stochastic_->means());
    } else {
        auto inst = adversarial_instance(rep);
        env = std::make_unique<AdversarialEnvironment>(inst);
        account = RegretAccount::realized(inst);
    }
    EpisodeOptions opt{config_.horizon, config_.effective_stride(), record_trace};
    EpisodeResult res = banditlab::run_episode(*env, *policy, std::move(account), opt);
    res.curve.policy = spec.label;
    res.curve.seed = seed;
    return res;
}

std::vector<RegretCurve> Experiment::run_all(std::size_t jobs) const {
    const std::size_t total = config_.policies.size() * config_.reps;
    std::vector<RegretCurve> out(total);
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;

    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= total) return;
            try {
                out[i] = run_episode(i / config_.reps, i % config_.reps).curve;
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next.store(total);
                return;
            }
        }
    };

    jobs = std::clamp<std::size_t>(jobs, 1, std::max<std::size_t>(1, total));
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t j = 0; j < jobs; ++j) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    if (failure) std::rethrow_exception(failure);
    return out;
}

}  // namespace banditlab
