#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "banditlab/config.hpp"
#include "banditlab/environment.hpp"
#include "banditlab/policy.hpp"

namespace banditlab {

struct RegretSample {
    std::uint64_t t = 0;
    double regret = 0.0;
};

struct RegretCurve {
    std::string policy;
    std::uint64_t seed = 0;
    std::vector<RegretSample> samples;
    double final_regret = 0.0;
};

struct StepRecord {
    std::size_t arm = 0;
    double aggregate = 0.0;
    double true_total = 0.0;
    RewardVector vector;
};

struct EpisodeResult {
    RegretCurve curve;
    std::vector<std::size_t> actions;
    double delivered = 0.0;  // sum of aggregates
    double pending = 0.0;    // ledger mass left at the horizon
    double pulled = 0.0;     // sum of true pull totals
    std::vector<StepRecord> trace;  // filled when requested
};

// Regret bookkeeping for one episode: pseudo-regret against known means, or
// realized regret against the best arm's cumulative total.
class RegretAccount {
public:
    static RegretAccount pseudo(std::vector<double> means);
    static RegretAccount realized(std::shared_ptr<const AdversarialInstance> instance);

    // Adds the step's contribution; returns the cumulative regret so far.
    double record(std::size_t t, std::size_t arm, double true_total);

private:
    std::vector<double> means_;
    double best_ = 0.0;
    std::shared_ptr<const AdversarialInstance> instance_;
    double cumulative_ = 0.0;  // pseudo-regret, or the player's total
};

struct EpisodeOptions {
    std::uint64_t horizon = 0;
    std::uint64_t stride = 1;
    bool record_trace = false;
};

// Steps t = 1..T: select, environment step (deliver then deposit), observe,
// reveal. Samples land at multiples of stride and at T.
EpisodeResult run_episode(Environment& env, Policy& policy, RegretAccount account, const EpisodeOptions& options);

struct AggregateCurve {
    std::string policy;
    std::vector<std::uint64_t> t;
    std::vector<double> mean;
    std::vector<double> std;  // sample standard deviation, 0 for one curve
    std::size_t reps = 0;
};

// Pointwise statistics; throws std::invalid_argument on mismatched grids.
AggregateCurve aggregate_reps(const std::vector<RegretCurve>& curves);
// Groups by policy (first-appearance order) and aggregates each group.
std::vector<AggregateCurve> aggregate_by_policy(const std::vector<RegretCurve>& curves);

// Worker count from BANDITLAB_JOBS; unset or 0 means hardware concurrency.
std::size_t jobs_from_env();

std::unique_ptr<Policy> make_policy(const PolicySpec& spec, std::uint64_t seed);

struct TraceData;

class Experiment {
public:
    explicit Experiment(ExperimentConfig config);

    const ExperimentConfig& config() const noexcept { return config_; }
    std::string kernel_label() const;

    std::uint64_t seed_for(std::size_t rep) const noexcept { return config_.base_seed + rep; }

    std::shared_ptr<const StochasticInstance> stochastic_instance() const { return stochastic_; }
    std::shared_ptr<const AdversarialInstance> adversarial_instance(std::size_t rep) const;
    std::unique_ptr<Environment> make_environment(std::size_t rep) const;

    EpisodeResult run_episode(std::size_t policy_index, std::size_t rep, bool record_trace = false) const;

    // All (policy, rep) episodes, in policy-then-rep order regardless of jobs.
    std::vector<RegretCurve> run_all(std::size_t jobs) const;

private:
    ExperimentConfig config_;
    std::shared_ptr<const StochasticInstance> stochastic_;
    std::shared_ptr<const TraceData> trace_;
};

}  // namespace banditlab
