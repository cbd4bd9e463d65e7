#pragma once

#include <cstddef>
#include <memory>
#include <variant>
#include <vector>

#include "banditlab/kernel.hpp"
#include "banditlab/ledger.hpp"
#include "banditlab/rng.hpp"

namespace banditlab {

class StochasticInstance {
public:
    explicit StochasticInstance(std::vector<SpreadKernel> arms);

    std::size_t arms() const noexcept { return kernels_.size(); }
    const std::vector<SpreadKernel>& kernels() const noexcept { return kernels_; }
    const std::vector<double>& means() const noexcept { return means_; }
    // gaps()[i] = max(s) - s_i
    const std::vector<double>& gaps() const noexcept { return gaps_; }
    double best_mean() const noexcept { return best_; }
    std::size_t max_offset() const noexcept;

private:
    std::vector<SpreadKernel> kernels_;
    std::vector<double> means_;
    std::vector<double> gaps_;
    double best_ = 0.0;
};

namespace delay {

// Placement fixed in advance: offset uniform on {lo..hi}, keyed by (seed, arm, t).
struct Oblivious {
    std::size_t lo = 1;
    std::size_t hi = 1;
    std::uint64_t seed = 0;
};

// Whole mass at offset d when the pulled arm is the current leader and has
// been pulled at least multiplier*d times in a row (ending now); else offset 1.
struct Streak {
    std::size_t d = 10;
    std::size_t multiplier = 3;
};

}  // namespace delay

using DelayStrategy = std::variant<delay::Oblivious, delay::Streak>;

std::size_t max_delay(const DelayStrategy& strategy);

// Pre-determined per-step totals s_i(t) plus a placement rule.
class AdversarialInstance {
public:
    // values is row-major by step: values[(t-1)*arms + i] = s_i(t).
    AdversarialInstance(std::size_t arms, std::size_t horizon, std::vector<double> values, DelayStrategy strategy);

    std::size_t arms() const noexcept { return arms_; }
    std::size_t horizon() const noexcept { return horizon_; }
    const DelayStrategy& strategy() const noexcept { return strategy_; }
    std::size_t max_delay() const noexcept { return banditlab::max_delay(strategy_); }

    double value(std::size_t arm, std::size_t t) const { return values_[(t - 1) * arms_ + arm]; }
    // Arm with the largest cumulative total over steps 1..t (lowest index on ties).
    std::size_t leader(std::size_t t) const { return leader_[t]; }
    // max_i G_i(t)
    double best_cumulative(std::size_t t) const { return best_cum_[t]; }
    // G_i(T)
    const std::vector<double>& totals() const noexcept { return totals_; }

private:
    std::size_t arms_;
    std::size_t horizon_;
    std::vector<double> values_;
    DelayStrategy strategy_;
    std::vector<std::size_t> leader_;  // index 0 unused
    std::vector<double> best_cum_;     // best_cum_[0] = 0
    std::vector<double> totals_;
};

// One-hot totals: each step a single arm drawn from probs gets 1; if probs
// sum to less than one, the remainder is the chance that no arm pays.
std::vector<double> categorical_values(const std::vector<double>& probs, std::size_t horizon, Rng& rng);
// Independent Bernoulli(means[i]) totals.
std::vector<double> bernoulli_values(const std::vector<double>& means, std::size_t horizon, Rng& rng);

class ActionHistory {
public:
    void push(std::size_t arm);
    std::size_t size() const noexcept { return actions_.size(); }
    std::size_t last() const { return actions_.back(); }
    // Length of the trailing run of identical actions.
    std::size_t streak() const noexcept { return streak_; }
    const std::vector<std::size_t>& actions() const noexcept { return actions_; }

private:
    std::vector<std::size_t> actions_;
    std::size_t streak_ = 0;
};

// adversary_place. history must already contain the action taken at t.
RewardVector adversary_place(const AdversarialInstance& instance, std::size_t arm, std::size_t t,
                             double actual_total, const ActionHistory& history);

struct Observation {
    std::size_t t = 0;
    double aggregate = 0.0;        // mass landing at t from pulls before t
    double true_pull_total = 0.0;  // ||r_{a(t)}(t)||_1, hidden from anonymous policies
};

// Step order at time t: pop the mass landing at t, then deposit the pull made
// at t (its offset-1 part lands at t+1).
class Environment {
public:
    explicit Environment(std::size_t ledger_capacity) : ledger_(ledger_capacity) {}
    virtual ~Environment() = default;

    virtual std::size_t arms() const = 0;

    Observation step(std::size_t t, std::size_t arm);

    const PendingLedger& ledger() const noexcept { return ledger_; }
    const RewardVector& last_vector() const noexcept { return last_; }

protected:
    // Writes the pull's vector into out (whose storage may be reused).
    virtual void pull(std::size_t t, std::size_t arm, RewardVector& out) = 0;

private:
    PendingLedger ledger_;
    RewardVector last_;
};

class StochasticEnvironment final : public Environment {
public:
    StochasticEnvironment(std::shared_ptr<const StochasticInstance> instance, Rng rng);
    std::size_t arms() const override { return instance_->arms(); }
    const StochasticInstance& instance() const noexcept { return *instance_; }

protected:
    void pull(std::size_t t, std::size_t arm, RewardVector& out) override;

private:
    std::shared_ptr<const StochasticInstance> instance_;
    Rng rng_;
};

class AdversarialEnvironment final : public Environment {
public:
    explicit AdversarialEnvironment(std::shared_ptr<const AdversarialInstance> instance);
    std::size_t arms() const override { return instance_->arms(); }
    const AdversarialInstance& instance() const noexcept { return *instance_; }
    const ActionHistory& history() const noexcept { return history_; }

protected:
    void pull(std::size_t t, std::size_t arm, RewardVector& out) override;

private:
    std::shared_ptr<const AdversarialInstance> instance_;
    ActionHistory history_;
};

}  // namespace banditlab
