#include "banditlab/environment.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "banditlab/errors.hpp"

namespace banditlab {

StochasticInstance::StochasticInstance(std::vector<SpreadKernel> arms) : kernels_(std::move(arms)) {
    if (kernels_.size() < 2) throw ConfigError("a bandit instance needs at least 2 arms");
    means_.reserve(kernels_.size());
    for (const auto& k : kernels_) means_.push_back(k.mean_total());
    best_ = *std::max_element(means_.begin(), means_.end());
    gaps_.reserve(means_.size());
    for (double s : means_) gaps_.push_back(best_ - s);
}

std::size_t StochasticInstance::max_offset() const noexcept {
    std::size_t m = 1;
    for (const auto& k : kernels_) m = std::max(m, k.max_offset());
    return m;
}

std::size_t max_delay(const DelayStrategy& strategy) {
    if (const auto* o = std::get_if<delay::Oblivious>(&strategy)) return o->hi;
    return std::get<delay::Streak>(strategy).d;
}

AdversarialInstance::AdversarialInstance(std::size_t arms, std::size_t horizon, std::vector<double> values,
                                         DelayStrategy strategy)
    : arms_(arms), horizon_(horizon), values_(std::move(values)), strategy_(strategy) {
    if (arms_ < 2) throw ConfigError("a bandit instance needs at least 2 arms");
    if (horizon_ < 1) throw ConfigError("adversarial horizon must be >= 1");
    if (values_.size() != arms_ * horizon_) throw ConfigError("adversarial value table has the wrong size");
    for (double v : values_)
        if (!(v >= 0.0 && v <= 1.0)) throw ConfigError("adversarial totals must lie in [0,1]");
    if (const auto* o = std::get_if<delay::Oblivious>(&strategy_)) {
        if (o->lo < 1 || o->lo > o->hi) throw ConfigError("oblivious delay requires 1 <= lo <= hi");
    } else {
        const auto& s = std::get<delay::Streak>(strategy_);
        if (s.d < 1) throw ConfigError("streak adversary requires d >= 1");
    }

    leader_.assign(horizon_ + 1, 0);
    best_cum_.assign(horizon_ + 1, 0.0);
    totals_.assign(arms_, 0.0);
    for (std::size_t t = 1; t <= horizon_; ++t) {
        std::size_t lead = 0;
        for (std::size_t i = 0; i < arms_; ++i) {
            totals_[i] += value(i, t);
            if (totals_[i] > totals_[lead]) lead = i;
        }
        leader_[t] = lead;
        best_cum_[t] = totals_[lead];
    }
}

std::vector<double> categorical_values(const std::vector<double>& probs, std::size_t horizon, Rng& rng) {
    if (probs.size() < 2) throw ConfigError("categorical rewards need at least 2 arms");
    // Mass left over (sum < 1) is a step where no arm pays.
    std::vector<double> weights = probs;
    double sum = 0.0;
    for (double p : probs) {
        if (!(p >= 0.0)) throw ConfigError("categorical probs must be non-negative");
        sum += p;
    }
    if (sum > 1.0 + 1e-9) throw ConfigError("categorical probs must sum to at most 1");
    if (sum < 1.0) weights.push_back(1.0 - sum);
    std::discrete_distribution<std::size_t> pick(weights.begin(), weights.end());
    const std::size_t n = probs.size();
    std::vector<double> values(n * horizon, 0.0);
    for (std::size_t t = 0; t < horizon; ++t) {
        const std::size_t i = pick(rng);
        if (i < n) values[t * n + i] = 1.0;
    }
    return values;
}

std::vector<double> bernoulli_values(const std::vector<double>& means, std::size_t horizon, Rng& rng) {
    if (means.size() < 2) throw ConfigError("bernoulli rewards need at least 2 arms");
    for (double m : means)
        if (!(m >= 0.0 && m <= 1.0)) throw ConfigError("bernoulli means must lie in [0,1]");
    std::vector<double> values(means.size() * horizon, 0.0);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (std::size_t t = 0; t < horizon; ++t)
        for (std::size_t i = 0; i < means.size(); ++i) values[t * means.size() + i] = u(rng) < means[i] ? 1.0 : 0.0;
    return values;
}

void ActionHistory::push(std::size_t arm) {
    streak_ = (!actions_.empty() && actions_.back() == arm) ? streak_ + 1 : 1;
    actions_.push_back(arm);
}

RewardVector adversary_place(const AdversarialInstance& instance, std::size_t arm, std::size_t t,
                             double actual_total, const ActionHistory& history) {
    if (history.size() < t || history.actions()[t - 1] != arm)
        throw std::logic_error("action history does not end with the pull being placed");
    RewardVector out;
    std::size_t offset = 1;
    if (const auto* o = std::get_if<delay::Oblivious>(&instance.strategy())) {
        offset = keyed_uniform(o->seed, arm, t, o->lo, o->hi);
    } else {
        const auto& s = std::get<delay::Streak>(instance.strategy());
        // Only the trailing run ending at t matters.
        const bool streak_ok = history.size() == t ? history.streak() >= s.multiplier * s.d : [&] {
            std::size_t run = 0;
            for (std::size_t k = t; k >= 1 && history.actions()[k - 1] == arm; --k) ++run;
            return run >= s.multiplier * s.d;
        }();
        if (arm == instance.leader(t) && streak_ok) offset = s.d;
    }
    out.first_offset = offset;
    if (actual_total > 0.0) out.values.assign(1, actual_total);
    return out;
}

Observation Environment::step(std::size_t t, std::size_t arm) {
    if (arm >= arms()) throw std::out_of_range("arm index " + std::to_string(arm) + " out of range");
    Observation obs;
    obs.t = t;
    obs.aggregate = ledger_.advance();
    pull(t, arm, last_);
    obs.true_pull_total = ledger_.deposit(last_);
    return obs;
}

StochasticEnvironment::StochasticEnvironment(std::shared_ptr<const StochasticInstance> instance, Rng rng)
    : Environment(instance->max_offset()), instance_(std::move(instance)), rng_(std::move(rng)) {}

void StochasticEnvironment::pull(std::size_t, std::size_t arm, RewardVector& out) {
    instance_->kernels()[arm].sample_into(rng_, out);
}

AdversarialEnvironment::AdversarialEnvironment(std::shared_ptr<const AdversarialInstance> instance)
    : Environment(instance->max_delay()), instance_(std::move(instance)) {}

void AdversarialEnvironment::pull(std::size_t t, std::size_t arm, RewardVector& out) {
    if (t > instance_->horizon()) throw ConfigError("step beyond the adversarial instance horizon");
    history_.push(arm);
    out = adversary_place(*instance_, arm, t, instance_->value(arm, t), history_);
}

}  // namespace banditlab
