#include "banditlab/clw.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "banditlab/errors.hpp"

namespace banditlab {

double clw_gamma(std::size_t arms, std::uint64_t d, std::uint64_t phase_end) {
    const double n = static_cast<double>(arms);
    const double dd = static_cast<double>(d);
    return std::min(1.0, std::sqrt(2.0 * dd * n * std::log(n) / (static_cast<double>(phase_end) + dd)));
}

double clw_round_end_probability(double q, std::uint64_t d) {
    return q * std::pow(1.0 - q, static_cast<double>(2 * d - 1));
}

Clw::Clw(Adaptive params, Rng rng) : adaptive_(params), rng_(std::move(rng)) {
    if (params.t1 < 2) throw ConfigError("ars-clw requires T1 >= 2");
    if (params.h(params.t1) >= params.t1) throw ConfigError("ars-clw requires h(T1) < T1");
}

Clw::Clw(Fixed params, Rng rng) : fixed_d_(params.d), rng_(std::move(rng)) {
    if (!fixed_d_) throw ConfigError("fixed-round clw needs the delay d");
    if (*fixed_d_ < 1) throw ConfigError("fixed-round clw needs d >= 1");
}

void Clw::begin(std::size_t arms, std::optional<std::uint64_t> horizon) {
    if (arms < 2) throw ConfigError("clw needs at least 2 arms");
    arms_ = arms;
    if (adaptive_) {
        plan_ = phase_plan(adaptive_->t1, horizon.value_or(adaptive_->t1), adaptive_->h);
    } else {
        if (!horizon) throw ConfigError("fixed-round clw needs the horizon T");
        plan_ = single_phase_plan(*horizon, *fixed_d_);
    }
    phase_ = 0;
    started_ = false;
    round_ends_ = 0;
}

void Clw::enter_phase(std::size_t k) {
    if (k >= plan_.phases()) {
        if (!adaptive_) throw std::logic_error("clw: step beyond the single phase");
        // horizon unknown or exceeded: keep doubling
        plan_ = phase_plan(adaptive_->t1, plan_.boundaries.back() * 2, adaptive_->h);
    }
    phase_ = k;
    d_ = plan_.guesses[k];
    gamma_ = clw_gamma(arms_, d_, plan_.boundaries[k]);
    q_ = 1.0 / (2.0 * static_cast<double>(d_));
    log_weights_.assign(arms_, 0.0);
    p_.assign(arms_, 1.0 / static_cast<double>(arms_));
    arm_ = sample_index(p_, rng_);

    window_.clear();
    window_ones_ = 0;
    for (std::uint64_t j = 0; j + 1 < 2 * d_; ++j) {
        const bool b = draw();
        window_.push_back(b);
        window_ones_ += b;
    }
    recent_.clear();
    round_ended_ = false;
}

std::size_t Clw::select(std::size_t t) {
    if (!started_) {
        started_ = true;
        enter_phase(0);
    } else if (t > plan_.boundaries[phase_]) {
        enter_phase(phase_ + 1);
    } else if (round_ended_) {
        arm_ = sample_index(p_, rng_);
    }
    const bool b = draw();
    window_.push_back(b);
    window_ones_ += b;
    return arm_;
}

void Clw::observe(std::size_t, double aggregate) {
    if (window_.size() != 2 * d_) throw std::logic_error("clw: observe() without a matching select()");
    if (!(aggregate >= 0.0)) throw std::invalid_argument("clw: aggregate reward must be non-negative");
    recent_.push_back(aggregate);
    if (recent_.size() > d_) recent_.pop_front();

    round_ended_ = window_.front() && window_ones_ == 1;
    if (round_ended_) {
        const double reward = std::accumulate(recent_.begin(), recent_.end(), 0.0) / (2.0 * static_cast<double>(d_));
        log_weights_[arm_] += gamma_ * reward / (static_cast<double>(arms_) * p_[arm_]);
        p_ = exp3_distribution(log_weights_, 1.0, gamma_);
        ++round_ends_;
    }
    window_ones_ -= window_.front();
    window_.pop_front();
}

}  // namespace banditlab
