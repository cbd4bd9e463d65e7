#include "banditlab/ars_exp3.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "banditlab/errors.hpp"

namespace banditlab {

double ars_exp3_gamma(std::size_t arms, double beta, std::uint64_t horizon) {
    const double n = static_cast<double>(arms);
    const double rounds = std::pow((beta + 1.0) * static_cast<double>(horizon), 1.0 / (beta + 1.0));
    return std::min(1.0, std::sqrt(n * std::log(n) / ((std::numbers::e - 1.0) * rounds)));
}

ArsExp3::ArsExp3(ArsExp3Params params, Rng rng) : params_(std::move(params)), rng_(std::move(rng)) {
    if (params_.gamma && !(*params_.gamma > 0.0 && *params_.gamma <= 1.0))
        throw ConfigError("ars-exp3 requires gamma in (0,1]");
}

void ArsExp3::begin(std::size_t arms, std::optional<std::uint64_t> horizon) {
    if (arms < 2) throw ConfigError("ars-exp3 needs at least 2 arms");
    if (!horizon) throw ConfigError("ars-exp3 needs the horizon T");
    rounds_ = compute_K(params_.g, *horizon);
    normalizer_ = params_.g.f(rounds_.K);
    if (params_.gamma) {
        gamma_ = *params_.gamma;
    } else {
        const auto beta = params_.g.power_exponent();
        if (!beta) throw ConfigError("ars-exp3 needs an explicit gamma unless g is a power schedule");
        gamma_ = ars_exp3_gamma(arms, *beta, *horizon);
    }
    weights_.assign(arms, 0.0);
    round_ = 0;
    remaining_ = 0;
    collected_ = 0.0;
}

std::vector<double> ArsExp3::probabilities() const {
    return exp3_distribution(weights_, static_cast<double>(normalizer_), gamma_);
}

void ArsExp3::set_weights(std::vector<double> w) {
    if (w.size() != weights_.size()) throw std::invalid_argument("weight vector has the wrong size");
    weights_ = std::move(w);
}

std::size_t ArsExp3::start_round() {
    const auto p = probabilities();
    arm_ = sample_index(p, rng_);
    arm_prob_ = p[arm_];
    ++round_;
    remaining_ = params_.g.f(round_);
    collected_ = 0.0;
    return arm_;
}

void ArsExp3::finish_round(double collected) {
    if (!(collected >= 0.0)) throw std::invalid_argument("ars-exp3: round reward must be non-negative");
    const double clipped = std::min(collected, static_cast<double>(params_.g.f(round_)));
    weights_[arm_] += gamma_ * clipped / (static_cast<double>(weights_.size()) * arm_prob_);
}

std::size_t ArsExp3::select(std::size_t) {
    if (remaining_ == 0) start_round();
    return arm_;
}

void ArsExp3::observe(std::size_t, double aggregate) {
    if (remaining_ == 0) throw std::logic_error("ars-exp3: observe() without a round in progress");
    if (!(aggregate >= 0.0)) throw std::invalid_argument("ars-exp3: aggregate reward must be non-negative");
    collected_ += aggregate;
    if (--remaining_ == 0) finish_round(collected_);
}

}  // namespace banditlab
