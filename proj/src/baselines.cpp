#include "banditlab/baselines.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "banditlab/ars_exp3.hpp"
#include "banditlab/errors.hpp"

namespace banditlab {

void UniformRandom::begin(std::size_t arms, std::optional<std::uint64_t>) {
    if (arms < 2) throw ConfigError("uniform policy needs at least 2 arms");
    arms_ = arms;
}

std::size_t UniformRandom::select(std::size_t) {
    return std::uniform_int_distribution<std::size_t>(0, arms_ - 1)(rng_);
}

void OracleUcb::begin(std::size_t arms, std::optional<std::uint64_t>) {
    if (arms < 2) throw ConfigError("oracle-ucb needs at least 2 arms");
    pulls_.assign(arms, 0);
    sums_.assign(arms, 0.0);
}

std::size_t OracleUcb::select(std::size_t t) {
    for (std::size_t i = 0; i < pulls_.size(); ++i)
        if (pulls_[i] == 0) return last_ = i;
    const double log_t = std::log(static_cast<double>(t));
    std::size_t best = 0;
    double best_u = -1.0;
    for (std::size_t i = 0; i < pulls_.size(); ++i) {
        const double n = static_cast<double>(pulls_[i]);
        const double u = sums_[i] / n + std::sqrt(2.0 * log_t / n);
        if (u > best_u) {
            best = i;
            best_u = u;
        }
    }
    return last_ = best;
}

void OracleUcb::reveal(std::size_t, double true_total) {
    ++pulls_[last_];
    sums_[last_] += true_total;
}

OracleExp3::OracleExp3(std::optional<double> gamma, Rng rng) : gamma_override_(gamma), rng_(std::move(rng)) {
    if (gamma && !(*gamma > 0.0 && *gamma <= 1.0)) throw ConfigError("oracle-exp3 requires gamma in (0,1]");
}

void OracleExp3::begin(std::size_t arms, std::optional<std::uint64_t> horizon) {
    if (arms < 2) throw ConfigError("oracle-exp3 needs at least 2 arms");
    if (gamma_override_) {
        gamma_ = *gamma_override_;
    } else {
        if (!horizon) throw ConfigError("oracle-exp3 needs the horizon T or an explicit gamma");
        gamma_ = ars_exp3_gamma(arms, 0.0, *horizon);
    }
    log_weights_.assign(arms, 0.0);
    p_ = exp3_distribution(log_weights_, 1.0, gamma_);
}

std::size_t OracleExp3::select(std::size_t) { return last_ = sample_index(p_, rng_); }

void OracleExp3::reveal(std::size_t, double true_total) {
    log_weights_[last_] += gamma_ * true_total / (static_cast<double>(p_.size()) * p_[last_]);
    p_ = exp3_distribution(log_weights_, 1.0, gamma_);
}

}  // namespace banditlab
