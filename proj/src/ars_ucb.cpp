#include "banditlab/ars_ucb.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "banditlab/errors.hpp"

namespace banditlab {

ArsUcb::ArsUcb(ArsUcbParams params) : params_(std::move(params)) {
    if (!(params_.alpha > 0.0)) throw ConfigError("ars-ucb requires alpha > 0");
}

void ArsUcb::begin(std::size_t arms, std::optional<std::uint64_t>) {
    if (arms < 2) throw ConfigError("ars-ucb needs at least 2 arms");
    pulls_.assign(arms, 0);
    observed_.assign(arms, 0.0);
    next_round_.assign(arms, 1);
    init_next_ = 0;
    current_ = 0;
    remaining_ = 0;
}

double ArsUcb::index(std::size_t arm, std::size_t t) const {
    const double n = static_cast<double>(pulls_[arm]);
    const double radius = std::sqrt(params_.alpha * std::log(static_cast<double>(t)) / n);
    return std::min(observed_[arm] / n + radius, 1.0);
}

ArsUcb::Decision ArsUcb::commit(std::size_t arm) {
    current_ = arm;
    remaining_ = params_.f.f(next_round_[arm]);
    ++next_round_[arm];
    return {arm, remaining_};
}

ArsUcb::Decision ArsUcb::decide(std::size_t t) {
    if (remaining_ != 0) throw std::logic_error("ars-ucb: decide() called in the middle of a round");
    if (init_next_ < pulls_.size()) return commit(init_next_++);

    std::size_t best = 0;
    double best_u = index(0, t);
    for (std::size_t i = 1; i < pulls_.size(); ++i) {
        const double u = index(i, t);
        if (u > best_u || (u == best_u && pulls_[i] < pulls_[best])) {
            best = i;
            best_u = u;
        }
    }
    return commit(best);
}

std::size_t ArsUcb::select(std::size_t t) {
    if (remaining_ == 0) decide(t);
    return current_;
}

void ArsUcb::observe(std::size_t, double aggregate) {
    if (remaining_ == 0) throw std::logic_error("ars-ucb: observe() without a round in progress");
    if (!(aggregate >= 0.0)) throw std::invalid_argument("ars-ucb: aggregate reward must be non-negative");
    observed_[current_] += aggregate;
    ++pulls_[current_];
    --remaining_;
}

}  // namespace banditlab
