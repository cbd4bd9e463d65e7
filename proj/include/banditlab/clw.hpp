#pragma once

#include <cstddef>
#include <cstdint>
#include <deque>
#include <optional>
#include <vector>

#include "banditlab/policy.hpp"
#include "banditlab/schedule.hpp"

namespace banditlab {

// gamma^(k) = min{1, sqrt(2 d N ln N / (T^(k) + d))}
double clw_gamma(std::size_t arms, std::uint64_t d, std::uint64_t phase_end);

// Probability that a given step ends a round: q (1 - q)^(2d - 1).
double clw_round_end_probability(double q, std::uint64_t d);

// Phased composite-loss-wrapper EXP3. Each phase k runs a fresh EXP3 game
// with delay guess d = d^(k): every step draws one Bernoulli(q = 1/(2d))
// variable, and step t ends a round iff B_t = 1 and B_{t+1..t+2d-1} are all
// 0. At a round end the played arm is scored with (1/(2d)) times the sum of
// the last d aggregates of the phase; the next step redraws the arm from p.
//
// With a doubling phase plan from h this is ARS-CLW. With a single phase of
// length T and a supplied d it is the fixed-round CLW baseline.
class Clw final : public Policy {
public:
    struct Adaptive {
        GrowthFunction h;
        std::uint64_t t1 = 100;
    };
    struct Fixed {
        std::optional<std::uint64_t> d;
    };

    Clw(Adaptive params, Rng rng);
    Clw(Fixed params, Rng rng);

    std::string name() const override { return adaptive_ ? "ars-clw" : "clw"; }
    void begin(std::size_t arms, std::optional<std::uint64_t> horizon) override;
    std::size_t select(std::size_t t) override;
    void observe(std::size_t t, double aggregate) override;

    const PhasePlan& plan() const noexcept { return plan_; }
    std::size_t phase() const noexcept { return phase_; }  // 0-based
    std::uint64_t delay_guess() const noexcept { return d_; }
    double gamma() const noexcept { return gamma_; }
    double q() const noexcept { return q_; }
    const std::vector<double>& probabilities() const noexcept { return p_; }
    bool last_step_ended_round() const noexcept { return round_ended_; }
    std::uint64_t round_ends() const noexcept { return round_ends_; }
    std::size_t window_size() const noexcept { return window_.size(); }

private:
    void enter_phase(std::size_t k);
    bool draw() { return std::bernoulli_distribution(q_)(rng_); }

    std::optional<Adaptive> adaptive_;
    std::optional<std::uint64_t> fixed_d_;
    Rng rng_;

    std::size_t arms_ = 0;
    PhasePlan plan_;
    std::size_t phase_ = 0;
    bool started_ = false;

    std::uint64_t d_ = 1;
    double gamma_ = 1.0;
    double q_ = 0.5;
    std::vector<double> log_weights_;
    std::vector<double> p_;
    std::size_t arm_ = 0;

    std::deque<bool> window_;     // B_t ... B_{t+2d-1}
    std::size_t window_ones_ = 0;
    std::deque<double> recent_;   // last <= d aggregates of the phase
    bool round_ended_ = false;
    std::uint64_t round_ends_ = 0;
};

}  // namespace banditlab
