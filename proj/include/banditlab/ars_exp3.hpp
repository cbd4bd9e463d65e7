#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "banditlab/policy.hpp"
#include "banditlab/schedule.hpp"

namespace banditlab {

// gamma = min{1, sqrt(N ln N / ((e-1) ((beta+1) T)^(1/(beta+1))))}
double ars_exp3_gamma(std::size_t arms, double beta, std::uint64_t horizon);

struct ArsExp3Params {
    RoundSchedule g = RoundSchedule(round_family::Power{1.0, 0.5});
    std::optional<double> gamma;  // default: ars_exp3_gamma with beta from g
};

// Adaptive round-size EXP3 for a known horizon T. Round k lasts g(k) steps
// and pulls one arm drawn from p; the round's collected aggregate Z(k),
// clipped to g(k), updates the drawn arm's weight. Weights are normalized by
// g(K), K being the number of rounds that fit in T. A final partial round is
// played but never scored.
//
// Weights start at 0 rather than 1; p only depends on weight differences.
class ArsExp3 final : public Policy {
public:
    ArsExp3(ArsExp3Params params, Rng rng);

    std::string name() const override { return "ars-exp3"; }
    void begin(std::size_t arms, std::optional<std::uint64_t> horizon) override;
    std::size_t select(std::size_t t) override;
    void observe(std::size_t t, double aggregate) override;

    // Draws the arm for the next round and returns it.
    std::size_t start_round();
    // Scores the round that just finished with its collected reward.
    void finish_round(double collected);

    std::vector<double> probabilities() const;

    double gamma() const noexcept { return gamma_; }
    std::size_t total_rounds() const noexcept { return rounds_.K; }  // K
    std::uint64_t normalizer() const noexcept { return normalizer_; }  // g(K)
    std::size_t round() const noexcept { return round_; }              // current k
    std::size_t current_arm() const noexcept { return arm_; }
    const std::vector<double>& weights() const noexcept { return weights_; }
    void set_weights(std::vector<double> w);

private:
    ArsExp3Params params_;
    Rng rng_;
    double gamma_ = 1.0;
    RoundCount rounds_;
    std::uint64_t normalizer_ = 1;
    std::vector<double> weights_;
    std::size_t round_ = 0;
    std::size_t arm_ = 0;
    double arm_prob_ = 1.0;
    std::uint64_t remaining_ = 0;
    double collected_ = 0.0;
};

}  // namespace banditlab
