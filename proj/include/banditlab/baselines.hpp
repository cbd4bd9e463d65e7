#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "banditlab/policy.hpp"

namespace banditlab {

class UniformRandom final : public Policy {
public:
    explicit UniformRandom(Rng rng) : rng_(std::move(rng)) {}

    std::string name() const override { return "uniform"; }
    void begin(std::size_t arms, std::optional<std::uint64_t> horizon) override;
    std::size_t select(std::size_t t) override;
    void observe(std::size_t, double) override {}

private:
    Rng rng_;
    std::size_t arms_ = 0;
};

// UCB1 fed each pull's true total immediately (non-anonymous, no delay).
class OracleUcb final : public Policy {
public:
    std::string name() const override { return "oracle-ucb"; }
    void begin(std::size_t arms, std::optional<std::uint64_t> horizon) override;
    std::size_t select(std::size_t t) override;
    void observe(std::size_t, double) override {}
    void reveal(std::size_t t, double true_total) override;

    std::uint64_t pulls(std::size_t arm) const { return pulls_[arm]; }

private:
    std::vector<std::uint64_t> pulls_;
    std::vector<double> sums_;
    std::size_t last_ = 0;
};

// Classic EXP3 (Auer et al.) fed each pull's true total immediately.
// Default gamma = min{1, sqrt(N ln N / ((e-1) T))}.
class OracleExp3 final : public Policy {
public:
    OracleExp3(std::optional<double> gamma, Rng rng);

    std::string name() const override { return "oracle-exp3"; }
    void begin(std::size_t arms, std::optional<std::uint64_t> horizon) override;
    std::size_t select(std::size_t t) override;
    void observe(std::size_t, double) override {}
    void reveal(std::size_t t, double true_total) override;

    double gamma() const noexcept { return gamma_; }

private:
    std::optional<double> gamma_override_;
    Rng rng_;
    double gamma_ = 1.0;
    std::vector<double> log_weights_;
    std::vector<double> p_;
    std::size_t last_ = 0;
};

}  // namespace banditlab
