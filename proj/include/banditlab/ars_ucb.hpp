#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "banditlab/policy.hpp"
#include "banditlab/schedule.hpp"

namespace banditlab {

struct ArsUcbParams {
    double alpha = 4.0;
    RoundSchedule f = RoundSchedule(round_family::Power{1.0, 2.0});
};

// Adaptive round-size UCB. Each arm is first played for one round of f(1)
// steps (in index order); afterwards, at every round boundary the arm with
// the largest clipped index u_i = min(M_i/N_i + sqrt(alpha log t / N_i), 1)
// is committed for f(K_i) steps. Ties go to the smallest N_i, then the
// lowest index.
class ArsUcb final : public Policy {
public:
    struct Decision {
        std::size_t arm = 0;
        std::uint64_t length = 0;
    };

    explicit ArsUcb(ArsUcbParams params);

    std::string name() const override { return "ars-ucb"; }
    void begin(std::size_t arms, std::optional<std::uint64_t> horizon) override;
    std::size_t select(std::size_t t) override;
    void observe(std::size_t t, double aggregate) override;

    // Picks the next round at a boundary and commits to it. Throws
    // std::logic_error if a round is still in progress.
    Decision decide(std::size_t t);

    double index(std::size_t arm, std::size_t t) const;

    std::size_t arms() const noexcept { return pulls_.size(); }
    std::uint64_t pulls(std::size_t arm) const { return pulls_[arm]; }
    double observed(std::size_t arm) const { return observed_[arm]; }
    // K_i: index of the arm's next round.
    std::size_t next_round(std::size_t arm) const { return next_round_[arm]; }
    bool at_boundary() const noexcept { return remaining_ == 0; }
    std::size_t current_arm() const noexcept { return current_; }
    std::uint64_t remaining() const noexcept { return remaining_; }
    double alpha() const noexcept { return params_.alpha; }
    const RoundSchedule& schedule() const noexcept { return params_.f; }

private:
    Decision commit(std::size_t arm);

    ArsUcbParams params_;
    std::vector<std::uint64_t> pulls_;    // N_i
    std::vector<double> observed_;        // M_i
    std::vector<std::size_t> next_round_; // K_i
    std::size_t init_next_ = 0;
    std::size_t current_ = 0;
    std::uint64_t remaining_ = 0;
};

}  // namespace banditlab
