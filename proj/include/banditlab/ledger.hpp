#pragma once

#include <cstddef>
#include <vector>

#include "banditlab/kernel.hpp"

namespace banditlab {

// Not-yet-delivered partial rewards, indexed by offset from "now".
//
// Fixed-capacity ring: slot for offset o (1 <= o <= capacity) sits at
// (head + o - 1) % capacity. advance() pops offset 1 and shifts the rest.
class PendingLedger {
public:
    explicit PendingLedger(std::size_t capacity);

    // Throws std::logic_error on offset 0, ConfigError past capacity.
    // Returns vector.total().
    double deposit(const RewardVector& vector);
    void deposit(std::size_t offset, double value);

    // Returns the offset-1 mass (0 if nothing is due).
    double advance();

    double total_pending() const noexcept { return total_; }
    double pending_at(std::size_t offset) const;
    std::size_t capacity() const noexcept { return buffer_.size(); }

    // Sum of the buffer recomputed from scratch (for invariant checks).
    double recomputed_total() const;

private:
    std::vector<double> buffer_;
    std::size_t head_ = 0;
    double total_ = 0.0;
};

}  // namespace banditlab
