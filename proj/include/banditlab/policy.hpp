#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "banditlab/rng.hpp"

namespace banditlab {

// Per-episode decision maker. The harness calls, for t = 1..T:
//   select(t) -> arm, then observe(t, aggregate), then reveal(t, true_total).
// Anonymous policies only use `aggregate`; reveal() exists for oracle baselines.
class Policy {
public:
    virtual ~Policy() = default;

    virtual std::string name() const = 0;
    virtual void begin(std::size_t arms, std::optional<std::uint64_t> horizon) = 0;
    virtual std::size_t select(std::size_t t) = 0;
    virtual void observe(std::size_t t, double aggregate) = 0;
    virtual void reveal(std::size_t /*t*/, double /*true_total*/) {}
};

// Inverse-CDF draw from p using one uniform variate.
std::size_t sample_index(std::span<const double> p, Rng& rng);

// p_i = (1 - gamma) softmax(w / scale)_i + gamma / N, computed with the max
// weight subtracted first (p is invariant to a common shift of w).
std::vector<double> exp3_distribution(std::span<const double> log_weights, double scale, double gamma);

}  // namespace banditlab
