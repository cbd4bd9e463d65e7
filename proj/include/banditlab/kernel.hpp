#pragma once

#include <cstddef>
#include <string>
#include <variant>
#include <vector>

#include "banditlab/rng.hpp"

namespace banditlab {

// Partial rewards of one pull. values[j] lands at offset first_offset + j
// (offset 1 is the step right after the pull).
struct RewardVector {
    std::size_t first_offset = 1;
    std::vector<double> values;

    bool empty() const noexcept { return values.empty(); }
    std::size_t last_offset() const noexcept {
        return values.empty() ? 0 : first_offset + values.size() - 1;
    }
    double total() const noexcept;
};

namespace family {

// Delay z uniform on {lo..hi}; the whole total lands at offset z + 1.
struct RandomDelay {
    std::size_t lo = 0;
    std::size_t hi = 0;
};

// Equal mass on offsets dmin .. dmax-1.
struct BoundedInterval {
    std::size_t dmin = 1;
    std::size_t dmax = 2;
};

// Offsets 1..d with weights proportional to d+1-tau.
struct LinearDecreasing {
    std::size_t d = 1;
};

// Offsets 1..d with weights proportional to tau.
struct LinearIncreasing {
    std::size_t d = 1;
};

// Weight (1-gamma) gamma^(tau-1), gamma in (0,1). Infinite support.
struct Discounted {
    double gamma = 0.5;
};

// Weight proportional to tau^-gamma, gamma > 1. Infinite support.
struct PolynomialDecay {
    double gamma = 2.0;
};

// All mass at offset `delay` (>= 1).
struct PointMass {
    std::size_t delay = 1;
};

// Explicit weights over offsets 1..n; normalized to sum to one.
struct Custom {
    std::vector<double> weights;
};

}  // namespace family

using KernelFamily = std::variant<family::RandomDelay, family::BoundedInterval,
                                  family::LinearDecreasing, family::LinearIncreasing,
                                  family::Discounted, family::PolynomialDecay,
                                  family::PointMass, family::Custom>;

enum class TotalMode {
    Deterministic,  // every pull carries exactly mean_total
    Bernoulli,      // total is Bernoulli(mean_total), spread by the same shape
};

struct TruncationPolicy {
    double tail_tolerance = 1e-12;
    std::size_t max_support = 4096;
};

// Per-arm generator of reward vectors with L1 norm in [0, 1].
//
// Infinite-support families are cut at the first offset whose analytic tail
// mass falls below tail_tolerance (or at max_support, whichever comes first)
// and renormalized over the kept support, so E||r||_1 == mean_total exactly.
class SpreadKernel {
public:
    SpreadKernel(KernelFamily family, double mean_total,
                 TotalMode mode = TotalMode::Deterministic, TruncationPolicy trunc = {});

    RewardVector sample(Rng& rng) const;
    // Same draw as sample(), reusing out's storage.
    void sample_into(Rng& rng, RewardVector& out) const;

    const KernelFamily& family() const noexcept { return family_; }
    double mean_total() const noexcept { return mean_total_; }
    TotalMode total_mode() const noexcept { return mode_; }

    // Largest offset any sample can occupy.
    std::size_t max_offset() const noexcept;

    // True when every sample is total * shape() at offsets shape_first()...
    bool has_fixed_shape() const noexcept { return !shape_.empty(); }
    const std::vector<double>& shape() const noexcept { return shape_; }
    std::size_t shape_first() const noexcept { return shape_first_; }

    // Variance of the pull total ||r||_1.
    double total_variance() const noexcept;

    // Stable, comma-free family description used in CSV output.
    std::string label() const;

private:
    KernelFamily family_;
    double mean_total_;
    TotalMode mode_;
    std::vector<double> shape_;  // normalized to sum 1; empty for RandomDelay
    std::size_t shape_first_ = 1;
};

// kernel_sample
inline RewardVector kernel_sample(const SpreadKernel& kernel, Rng& rng) { return kernel.sample(rng); }

// Offset at which an infinite-support family is truncated.
std::size_t truncation_point(const family::Discounted& f, const TruncationPolicy& trunc);
std::size_t truncation_point(const family::PolynomialDecay& f, const TruncationPolicy& trunc);

struct DelayMeasures {
    double d1 = 0.0;  // sum over cutoffs of the max-over-arms expected tail mass
    double d2 = 0.0;  // same with the tail-mass variance
};

// Per-cutoff tail moments of one kernel: mean[c] and var[c] refer to cutoff
// d' = c + 1, i.e. the mass landing at offsets >= d'.
struct TailMoments {
    std::vector<double> mean;
    std::vector<double> var;
};

TailMoments exact_tail_moments(const SpreadKernel& kernel);
TailMoments monte_carlo_tail_moments(const SpreadKernel& kernel, std::size_t n_samples, Rng& rng);

// d1/d2 over an arm set. Fixed-shape families use closed forms; the
// random-location family (RandomDelay) is estimated from n_samples draws.
DelayMeasures kernel_d1_d2(const std::vector<SpreadKernel>& kernels, std::size_t n_samples, Rng& rng);

DelayMeasures combine_tail_moments(const std::vector<TailMoments>& per_arm);

}  // namespace banditlab
