#include "banditlab/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "banditlab/errors.hpp"

namespace banditlab {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void normalize(std::vector<double>& w) {
    const double sum = std::accumulate(w.begin(), w.end(), 0.0);
    for (double& x : w) x /= sum;
}

// Sum over tau > n of tau^-gamma.
double polynomial_tail(double gamma, std::size_t n) {
    if (n <= 16) {
        double partial = 0.0;
        for (std::size_t tau = 1; tau <= n; ++tau) partial += std::pow(static_cast<double>(tau), -gamma);
        return std::riemann_zeta(gamma) - partial;
    }
    // Euler-Maclaurin, accurate to O(n^(-gamma-3)).
    const double x = static_cast<double>(n);
    return std::pow(x, 1.0 - gamma) / (gamma - 1.0) - 0.5 * std::pow(x, -gamma) +
           gamma / 12.0 * std::pow(x, -gamma - 1.0);
}

std::string fmt_real(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

}  // namespace

double RewardVector::total() const noexcept {
    // four partial sums: long supports are latency bound otherwise
    double s[4] = {0.0, 0.0, 0.0, 0.0};
    const std::size_t n = values.size();
    std::size_t j = 0;
    for (; j + 4 <= n; j += 4)
        for (std::size_t k = 0; k < 4; ++k) s[k] += values[j + k];
    for (; j < n; ++j) s[0] += values[j];
    return (s[0] + s[1]) + (s[2] + s[3]);
}

std::size_t truncation_point(const family::Discounted& f, const TruncationPolicy& trunc) {
    std::size_t n = 1;
    double tail = f.gamma;  // mass beyond offset n, as a fraction
    while (tail >= trunc.tail_tolerance && n < trunc.max_support) {
        tail *= f.gamma;
        ++n;
    }
    return n;
}

std::size_t truncation_point(const family::PolynomialDecay& f, const TruncationPolicy& trunc) {
    const double zeta = std::riemann_zeta(f.gamma);
    auto tail_fraction = [&](std::size_t n) { return polynomial_tail(f.gamma, n) / zeta; };
    if (tail_fraction(trunc.max_support) >= trunc.tail_tolerance) return trunc.max_support;
    std::size_t lo = 1, hi = trunc.max_support;  // smallest n with tail < tol is in [lo, hi]
    while (lo < hi) {
        const std::size_t mid = lo + (hi - lo) / 2;
        if (tail_fraction(mid) < trunc.tail_tolerance)
            hi = mid;
        else
            lo = mid + 1;
    }
    return lo;
}

SpreadKernel::SpreadKernel(KernelFamily family, double mean_total, TotalMode mode, TruncationPolicy trunc)
    : family_(std::move(family)), mean_total_(mean_total), mode_(mode) {
    if (!(mean_total >= 0.0 && mean_total <= 1.0))
        throw ConfigError("kernel mean_total must lie in [0,1], got " + fmt_real(mean_total));
    if (!(trunc.tail_tolerance > 0.0) || trunc.max_support < 1)
        throw ConfigError("invalid truncation policy");

    std::visit(overloaded{
                   [&](const family::RandomDelay& f) {
                       if (f.lo > f.hi) throw ConfigError("random_delay requires lo <= hi");
                   },
                   [&](const family::BoundedInterval& f) {
                       if (f.dmin < 1) throw ConfigError("bounded_interval requires dmin >= 1");
                       if (f.dmin >= f.dmax) throw ConfigError("bounded_interval requires dmin < dmax");
                       shape_first_ = f.dmin;
                       shape_.assign(f.dmax - f.dmin, 1.0 / static_cast<double>(f.dmax - f.dmin));
                   },
                   [&](const family::LinearDecreasing& f) {
                       if (f.d < 1) throw ConfigError("linear_decreasing requires d >= 1");
                       const double d = static_cast<double>(f.d);
                       shape_.resize(f.d);
                       for (std::size_t tau = 1; tau <= f.d; ++tau)
                           shape_[tau - 1] = (d + 1.0 - static_cast<double>(tau)) * 2.0 / (d * (d + 1.0));
                   },
                   [&](const family::LinearIncreasing& f) {
                       if (f.d < 1) throw ConfigError("linear_increasing requires d >= 1");
                       const double d = static_cast<double>(f.d);
                       shape_.resize(f.d);
                       for (std::size_t tau = 1; tau <= f.d; ++tau)
                           shape_[tau - 1] = static_cast<double>(tau) * 2.0 / (d * (d + 1.0));
                   },
                   [&](const family::Discounted& f) {
                       if (!(f.gamma > 0.0 && f.gamma < 1.0))
                           throw ConfigError("discounted requires gamma in (0,1)");
                       const std::size_t n = truncation_point(f, trunc);
                       shape_.resize(n);
                       double w = 1.0 - f.gamma;
                       for (std::size_t j = 0; j < n; ++j, w *= f.gamma) shape_[j] = w;
                       normalize(shape_);
                   },
                   [&](const family::PolynomialDecay& f) {
                       if (!(f.gamma > 1.0)) throw ConfigError("polynomial requires gamma > 1");
                       const std::size_t n = truncation_point(f, trunc);
                       shape_.resize(n);
                       for (std::size_t tau = 1; tau <= n; ++tau)
                           shape_[tau - 1] = std::pow(static_cast<double>(tau), -f.gamma);
                       normalize(shape_);
                   },
                   [&](const family::PointMass& f) {
                       if (f.delay < 1) throw ConfigError("point_mass requires delay >= 1");
                       shape_first_ = f.delay;
                       shape_.assign(1, 1.0);
                   },
                   [&](const family::Custom& f) {
                       if (f.weights.empty()) throw ConfigError("custom kernel needs at least one weight");
                       double sum = 0.0;
                       for (double w : f.weights) {
                           if (!(w >= 0.0) || !std::isfinite(w))
                               throw ConfigError("custom kernel weights must be finite and non-negative");
                           sum += w;
                       }
                       if (!(sum > 0.0)) throw ConfigError("custom kernel weights must have positive sum");
                       shape_ = f.weights;
                       normalize(shape_);
                   },
               },
               family_);
}

RewardVector SpreadKernel::sample(Rng& rng) const {
    RewardVector out;
    sample_into(rng, out);
    return out;
}

void SpreadKernel::sample_into(Rng& rng, RewardVector& out) const {
    double total = mean_total_;
    if (mode_ == TotalMode::Bernoulli) total = std::bernoulli_distribution(mean_total_)(rng) ? 1.0 : 0.0;

    out.values.clear();
    if (const auto* rd = std::get_if<family::RandomDelay>(&family_)) {
        const std::size_t z = std::uniform_int_distribution<std::size_t>(rd->lo, rd->hi)(rng);
        out.first_offset = z + 1;
        if (total > 0.0) out.values.assign(1, total);
        return;
    }
    out.first_offset = shape_first_;
    if (total > 0.0) {
        out.values.resize(shape_.size());
        std::transform(shape_.begin(), shape_.end(), out.values.begin(), [total](double w) { return w * total; });
    }
}

std::size_t SpreadKernel::max_offset() const noexcept {
    if (const auto* rd = std::get_if<family::RandomDelay>(&family_)) return rd->hi + 1;
    return shape_first_ + shape_.size() - 1;
}

double SpreadKernel::total_variance() const noexcept {
    return mode_ == TotalMode::Bernoulli ? mean_total_ * (1.0 - mean_total_) : 0.0;
}

std::string SpreadKernel::label() const {
    return std::visit(
        overloaded{
            [](const family::RandomDelay& f) {
                return "random_delay[" + std::to_string(f.lo) + ":" + std::to_string(f.hi) + "]";
            },
            [](const family::BoundedInterval& f) {
                return "bounded_interval[" + std::to_string(f.dmin) + ":" + std::to_string(f.dmax) + "]";
            },
            [](const family::LinearDecreasing& f) { return "linear_decreasing[" + std::to_string(f.d) + "]"; },
            [](const family::LinearIncreasing& f) { return "linear_increasing[" + std::to_string(f.d) + "]"; },
            [](const family::Discounted& f) { return "discounted[" + fmt_real(f.gamma) + "]"; },
            [](const family::PolynomialDecay& f) { return "polynomial[" + fmt_real(f.gamma) + "]"; },
            [](const family::PointMass& f) { return "point_mass[" + std::to_string(f.delay) + "]"; },
            [](const family::Custom& f) { return "custom[" + std::to_string(f.weights.size()) + "]"; },
        },
        family_);
}

TailMoments exact_tail_moments(const SpreadKernel& kernel) {
    const std::size_t cutoffs = kernel.max_offset();
    TailMoments m{std::vector<double>(cutoffs, 0.0), std::vector<double>(cutoffs, 0.0)};
    const double s = kernel.mean_total();
    const double var_total = kernel.total_variance();

    if (kernel.has_fixed_shape()) {
        // tail(d') = total * W(d'), W the shape's suffix sum
        double suffix = 0.0;
        const auto& w = kernel.shape();
        for (std::size_t c = cutoffs; c-- > 0;) {
            const std::size_t offset = c + 1;
            if (offset >= kernel.shape_first()) suffix += w[offset - kernel.shape_first()];
            m.mean[c] = s * suffix;
            m.var[c] = var_total * suffix * suffix;
        }
        return m;
    }

    const auto& rd = std::get<family::RandomDelay>(kernel.family());
    const double span = static_cast<double>(rd.hi - rd.lo + 1);
    const double second_moment = var_total + s * s;
    for (std::size_t c = 0; c < cutoffs; ++c) {
        const std::size_t cutoff = c + 1;
        // landing offset o = z + 1 is uniform on {lo+1 .. hi+1}
        const std::size_t first = std::max(cutoff, rd.lo + 1);
        const double p = first > rd.hi + 1 ? 0.0 : static_cast<double>(rd.hi + 2 - first) / span;
        m.mean[c] = s * p;
        m.var[c] = second_moment * p - s * s * p * p;
    }
    return m;
}

TailMoments monte_carlo_tail_moments(const SpreadKernel& kernel, std::size_t n_samples, Rng& rng) {
    if (n_samples < 1) throw ConfigError("n_samples must be >= 1");
    const std::size_t cutoffs = kernel.max_offset();
    std::vector<double> sum(cutoffs, 0.0), sum_sq(cutoffs, 0.0), tail(cutoffs, 0.0);
    for (std::size_t n = 0; n < n_samples; ++n) {
        const RewardVector r = kernel.sample(rng);
        std::fill(tail.begin(), tail.end(), 0.0);
        double suffix = 0.0;
        for (std::size_t c = cutoffs; c-- > 0;) {
            const std::size_t offset = c + 1;
            if (!r.empty() && offset >= r.first_offset && offset <= r.last_offset())
                suffix += r.values[offset - r.first_offset];
            tail[c] = suffix;
        }
        for (std::size_t c = 0; c < cutoffs; ++c) {
            sum[c] += tail[c];
            sum_sq[c] += tail[c] * tail[c];
        }
    }
    TailMoments m{std::vector<double>(cutoffs), std::vector<double>(cutoffs)};
    const double n = static_cast<double>(n_samples);
    for (std::size_t c = 0; c < cutoffs; ++c) {
        m.mean[c] = sum[c] / n;
        m.var[c] = n_samples > 1 ? std::max(0.0, (sum_sq[c] - n * m.mean[c] * m.mean[c]) / (n - 1.0)) : 0.0;
    }
    return m;
}

DelayMeasures combine_tail_moments(const std::vector<TailMoments>& per_arm) {
    std::size_t cutoffs = 0;
    for (const auto& m : per_arm) cutoffs = std::max(cutoffs, m.mean.size());
    DelayMeasures out;
    for (std::size_t c = 0; c < cutoffs; ++c) {
        double best_mean = 0.0, best_var = 0.0;
        for (const auto& m : per_arm) {
            if (c < m.mean.size()) {
                best_mean = std::max(best_mean, m.mean[c]);
                best_var = std::max(best_var, m.var[c]);
            }
        }
        out.d1 += best_mean;
        out.d2 += best_var;
    }
    return out;
}

DelayMeasures kernel_d1_d2(const std::vector<SpreadKernel>& kernels, std::size_t n_samples, Rng& rng) {
    if (n_samples < 1) throw ConfigError("n_samples must be >= 1");
    std::vector<TailMoments> per_arm;
    per_arm.reserve(kernels.size());
    for (const auto& k : kernels)
        per_arm.push_back(k.has_fixed_shape() ? exact_tail_moments(k) : monte_carlo_tail_moments(k, n_samples, rng));
    return combine_tail_moments(per_arm);
}

}  // namespace banditlab
