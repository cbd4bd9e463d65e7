#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace banditlab {

namespace round_family {

// f(k) = ceil(c * k^beta)
struct Power {
    double c = 1.0;
    double beta = 1.0;
};

// f(k) = 2^(k+c) for k >= 2 and f(1) = 2^(2+c)
struct Exponential {
    unsigned c = 0;
};

// Explicit sizes; indices past the end repeat the last entry.
struct Table {
    std::vector<std::uint64_t> sizes;
};

}  // namespace round_family

using RoundFamily = std::variant<round_family::Power, round_family::Exponential, round_family::Table>;

class RoundSchedule {
public:
    explicit RoundSchedule(RoundFamily family);

    // "power:c,beta", "exp:c", "table:a,b,c"
    static RoundSchedule parse(std::string_view spec);

    // Round size for k >= 1. Throws std::domain_error on k == 0 and
    // std::overflow_error when the size is not representable.
    std::uint64_t f(std::size_t k) const;
    // F(K) = f(1) + ... + f(K), F(0) = 0.
    std::uint64_t F(std::size_t K) const;

    const RoundFamily& family() const noexcept { return family_; }
    // beta for Power schedules.
    std::optional<double> power_exponent() const;
    std::string label() const;

private:
    RoundFamily family_;
};

inline std::uint64_t f_eval(const RoundSchedule& s, std::size_t k) { return s.f(k); }
inline std::uint64_t F_cumsum(const RoundSchedule& s, std::size_t K) { return s.F(K); }

struct ScheduleCheck {
    bool ok = false;
    // Smallest k0 with F(k) >= f(k+1) for every scanned k in (k0, scanned_to].
    std::size_t k0 = 0;
    std::size_t scanned_to = 0;
    std::optional<std::size_t> violating_index;
    std::string message;
};

// Bounded scan of the growth conditions on f: nondecreasing, and F(k) >= f(k+1)
// eventually. This is a heuristic certificate, not a proof. The scan stops
// early (scanned_to < scan_limit) if sizes overflow 64 bits.
ScheduleCheck validate_f(const RoundSchedule& schedule, std::size_t scan_limit = 1'000'000);

struct RoundCount {
    std::size_t K = 0;   // largest K with G(K) <= T
    std::uint64_t G = 0;  // G(K)
};

// Throws ConfigError if g(1) > T.
RoundCount compute_K(const RoundSchedule& g, std::uint64_t T);

// h(x) = ceil(c * x^exponent), at least 1.
struct GrowthFunction {
    double c = 1.0;
    double exponent = 2.0 / 3.0;

    std::uint64_t operator()(std::uint64_t x) const;
    // "power:c,e" where e may be a fraction such as 2/3
    static GrowthFunction parse(std::string_view spec);
    std::string label() const;
};

struct PhasePlan {
    std::uint64_t t1 = 0;
    std::vector<std::uint64_t> boundaries;  // T^(k), doubling from t1 until >= T
    std::vector<std::uint64_t> guesses;     // d^(k) = h(T^(k))

    std::size_t phases() const noexcept { return boundaries.size(); }
    // Phase k (0-based) holds steps T^(k-1) < t <= T^(k), T^(-1) = 0.
    std::uint64_t phase_start(std::size_t k) const { return k == 0 ? 1 : boundaries[k - 1] + 1; }
    std::size_t phase_of(std::uint64_t t) const;
};

// Throws ConfigError if T1 < 2, T < 1, or h(T^(k)) >= T^(k) at any boundary,
// or if h decreases between phases.
PhasePlan phase_plan(std::uint64_t t1, std::uint64_t horizon, const GrowthFunction& h);

// Single phase of length `horizon` with a fixed guess d.
PhasePlan single_phase_plan(std::uint64_t horizon, std::uint64_t d);

// Round-up for real-valued size formulas, tolerant of pow() landing a hair
// above an integer.
std::uint64_t ceil_size(double x);

}  // namespace banditlab
