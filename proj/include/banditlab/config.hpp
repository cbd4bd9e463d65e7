#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "json.hpp"

#include "banditlab/kernel.hpp"

namespace banditlab {

enum class Setting { Stochastic, Adversarial };

std::string_view to_string(Setting s) noexcept;

struct StochasticSpec {
    std::vector<double> means;
    TotalMode totals = TotalMode::Deterministic;
    KernelFamily kernel = family::PointMass{1};
    TruncationPolicy truncation;
};

namespace rewards {
struct Categorical {
    std::vector<double> probs;
};
struct Bernoulli {
    std::vector<double> means;
};
struct Trace {
    std::string path;
};
}  // namespace rewards

using RewardSource = std::variant<rewards::Categorical, rewards::Bernoulli, rewards::Trace>;

struct ObliviousDelay {
    std::size_t lo = 1;
    std::size_t hi = 1;
};
struct StreakDelay {
    std::size_t d = 10;
    std::size_t multiplier = 3;
};
using DelaySpec = std::variant<ObliviousDelay, StreakDelay>;

struct AdversarialSpec {
    RewardSource rewards;
    DelaySpec delay;
};

// One policy entry. Only the parameters meaningful for `name` may be set;
// the parser rejects the rest.
struct PolicySpec {
    std::string name;
    std::string label;
    std::optional<double> alpha;     // ars-ucb
    std::optional<std::string> f;    // ars-ucb round schedule
    std::optional<std::string> g;    // ars-exp3 round schedule
    std::optional<double> gamma;     // ars-exp3, oracle-exp3
    std::optional<std::string> h;    // ars-clw growth function
    std::optional<std::uint64_t> t1; // ars-clw first phase length
    std::optional<std::uint64_t> d;  // clw delay
};

struct ExperimentConfig {
    std::string name;
    Setting setting = Setting::Stochastic;
    std::size_t arms = 0;
    std::uint64_t horizon = 0;
    std::size_t reps = 1;
    std::uint64_t base_seed = 1;
    std::uint64_t stride = 0;  // 0 = default max(1, T/200)
    std::optional<std::string> out;
    std::optional<StochasticSpec> stochastic;
    std::optional<AdversarialSpec> adversarial;
    std::vector<PolicySpec> policies;

    std::uint64_t effective_stride() const noexcept;
    // Re-checks cross-field invariants (after CLI overrides).
    void validate() const;
};

// Throws ConfigError naming the offending key.
ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig parse_config_text(std::string_view text);
// Built-in preset name or a path to a JSON file.
ExperimentConfig load_config(const std::string& name_or_path);

std::vector<std::string> preset_names();
// Raw JSON text of a built-in preset; nullopt if unknown.
std::optional<std::string> preset_text(std::string_view name);

// Means of the nine-arm preset used by the stochastic experiments.
const std::vector<double>& reference_means();

}  // namespace banditlab
