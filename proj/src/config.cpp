#include "banditlab/config.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "banditlab/errors.hpp"
#include "banditlab/schedule.hpp"

namespace banditlab {

using nlohmann::json;

namespace {

void check_keys(const json& obj, std::string_view where, std::initializer_list<std::string_view> allowed) {
    if (!obj.is_object()) throw ConfigError(std::string(where) + " must be an object");
    for (const auto& [key, _] : obj.items()) {
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
            throw ConfigError("unknown key '" + key + "' in " + std::string(where));
    }
}

const json& require(const json& obj, const std::string& key, std::string_view where) {
    if (!obj.contains(key)) throw ConfigError("missing key '" + key + "' in " + std::string(where));
    return obj.at(key);
}

template <class T>
T get_as(const json& v, const std::string& key, std::string_view where) {
    try {
        if constexpr (std::is_unsigned_v<T>) {
            if (v.is_number_integer() && v.get<std::int64_t>() < 0) throw ConfigError("");
            if (!v.is_number_integer()) throw ConfigError("");
        } else if constexpr (std::is_floating_point_v<T>) {
            if (!v.is_number()) throw ConfigError("");
        } else if constexpr (std::is_same_v<T, std::string>) {
            if (!v.is_string()) throw ConfigError("");
        }
        return v.get<T>();
    } catch (const std::exception&) {
        throw ConfigError("key '" + key + "' in " + std::string(where) + " has the wrong type");
    }
}

template <class T>
T get(const json& obj, const std::string& key, std::string_view where) {
    return get_as<T>(require(obj, key, where), key, where);
}

template <class T>
std::optional<T> get_opt(const json& obj, const std::string& key, std::string_view where) {
    if (!obj.contains(key)) return std::nullopt;
    return get_as<T>(obj.at(key), key, where);
}

std::vector<double> get_reals(const json& obj, const std::string& key, std::string_view where) {
    const json& v = require(obj, key, where);
    if (!v.is_array()) throw ConfigError("key '" + key + "' in " + std::string(where) + " must be an array");
    std::vector<double> out;
    for (const auto& x : v) out.push_back(get_as<double>(x, key, where));
    return out;
}

KernelFamily parse_kernel(const json& k, TruncationPolicy& trunc) {
    constexpr std::string_view where = "stochastic.kernel";
    const auto fam = get<std::string>(k, "family", where);
    auto size = [&](const char* key) { return get<std::size_t>(k, key, where); };
    auto trunc_keys = [&] {
        if (auto v = get_opt<double>(k, "tail_tolerance", where)) trunc.tail_tolerance = *v;
        if (auto v = get_opt<std::size_t>(k, "max_support", where)) trunc.max_support = *v;
    };
    if (fam == "random_delay") {
        check_keys(k, where, {"family", "lo", "hi"});
        return family::RandomDelay{size("lo"), size("hi")};
    }
    if (fam == "bounded_interval") {
        check_keys(k, where, {"family", "dmin", "dmax"});
        return family::BoundedInterval{size("dmin"), size("dmax")};
    }
    if (fam == "linear_decreasing") {
        check_keys(k, where, {"family", "d"});
        return family::LinearDecreasing{size("d")};
    }
    if (fam == "linear_increasing") {
        check_keys(k, where, {"family", "d"});
        return family::LinearIncreasing{size("d")};
    }
    if (fam == "discounted") {
        check_keys(k, where, {"family", "gamma", "tail_tolerance", "max_support"});
        trunc_keys();
        return family::Discounted{get<double>(k, "gamma", where)};
    }
    if (fam == "polynomial") {
        check_keys(k, where, {"family", "gamma", "tail_tolerance", "max_support"});
        trunc_keys();
        return family::PolynomialDecay{get<double>(k, "gamma", where)};
    }
    if (fam == "point_mass") {
        check_keys(k, where, {"family", "delay"});
        return family::PointMass{size("delay")};
    }
    if (fam == "custom") {
        check_keys(k, where, {"family", "weights"});
        return family::Custom{get_reals(k, "weights", where)};
    }
    throw ConfigError("unknown kernel family '" + fam + "'");
}

StochasticSpec parse_stochastic(const json& s) {
    constexpr std::string_view where = "stochastic";
    check_keys(s, where, {"means", "totals", "kernel"});
    StochasticSpec spec;
    spec.means = get_reals(s, "means", where);
    for (double m : spec.means)
        if (!(m >= 0.0 && m <= 1.0)) throw ConfigError("stochastic.means must lie in [0,1]");
    const auto totals = get_opt<std::string>(s, "totals", where).value_or("deterministic");
    if (totals == "deterministic")
        spec.totals = TotalMode::Deterministic;
    else if (totals == "bernoulli")
        spec.totals = TotalMode::Bernoulli;
    else
        throw ConfigError("stochastic.totals must be 'deterministic' or 'bernoulli'");
    spec.kernel = parse_kernel(require(s, "kernel", where), spec.truncation);
    // validate parameters once
    SpreadKernel probe(spec.kernel, 0.5, spec.totals, spec.truncation);
    (void)probe;
    return spec;
}

AdversarialSpec parse_adversarial(const json& a) {
    constexpr std::string_view where = "adversarial";
    check_keys(a, where, {"rewards", "delay"});
    AdversarialSpec spec;

    const json& r = require(a, "rewards", where);
    constexpr std::string_view rwhere = "adversarial.rewards";
    const auto gen = get<std::string>(r, "generator", rwhere);
    if (gen == "categorical") {
        check_keys(r, rwhere, {"generator", "probs"});
        rewards::Categorical c{get_reals(r, "probs", rwhere)};
        double sum = 0.0;
        for (double p : c.probs) {
            if (!(p >= 0.0)) throw ConfigError("categorical probs must be non-negative");
            sum += p;
        }
        if (sum > 1.0 + 1e-9) throw ConfigError("categorical probs must sum to at most 1");
        spec.rewards = std::move(c);
    } else if (gen == "bernoulli") {
        check_keys(r, rwhere, {"generator", "means"});
        rewards::Bernoulli b{get_reals(r, "means", rwhere)};
        for (double m : b.means)
            if (!(m >= 0.0 && m <= 1.0)) throw ConfigError("bernoulli means must lie in [0,1]");
        spec.rewards = std::move(b);
    } else if (gen == "trace") {
        check_keys(r, rwhere, {"generator", "path"});
        spec.rewards = rewards::Trace{get<std::string>(r, "path", rwhere)};
    } else {
        throw ConfigError("unknown reward generator '" + gen + "'");
    }

    const json& d = require(a, "delay", where);
    constexpr std::string_view dwhere = "adversarial.delay";
    const auto strategy = get<std::string>(d, "strategy", dwhere);
    if (strategy == "streak") {
        check_keys(d, dwhere, {"strategy", "d", "multiplier"});
        StreakDelay s{get<std::size_t>(d, "d", dwhere), get_opt<std::size_t>(d, "multiplier", dwhere).value_or(3)};
        if (s.d < 1) throw ConfigError("streak delay requires d >= 1");
        spec.delay = s;
    } else if (strategy == "oblivious") {
        check_keys(d, dwhere, {"strategy", "lo", "hi"});
        ObliviousDelay o{get<std::size_t>(d, "lo", dwhere), get<std::size_t>(d, "hi", dwhere)};
        if (o.lo < 1 || o.lo > o.hi) throw ConfigError("oblivious delay requires 1 <= lo <= hi");
        spec.delay = o;
    } else {
        throw ConfigError("unknown delay strategy '" + strategy + "'");
    }
    return spec;
}

PolicySpec parse_policy(const json& p, std::size_t index) {
    const std::string where = "policies[" + std::to_string(index) + "]";
    PolicySpec spec;
    spec.name = get<std::string>(p, "name", where);
    spec.label = get_opt<std::string>(p, "label", where).value_or(spec.name);
    if (spec.label.empty() || spec.label.find_first_of(",\"\n\r") != std::string::npos)
        throw ConfigError("policy label '" + spec.label + "' must be non-empty and free of commas and quotes");

    if (spec.name == "ars-ucb") {
        check_keys(p, where, {"name", "label", "alpha", "f"});
        spec.alpha = get_opt<double>(p, "alpha", where);
        spec.f = get_opt<std::string>(p, "f", where);
        if (spec.alpha && !(*spec.alpha > 0.0)) throw ConfigError(where + ": alpha must be > 0");
        if (spec.f) RoundSchedule::parse(*spec.f);
    } else if (spec.name == "ars-exp3") {
        check_keys(p, where, {"name", "label", "g", "gamma"});
        spec.g = get_opt<std::string>(p, "g", where);
        spec.gamma = get_opt<double>(p, "gamma", where);
        if (spec.g) RoundSchedule::parse(*spec.g);
    } else if (spec.name == "ars-clw") {
        check_keys(p, where, {"name", "label", "h", "t1"});
        spec.h = get_opt<std::string>(p, "h", where);
        spec.t1 = get_opt<std::uint64_t>(p, "t1", where);
        if (spec.h) GrowthFunction::parse(*spec.h);
    } else if (spec.name == "clw") {
        check_keys(p, where, {"name", "label", "d"});
        spec.d = get_opt<std::uint64_t>(p, "d", where);
        if (!spec.d) throw ConfigError(where + ": fixed-round clw needs the delay 'd'");
    } else if (spec.name == "oracle-exp3") {
        check_keys(p, where, {"name", "label", "gamma"});
        spec.gamma = get_opt<double>(p, "gamma", where);
    } else if (spec.name == "uniform" || spec.name == "oracle-ucb") {
        check_keys(p, where, {"name", "label"});
    } else {
        throw ConfigError(where + ": unknown policy '" + spec.name + "'");
    }
    if (spec.gamma && !(*spec.gamma > 0.0 && *spec.gamma <= 1.0))
        throw ConfigError(where + ": gamma must lie in (0,1]");
    return spec;
}

// clang-format off
const std::map<std::string, std::string, std::less<>>& presets() {
    static const std::map<std::string, std::string, std::less<>> table = [] {
        const std::string means = "[0.9, 0.8, 0.7, 0.6, 0.5, 0.4, 0.3, 0.2, 0.1]";
        const std::string stochastic_policies = R"([
      {"name": "ars-ucb", "label": "ars-ucb", "alpha": 4, "f": "power:1,2"},
      {"name": "oracle-ucb", "label": "oracle-ucb"},
      {"name": "uniform", "label": "uniform"}
    ])";
        auto stochastic = [&](const std::string& name, const std::string& kernel) {
            return R"({
  "name": ")" + name + R"(",
  "setting": "stochastic",
  "horizon": 200000,
  "reps": 20,
  "base_seed": 1,
  "stochastic": {
    "means": )" + means + R"(,
    "totals": "deterministic",
    "kernel": )" + kernel + R"(
  },
  "policies": )" + stochastic_policies + "\n}\n";
        };
        // One-hot clicks: at most one category is clicked per step (9% no click).
        const std::string clicks = R"({"generator": "categorical", "probs": [0.3, 0.25, 0.1, 0.08, 0.06, 0.05, 0.04, 0.02, 0.01]})";
        // One coupon per weekday, one clicked per step.
        const std::string coupons = R"({"generator": "categorical", "probs": [0.5, 0.15, 0.1, 0.08, 0.07, 0.05, 0.05]})";
        auto adversarial = [&](const std::string& name, const std::string& rewards, const std::string& delay,
                               const std::string& policies) {
            return R"({
  "name": ")" + name + R"(",
  "setting": "adversarial",
  "horizon": 100000,
  "reps": 20,
  "base_seed": 1,
  "adversarial": {
    "rewards": )" + rewards + R"(,
    "delay": )" + delay + R"(
  },
  "policies": )" + policies + "\n}\n";
        };

        std::map<std::string, std::string, std::less<>> t;
        t["preset_random_delay"] = stochastic("random_delay", R"({"family": "random_delay", "lo": 10, "hi": 30})");
        t["preset_random_delay_wide"] = stochastic("random_delay_wide", R"({"family": "random_delay", "lo": 0, "hi": 60})");
        t["preset_bounded_interval"] = stochastic("bounded_interval", R"({"family": "bounded_interval", "dmin": 30, "dmax": 40})");
        t["preset_linear_decreasing"] = stochastic("linear_decreasing", R"({"family": "linear_decreasing", "d": 100})");
        t["preset_linear_increasing"] = stochastic("linear_increasing", R"({"family": "linear_increasing", "d": 100})");
        t["preset_discounted"] = stochastic("discounted", R"({"family": "discounted", "gamma": 0.8})");
        t["preset_polynomial"] = stochastic("polynomial", R"({"family": "polynomial", "gamma": 3})");
        t["preset_adv_streak"] = adversarial("adv_streak", clicks, R"({"strategy": "streak", "d": 10, "multiplier": 3})", R"([
      {"name": "ars-exp3", "label": "ars-exp3", "g": "power:1,0.5"},
      {"name": "ars-exp3", "label": "ars-exp3-b0.33", "g": "power:1,0.33"},
      {"name": "clw", "label": "clw-d10", "d": 10},
      {"name": "ars-clw", "label": "ars-clw"}
    ])");
        t["preset_adv_oblivious"] = adversarial("adv_oblivious", coupons, R"({"strategy": "oblivious", "lo": 5, "hi": 10})", R"([
      {"name": "ars-exp3", "label": "ars-exp3", "g": "power:1,0.5"},
      {"name": "clw", "label": "clw-d10", "d": 10},
      {"name": "clw", "label": "clw-d9", "d": 9},
      {"name": "ars-clw", "label": "ars-clw"}
    ])");
        return t;
    }();
    return table;
}
// clang-format on

}  // namespace

std::string_view to_string(Setting s) noexcept {
    return s == Setting::Stochastic ? "stochastic" : "adversarial";
}

const std::vector<double>& reference_means() {
    static const std::vector<double> m{0.9, 0.8, 0.7, 0.6, 0.5, 0.4, 0.3, 0.2, 0.1};
    return m;
}

std::uint64_t ExperimentConfig::effective_stride() const noexcept {
    return stride ? stride : std::max<std::uint64_t>(1, horizon / 200);
}

void ExperimentConfig::validate() const {
    if (arms < 2) throw ConfigError("experiment needs at least 2 arms");
    if (horizon < 1) throw ConfigError("horizon must be >= 1");
    if (reps < 1) throw ConfigError("reps must be >= 1");
    if (policies.empty()) throw ConfigError("experiment needs at least one policy");
    std::set<std::string> labels;
    for (const auto& p : policies)
        if (!labels.insert(p.label).second) throw ConfigError("duplicate policy label '" + p.label + "'");
    if (setting == Setting::Stochastic && !stochastic) throw ConfigError("stochastic setting needs a 'stochastic' block");
    if (setting == Setting::Adversarial && !adversarial)
        throw ConfigError("adversarial setting needs an 'adversarial' block");
}

ExperimentConfig parse_config(const json& j) {
    constexpr std::string_view where = "config";
    check_keys(j, where, {"name", "setting", "arms", "horizon", "reps", "base_seed", "stride", "out", "stochastic",
                          "adversarial", "policies"});
    ExperimentConfig cfg;
    cfg.name = get_opt<std::string>(j, "name", where).value_or("experiment");
    const auto setting = get<std::string>(j, "setting", where);
    if (setting == "stochastic")
        cfg.setting = Setting::Stochastic;
    else if (setting == "adversarial")
        cfg.setting = Setting::Adversarial;
    else
        throw ConfigError("setting must be 'stochastic' or 'adversarial'");
    cfg.horizon = get<std::uint64_t>(j, "horizon", where);
    cfg.reps = get_opt<std::size_t>(j, "reps", where).value_or(1);
    cfg.base_seed = get_opt<std::uint64_t>(j, "base_seed", where).value_or(1);
    cfg.stride = get_opt<std::uint64_t>(j, "stride", where).value_or(0);
    cfg.out = get_opt<std::string>(j, "out", where);

    if (cfg.setting == Setting::Stochastic) {
        if (j.contains("adversarial")) throw ConfigError("stochastic setting does not take an 'adversarial' block");
        cfg.stochastic = parse_stochastic(require(j, "stochastic", where));
        cfg.arms = cfg.stochastic->means.size();
    } else {
        if (j.contains("stochastic")) throw ConfigError("adversarial setting does not take a 'stochastic' block");
        cfg.adversarial = parse_adversarial(require(j, "adversarial", where));
        if (const auto* c = std::get_if<rewards::Categorical>(&cfg.adversarial->rewards)) cfg.arms = c->probs.size();
        if (const auto* b = std::get_if<rewards::Bernoulli>(&cfg.adversarial->rewards)) cfg.arms = b->means.size();
    }
    if (auto n = get_opt<std::size_t>(j, "arms", where)) {
        if (cfg.arms && *n != cfg.arms)
            throw ConfigError("'arms' = " + std::to_string(*n) + " does not match the " + std::to_string(cfg.arms) +
                              " arms given");
        cfg.arms = *n;
    }

    const json& pol = require(j, "policies", where);
    if (!pol.is_array()) throw ConfigError("'policies' must be an array");
    for (std::size_t i = 0; i < pol.size(); ++i) cfg.policies.push_back(parse_policy(pol[i], i));

    // trace-driven configs learn the arm count when the trace is loaded
    const bool from_trace = cfg.adversarial && std::holds_alternative<rewards::Trace>(cfg.adversarial->rewards);
    if (!(from_trace && cfg.arms == 0)) cfg.validate();
    return cfg;
}

ExperimentConfig parse_config_text(std::string_view text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    return parse_config(j);
}

ExperimentConfig load_config(const std::string& name_or_path) {
    if (auto text = preset_text(name_or_path)) return parse_config_text(*text);
    std::ifstream in(name_or_path);
    if (!in) throw ConfigError("no preset or readable config file named '" + name_or_path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

std::vector<std::string> preset_names() {
    std::vector<std::string> out;
    for (const auto& [k, _] : presets()) out.push_back(k);
    return out;
}

std::optional<std::string> preset_text(std::string_view name) {
    const auto& t = presets();
    if (auto it = t.find(name); it != t.end()) return it->second;
    return std::nullopt;
}

}  // namespace banditlab
