#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "banditlab/ars_ucb.hpp"
#include "banditlab/config.hpp"
#include "banditlab/csv.hpp"
#include "banditlab/diagnostics.hpp"
#include "banditlab/errors.hpp"
#include "banditlab/experiment.hpp"
#include "banditlab/schedule.hpp"

using namespace banditlab;

namespace {

struct Overrides {
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> reps;
    std::optional<std::uint64_t> horizon;
    std::optional<std::uint64_t> stride;
    std::optional<std::string> out;
    std::optional<std::string> aggregate;
    bool force = false;
};

void add_overrides(CLI::App* cmd, Overrides& o) {
    cmd->add_option("--seed", o.seed, "base seed (rep r uses seed + r)");
    cmd->add_option("--reps", o.reps, "number of repetitions")->check(CLI::PositiveNumber);
    cmd->add_option("--horizon", o.horizon, "horizon T")->check(CLI::PositiveNumber);
    cmd->add_option("--stride", o.stride, "logging stride")->check(CLI::PositiveNumber);
    cmd->add_option("--out", o.out, "per-seed regret CSV (stdout when omitted)");
    cmd->add_option("--aggregate", o.aggregate, "mean/std regret CSV");
    cmd->add_flag("--force", o.force, "overwrite existing output files");
}

void apply(ExperimentConfig& cfg, const Overrides& o) {
    if (o.seed) cfg.base_seed = *o.seed;
    if (o.reps) cfg.reps = *o.reps;
    if (o.horizon) cfg.horizon = *o.horizon;
    if (o.stride) cfg.stride = *o.stride;
    if (o.out) cfg.out = *o.out;
}

void check_writable(const std::optional<std::string>& path, bool force) {
    if (path && !force && std::filesystem::exists(*path))
        throw ConfigError("output '" + *path + "' exists; pass --force to overwrite");
}

void run_and_write(const ExperimentConfig& cfg, const Overrides& o) {
    check_writable(cfg.out, o.force);
    check_writable(o.aggregate, o.force);
    Experiment exp(cfg);
    const auto curves = exp.run_all(jobs_from_env());
    const std::string setting(to_string(cfg.setting));
    const std::string kernel = exp.kernel_label();
    if (cfg.out)
        export_csv(curves, setting, kernel, *cfg.out);
    else
        std::cout << regret_csv(regret_rows(curves, setting, kernel));
    const auto agg = aggregate_by_policy(curves);
    if (o.aggregate) export_aggregate_csv(agg, setting, kernel, *o.aggregate);
    for (const auto& a : agg)
        std::fprintf(stderr, "%-24s T=%llu  mean regret %.4g  std %.4g  (%zu reps)\n", a.policy.c_str(),
                     static_cast<unsigned long long>(a.t.back()), a.mean.back(), a.std.back(), a.reps);
}

int cmd_validate_schedule(const std::optional<std::string>& f, std::size_t scan, const std::optional<std::string>& h,
                          std::uint64_t t1, std::optional<std::uint64_t> horizon) {
    int rc = 0;
    if (!f && !h) throw ConfigError("validate-schedule needs --f and/or --h");
    if (f) {
        const auto s = RoundSchedule::parse(*f);
        const auto c = validate_f(s, scan);
        std::printf("schedule %s\n", s.label().c_str());
        std::printf("scanned to k = %zu\n", c.scanned_to);
        if (c.ok) {
            std::printf("k0 = %zu\n", c.k0);
        } else {
            std::printf("invalid: %s\n", c.message.c_str());
            rc = 1;
        }
    }
    if (h) {
        const auto g = GrowthFunction::parse(*h);
        const std::uint64_t T = horizon.value_or(t1 * 1024);
        const auto plan = phase_plan(t1, T, g);
        std::printf("growth %s, t1 = %llu, T = %llu, %zu phases\n", g.label().c_str(),
                    static_cast<unsigned long long>(t1), static_cast<unsigned long long>(T), plan.phases());
        std::printf("phase,end,delay_guess\n");
        for (std::size_t k = 0; k < plan.phases(); ++k)
            std::printf("%zu,%llu,%llu\n", k + 1, static_cast<unsigned long long>(plan.boundaries[k]),
                        static_cast<unsigned long long>(plan.guesses[k]));
    }
    return rc;
}

// Runs one ARS-UCB episode and reports rad and rad' per arm at each stride.
int cmd_diag(ExperimentConfig cfg, const Overrides& o, std::optional<double> alpha, std::optional<std::string> f,
             std::size_t mc_samples) {
    apply(cfg, o);
    if (cfg.setting != Setting::Stochastic) throw ConfigError("diag needs a stochastic config");
    check_writable(cfg.out, o.force);
    Experiment exp(cfg);
    const auto& inst = *exp.stochastic_instance();

    ArsUcbParams params;
    for (const auto& p : cfg.policies)
        if (p.name == "ars-ucb") {
            if (p.alpha) params.alpha = *p.alpha;
            if (p.f) params.f = RoundSchedule::parse(*p.f);
            break;
        }
    if (alpha) params.alpha = *alpha;
    if (f) params.f = RoundSchedule::parse(*f);

    Rng mc(derive_seed(cfg.base_seed, "diag"));
    const DelayMeasures dm = kernel_d1_d2(inst.kernels(), mc_samples, mc);

    ArsUcb policy(params);
    policy.begin(inst.arms(), cfg.horizon);
    auto env = exp.make_environment(0);
    const std::uint64_t stride = cfg.effective_stride();

    std::string csv = "t,arm,pulls,rounds,rad,rad_prime\n";
    std::optional<std::uint64_t> first_hold;
    for (std::uint64_t t = 1; t <= cfg.horizon; ++t) {
        const std::size_t a = policy.select(t);
        policy.observe(t, env->step(t, a).aggregate);
        bool all = true;
        const bool log_row = t % stride == 0 || t == cfg.horizon;
        for (std::size_t i = 0; i < inst.arms(); ++i) {
            if (policy.pulls(i) == 0) {
                all = false;
                continue;
            }
            const auto r = diagnostic_rad_prime(policy, i, t, dm.d1, dm.d2);
            if (r.rad < r.rad_prime) all = false;
            if (log_row)
                csv += std::to_string(t) + ',' + std::to_string(i + 1) + ',' + std::to_string(policy.pulls(i)) + ',' +
                       std::to_string(policy.next_round(i)) + ',' + format_real(r.rad) + ',' +
                       format_real(r.rad_prime) + '\n';
        }
        if (all && !first_hold) first_hold = t;
        if (!all) first_hold.reset();
    }

    if (cfg.out) {
        std::ofstream out(*cfg.out, std::ios::trunc);
        out << csv;
    } else {
        std::cout << csv;
    }
    std::fprintf(stderr, "alpha = %g, schedule %s, d1 = %.6g, d2 = %.6g\n", params.alpha, params.f.label().c_str(),
                 dm.d1, dm.d2);
    if (first_hold)
        std::fprintf(stderr, "rad >= rad' for every arm from t = %llu to T\n",
                     static_cast<unsigned long long>(*first_hold));
    else
        std::fprintf(stderr, "rad < rad' for some arm at T\n");
    return 0;
}

std::string sanitize(std::string s) {
    for (char& c : s)
        if (c == ',') c = ';';
    return s;
}

ExperimentConfig make_sweep(ExperimentConfig cfg, const std::optional<std::string>& policy_label,
                            const std::string& param, const std::vector<std::string>& values) {
    const PolicySpec* base = nullptr;
    for (const auto& p : cfg.policies)
        if (!policy_label || p.label == *policy_label) {
            base = &p;
            break;
        }
    if (!base) throw ConfigError("sweep: no policy labelled '" + policy_label.value_or("") + "'");

    std::vector<PolicySpec> grid;
    for (const auto& v : values) {
        PolicySpec s = *base;
        s.label = base->label + "[" + param + "=" + sanitize(v) + "]";
        try {
            if (param == "alpha") s.alpha = std::stod(v);
            else if (param == "gamma") s.gamma = std::stod(v);
            else if (param == "t1") s.t1 = std::stoull(v);
            else if (param == "d") s.d = std::stoull(v);
            else if (param == "f") s.f = v;
            else if (param == "g") s.g = v;
            else if (param == "h") s.h = v;
            else throw ConfigError("sweep: unknown parameter '" + param + "' (alpha, gamma, f, g, h, t1, d)");
        } catch (const std::logic_error&) {
            throw ConfigError("sweep: bad value '" + v + "' for " + param);
        }
        // make_policy rejects schedules eagerly; catch bad values before running
        make_policy(s, 0);
        grid.push_back(std::move(s));
    }
    cfg.policies = std::move(grid);
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"banditlab: bandits with composite anonymous feedback"};
    app.require_subcommand(1);

    std::string config = "preset_random_delay";
    Overrides ov;

    auto* run = app.add_subcommand("run", "run one experiment");
    run->add_option("--config", config, "preset name or JSON file")->required();
    add_overrides(run, ov);

    std::optional<std::string> sweep_policy;
    std::string sweep_param;
    std::vector<std::string> sweep_values;
    auto* sweep = app.add_subcommand("sweep", "grid over one policy parameter");
    sweep->add_option("--config", config, "preset name or JSON file")->required();
    sweep->add_option("--policy", sweep_policy, "label of the policy to vary (default: first)");
    sweep->add_option("--param", sweep_param, "alpha, gamma, f, g, h, t1 or d")->required();
    sweep->add_option("--values", sweep_values, "values to try (space separated)")->required()->delimiter('\0');
    add_overrides(sweep, ov);

    std::optional<std::string> vf, vh;
    std::size_t scan = 1'000'000;
    std::uint64_t t1 = 100;
    std::optional<std::uint64_t> vT;
    auto* vs = app.add_subcommand("validate-schedule", "check a round schedule or a phase plan");
    vs->set_help_flag("--help", "print this help message and exit");
    vs->add_option("--f", vf, "round schedule, e.g. power:1,2");
    vs->add_option("--scan", scan, "largest k scanned");
    vs->add_option("--h", vh, "growth function, e.g. power:1,2/3");
    vs->add_option("--t1", t1, "first phase length");
    vs->add_option("--horizon", vT, "horizon for the phase plan");

    std::string trace;
    auto* replay = app.add_subcommand("replay", "adversarial experiment driven by a t,arm,reward trace");
    replay->add_option("--trace", trace, "trace CSV")->required()->check(CLI::ExistingFile);
    replay->add_option("--config", config, "adversarial base config (delay and policies)");
    add_overrides(replay, ov);

    std::optional<double> dalpha;
    std::optional<std::string> df;
    std::size_t mc = 200'000;
    auto* diag = app.add_subcommand("diag", "trace rad versus rad' along one ARS-UCB episode");
    diag->add_option("--config", config, "stochastic preset or JSON file");
    diag->add_option("--alpha", dalpha, "exploration constant");
    diag->add_option("--f", df, "round schedule");
    diag->add_option("--mc-samples", mc, "samples for d1/d2 estimates");
    add_overrides(diag, ov);

    std::optional<std::string> show;
    std::optional<std::string> dump;
    auto* presets = app.add_subcommand("presets", "list built-in presets");
    presets->add_option("--show", show, "print one preset's JSON");
    presets->add_option("--dump", dump, "write every preset as <dir>/<name>.json");
    presets->add_flag("--force", ov.force, "overwrite existing preset files");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) {
            auto cfg = load_config(config);
            apply(cfg, ov);
            run_and_write(cfg, ov);
        } else if (*sweep) {
            auto cfg = load_config(config);
            apply(cfg, ov);
            run_and_write(make_sweep(cfg, sweep_policy, sweep_param, sweep_values), ov);
        } else if (*vs) {
            return cmd_validate_schedule(vf, scan, vh, t1, vT);
        } else if (*replay) {
            if (replay->count("--config") == 0) config = "preset_adv_oblivious";
            auto cfg = load_config(config);
            if (cfg.setting != Setting::Adversarial) throw ConfigError("replay needs an adversarial base config");
            const TraceData data = load_trace(trace);
            cfg.adversarial->rewards = rewards::Trace{trace};
            cfg.arms = data.arms;
            cfg.horizon = data.steps;
            apply(cfg, ov);
            run_and_write(cfg, ov);
        } else if (*diag) {
            return cmd_diag(load_config(config), ov, dalpha, df, mc);
        } else if (*presets) {
            if (show) {
                const auto text = preset_text(*show);
                if (!text) throw ConfigError("unknown preset '" + *show + "'");
                std::cout << *text << '\n';
            } else if (dump) {
                std::filesystem::create_directories(*dump);
                for (const auto& name : preset_names()) {
                    const std::string path = *dump + "/" + name + ".json";
                    check_writable(path, ov.force);
                    std::ofstream(path) << *preset_text(name) << '\n';
                }
            } else {
                for (const auto& name : preset_names()) std::cout << name << '\n';
            }
        }
    } catch (const ParseError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
