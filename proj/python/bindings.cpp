#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "banditlab/config.hpp"
#include "banditlab/csv.hpp"
#include "banditlab/errors.hpp"
#include "banditlab/experiment.hpp"
#include "banditlab/kernel.hpp"
#include "banditlab/schedule.hpp"

namespace py = pybind11;
using namespace banditlab;

namespace {

// A preset name, a path, or inline JSON text.
ExperimentConfig resolve(const std::string& config) {
    const auto first = config.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && config[first] == '{') return parse_config_text(config);
    return load_config(config);
}

py::dict run(const std::string& config, std::optional<std::uint64_t> seed, std::optional<std::size_t> reps,
             std::optional<std::uint64_t> horizon, std::optional<std::uint64_t> stride, std::size_t jobs) {
    auto cfg = resolve(config);
    if (seed) cfg.base_seed = *seed;
    if (reps) cfg.reps = *reps;
    if (horizon) cfg.horizon = *horizon;
    if (stride) cfg.stride = *stride;
    cfg.validate();
    const Experiment exp(cfg);
    std::vector<RegretCurve> curves;
    {
        py::gil_scoped_release release;
        curves = exp.run_all(jobs ? jobs : jobs_from_env());
    }
    const auto setting = std::string(to_string(cfg.setting));
    const auto rows = regret_rows(curves, setting, exp.kernel_label());

    py::list policy, seeds, t, regret;
    for (const auto& r : rows) {
        policy.append(r.policy);
        seeds.append(r.seed);
        t.append(r.t);
        regret.append(r.cum_regret);
    }
    py::dict out;
    out["name"] = cfg.name;
    out["setting"] = setting;
    out["kernel"] = exp.kernel_label();
    out["policy"] = policy;
    out["seed"] = seeds;
    out["t"] = t;
    out["cum_regret"] = regret;
    out["csv"] = regret_csv(rows);
    out["aggregate_csv"] = aggregate_csv(aggregate_by_policy(curves), setting, exp.kernel_label());
    return out;
}

py::dict validate(const std::string& spec, std::size_t scan_limit) {
    const auto c = validate_f(RoundSchedule::parse(spec), scan_limit);
    py::dict d;
    d["ok"] = c.ok;
    d["k0"] = c.k0;
    d["scanned_to"] = c.scanned_to;
    d["violating_index"] = c.violating_index;
    d["message"] = c.message;
    return d;
}

py::tuple d1_d2(const std::string& config, std::size_t samples, std::uint64_t seed) {
    const Experiment exp(resolve(config));
    const auto inst = exp.stochastic_instance();
    if (!inst) throw ConfigError("d1/d2 are defined for stochastic configs only");
    Rng rng(seed);
    const auto dm = kernel_d1_d2(inst->kernels(), samples, rng);
    return py::make_tuple(dm.d1, dm.d2);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "banditlab simulation core";

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);

    m.def("presets", &preset_names, "Names of the built-in experiment presets.");
    m.def(
        "preset_text", [](const std::string& name) { return preset_text(name); }, py::arg("name"));
    m.def("run", &run, py::arg("config"), py::arg("seed") = py::none(), py::arg("reps") = py::none(),
          py::arg("horizon") = py::none(), py::arg("stride") = py::none(), py::arg("jobs") = 0,
          "Run every (policy, seed) episode of a config. Returns columns plus CSV text.");
    m.def("validate_f", &validate, py::arg("spec"), py::arg("scan_limit") = 1000000);
    m.def(
        "f", [](const std::string& spec, std::size_t k) { return RoundSchedule::parse(spec).f(k); },
        py::arg("spec"), py::arg("k"));
    m.def(
        "F", [](const std::string& spec, std::size_t k) { return RoundSchedule::parse(spec).F(k); },
        py::arg("spec"), py::arg("K"));
    m.def(
        "compute_K",
        [](const std::string& spec, std::uint64_t T) {
            const auto rc = compute_K(RoundSchedule::parse(spec), T);
            return py::make_tuple(rc.K, rc.G);
        },
        py::arg("spec"), py::arg("T"));
    m.def(
        "phase_plan",
        [](std::uint64_t t1, std::uint64_t T, const std::string& h) {
            const auto p = phase_plan(t1, T, GrowthFunction::parse(h));
            return py::make_tuple(p.boundaries, p.guesses);
        },
        py::arg("t1"), py::arg("T"), py::arg("h") = "power:1,2/3");
    m.def("kernel_d1_d2", &d1_d2, py::arg("config"), py::arg("samples") = 100000, py::arg("seed") = 1,
          "d1 and d2 of a stochastic config's arm kernels.");
}
