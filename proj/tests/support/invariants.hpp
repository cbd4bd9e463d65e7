#pragma once

// Episode-level checks shared by the unit tests and the acceptance binary.
// Every expected value comes from the oracles in oracles.hpp.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <vector>

#include "banditlab/ars_exp3.hpp"
#include "banditlab/ars_ucb.hpp"
#include "banditlab/environment.hpp"
#include "banditlab/kernel.hpp"
#include "oracles.hpp"

namespace check {

struct Log {
    std::vector<std::size_t> actions;
    std::vector<double> aggregates;
    std::vector<double> totals;
    std::vector<banditlab::RewardVector> vectors;
    double pending = 0.0;
};

inline Log run_logged(banditlab::Environment& env, banditlab::Policy& policy, std::size_t T) {
    Log log;
    for (std::size_t t = 1; t <= T; ++t) {
        const std::size_t a = policy.select(t);
        const auto obs = env.step(t, a);
        policy.observe(t, obs.aggregate);
        policy.reveal(t, obs.true_pull_total);
        log.actions.push_back(a);
        log.aggregates.push_back(obs.aggregate);
        log.totals.push_back(obs.true_pull_total);
        log.vectors.push_back(env.last_vector());
    }
    log.pending = env.ledger().total_pending();
    return log;
}

struct TriangleResult {
    double max_error = 0.0;      // identity residual over maximal runs
    double max_y_error = 0.0;    // library Y(t) vs brute-force double sum
    std::size_t runs = 0;
};

// For each maximal run [t1, t2]: sum Y = sum ||r|| + incoming - outgoing.
inline TriangleResult triangle(const Log& log) {
    TriangleResult res;
    const auto y = oracle::aggregates(log.vectors);
    for (std::size_t t = 1; t <= log.aggregates.size(); ++t)
        res.max_y_error = std::max(res.max_y_error, std::abs(y[t] - log.aggregates[t - 1]));
    for (const auto& r : oracle::runs(log.actions)) {
        double sum_y = 0.0, sum_r = 0.0;
        for (std::size_t t = r.first; t <= r.last; ++t) {
            sum_y += log.aggregates[t - 1];
            double v = 0.0;
            for (double x : log.vectors[t - 1].values) v += x;
            sum_r += v;
        }
        const double err = std::abs(sum_y - (sum_r + oracle::triangle_terms(log.vectors, r.first, r.last)));
        res.max_error = std::max(res.max_error, err);
        ++res.runs;
    }
    return res;
}

// sum of pull totals - (delivered + pending)
inline double conservation_error(const Log& log) {
    double pulled = 0.0, delivered = 0.0;
    for (double x : log.totals) pulled += x;
    for (double x : log.aggregates) delivered += x;
    return std::abs(pulled - delivered - log.pending);
}

// ARS-UCB: count arms whose |M_i - L_i| exceeds d K_i, d the largest offset.
inline std::size_t bounded_gap_violations(const banditlab::ArsUcb& policy, const Log& log, std::size_t d) {
    const std::size_t n = policy.arms();
    std::vector<double> m(n, 0.0), l(n, 0.0);
    for (std::size_t t = 0; t < log.actions.size(); ++t) {
        m[log.actions[t]] += log.aggregates[t];
        l[log.actions[t]] += log.totals[t];
    }
    std::size_t bad = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (std::abs(m[i] - policy.observed(i)) > 1e-9) ++bad;  // the policy saw exactly the aggregates
        const double rounds = static_cast<double>(policy.next_round(i) - 1);
        if (std::abs(m[i] - l[i]) > static_cast<double>(d) * rounds + 1e-9) ++bad;
    }
    return bad;
}

struct DegenerateResult {
    std::size_t mismatches = 0;
    double max_p_diff = 0.0;
};

// ARS-EXP3 with g(k) = 1 on a deterministic offset-1 kernel is classic EXP3
// whose reward at step t is Y(t) = s_{a(t-1)}.
inline DegenerateResult degenerate_exp3(const std::vector<double>& means, std::size_t T, std::uint64_t seed) {
    using namespace banditlab;
    const std::size_t n = means.size();
    std::vector<SpreadKernel> ks;
    for (double s : means) ks.emplace_back(family::PointMass{1}, s);
    auto inst = std::make_shared<const StochasticInstance>(std::move(ks));
    StochasticEnvironment env(inst, Rng(seed ^ 0x5eedULL));

    ArsExp3 policy({RoundSchedule(round_family::Power{1.0, 0.0}), std::nullopt}, Rng(seed));
    policy.begin(n, T);
    oracle::ReferenceExp3 ref(n, policy.gamma(), seed);

    DegenerateResult res;
    std::size_t prev = 0;
    for (std::size_t t = 1; t <= T; ++t) {
        const auto p = policy.probabilities();
        const std::size_t a = policy.select(t);
        const std::size_t b = ref.draw();
        for (std::size_t i = 0; i < n; ++i)
            res.max_p_diff = std::max(res.max_p_diff, std::abs(p[i] - ref.probabilities()[i]));
        if (a != b) ++res.mismatches;
        const double y = env.step(t, a).aggregate;
        policy.observe(t, y);
        ref.reward(t == 1 ? 0.0 : means[prev]);
        prev = a;
    }
    return res;
}

}  // namespace check
