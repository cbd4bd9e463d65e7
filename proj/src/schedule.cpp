#include "banditlab/schedule.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "banditlab/errors.hpp"

namespace banditlab {

namespace {

constexpr std::uint64_t kMax = std::numeric_limits<std::uint64_t>::max();

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        out.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

double parse_real(std::string_view s, std::string_view what) {
    // accept "a/b"
    if (const auto slash = s.find('/'); slash != std::string_view::npos) {
        const double den = parse_real(s.substr(slash + 1), what);
        if (den == 0.0) throw ConfigError("zero denominator in " + std::string(what));
        return parse_real(s.substr(0, slash), what) / den;
    }
    std::string tmp(s);
    char* end = nullptr;
    const double v = std::strtod(tmp.c_str(), &end);
    if (tmp.empty() || end != tmp.c_str() + tmp.size() || !std::isfinite(v))
        throw ConfigError("cannot parse '" + tmp + "' in " + std::string(what));
    return v;
}

std::uint64_t parse_uint(std::string_view s, std::string_view what) {
    std::uint64_t v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
        throw ConfigError("cannot parse '" + std::string(s) + "' as an integer in " + std::string(what));
    return v;
}

bool is_whole(double x) { return std::floor(x) == x; }

std::string fmt(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

}  // namespace

std::uint64_t ceil_size(double x) {
    if (!std::isfinite(x) || x >= 1.8e19) throw std::overflow_error("round size overflows 64 bits");
    const double r = std::ceil(x - 1e-9 * std::max(1.0, x));
    return r < 1.0 ? 1 : static_cast<std::uint64_t>(r);
}

RoundSchedule::RoundSchedule(RoundFamily family) : family_(std::move(family)) {
    if (const auto* p = std::get_if<round_family::Power>(&family_)) {
        if (!(p->c > 0.0) || !std::isfinite(p->c)) throw ConfigError("power schedule requires c > 0");
        if (!(p->beta >= 0.0) || !std::isfinite(p->beta)) throw ConfigError("power schedule requires beta >= 0");
    } else if (const auto* e = std::get_if<round_family::Exponential>(&family_)) {
        if (e->c > 60) throw ConfigError("exponential schedule offset too large");
    } else {
        const auto& t = std::get<round_family::Table>(family_);
        if (t.sizes.empty()) throw ConfigError("table schedule needs at least one entry");
        for (auto v : t.sizes)
            if (v < 1) throw ConfigError("table schedule sizes must be >= 1");
    }
}

RoundSchedule RoundSchedule::parse(std::string_view spec) {
    const auto colon = spec.find(':');
    const std::string_view kind = spec.substr(0, colon);
    const std::string_view args = colon == std::string_view::npos ? std::string_view{} : spec.substr(colon + 1);
    const auto parts = split(args, ',');
    if (kind == "power") {
        if (parts.size() != 2) throw ConfigError("power schedule expects power:c,beta");
        return RoundSchedule(round_family::Power{parse_real(parts[0], "power c"), parse_real(parts[1], "power beta")});
    }
    if (kind == "exp") {
        if (args.empty() || parts.size() != 1) throw ConfigError("exponential schedule expects exp:c");
        return RoundSchedule(round_family::Exponential{static_cast<unsigned>(parse_uint(parts[0], "exp c"))});
    }
    if (kind == "table") {
        if (args.empty()) throw ConfigError("table schedule expects table:a,b,...");
        round_family::Table t;
        for (auto p : parts) t.sizes.push_back(parse_uint(p, "table entry"));
        return RoundSchedule(std::move(t));
    }
    throw ConfigError("unknown schedule '" + std::string(spec) + "' (expected power:, exp: or table:)");
}

std::uint64_t RoundSchedule::f(std::size_t k) const {
    if (k == 0) throw std::domain_error("round index must be >= 1");
    if (const auto* p = std::get_if<round_family::Power>(&family_)) {
        if (is_whole(p->c) && is_whole(p->beta) && p->beta <= 64) {
            // exact integer arithmetic
            std::uint64_t v = static_cast<std::uint64_t>(p->c);
            for (int i = 0; i < static_cast<int>(p->beta); ++i) {
                if (v > kMax / k) throw std::overflow_error("round size overflows 64 bits");
                v *= k;
            }
            return std::max<std::uint64_t>(v, 1);
        }
        return ceil_size(p->c * std::pow(static_cast<double>(k), p->beta));
    }
    if (const auto* e = std::get_if<round_family::Exponential>(&family_)) {
        const std::size_t exponent = (k == 1 ? 2 : k) + e->c;
        if (exponent >= 64) throw std::overflow_error("round size overflows 64 bits");
        return std::uint64_t{1} << exponent;
    }
    const auto& t = std::get<round_family::Table>(family_);
    return k <= t.sizes.size() ? t.sizes[k - 1] : t.sizes.back();
}

std::uint64_t RoundSchedule::F(std::size_t K) const {
    std::uint64_t sum = 0;
    for (std::size_t k = 1; k <= K; ++k) {
        const std::uint64_t v = f(k);
        if (sum > kMax - v) throw std::overflow_error("cumulative round size overflows 64 bits");
        sum += v;
    }
    return sum;
}

std::optional<double> RoundSchedule::power_exponent() const {
    if (const auto* p = std::get_if<round_family::Power>(&family_)) return p->beta;
    return std::nullopt;
}

std::string RoundSchedule::label() const {
    if (const auto* p = std::get_if<round_family::Power>(&family_)) return "power:" + fmt(p->c) + "," + fmt(p->beta);
    if (const auto* e = std::get_if<round_family::Exponential>(&family_)) return "exp:" + std::to_string(e->c);
    std::string out = "table:";
    const auto& t = std::get<round_family::Table>(family_);
    for (std::size_t i = 0; i < t.sizes.size(); ++i) out += (i ? "," : "") + std::to_string(t.sizes[i]);
    return out;
}

ScheduleCheck validate_f(const RoundSchedule& schedule, std::size_t scan_limit) {
    if (scan_limit < 2) throw ConfigError("scan_limit must be >= 2");
    ScheduleCheck out;
    std::uint64_t F = 0;
    std::size_t last_violation = 0;
    std::uint64_t fk = schedule.f(1);
    std::size_t k = 1;
    try {
        for (; k <= scan_limit; ++k) {
            const std::uint64_t next = schedule.f(k + 1);
            if (next < fk) {
                out.violating_index = k + 1;
                out.scanned_to = k;
                out.message = "f is not nondecreasing: f(" + std::to_string(k + 1) + ") = " + std::to_string(next) +
                              " < f(" + std::to_string(k) + ") = " + std::to_string(fk);
                return out;
            }
            if (F > kMax - fk) throw std::overflow_error("F overflow");
            F += fk;
            if (F < next) last_violation = k;
            fk = next;
        }
        out.scanned_to = scan_limit;
    } catch (const std::overflow_error&) {
        out.scanned_to = k - 1;
    }
    if (out.scanned_to < 1) {
        out.message = "round sizes overflow before any index could be checked";
        return out;
    }
    out.k0 = last_violation;
    if (last_violation == out.scanned_to) {
        out.violating_index = last_violation;
        out.message = "F(k) < f(k+1) still holds at the end of the scan (k = " + std::to_string(last_violation) + ")";
        return out;
    }
    out.ok = true;
    return out;
}

RoundCount compute_K(const RoundSchedule& g, std::uint64_t T) {
    if (T < 1) throw ConfigError("horizon must be >= 1");
    if (g.f(1) > T) throw ConfigError("horizon too small: g(1) = " + std::to_string(g.f(1)) + " > T = " + std::to_string(T));
    RoundCount rc;
    while (true) {
        const std::uint64_t next = g.f(rc.K + 1);
        if (next > T - rc.G) break;
        rc.G += next;
        ++rc.K;
    }
    return rc;
}

std::uint64_t GrowthFunction::operator()(std::uint64_t x) const {
    return ceil_size(c * std::pow(static_cast<double>(x), exponent));
}

GrowthFunction GrowthFunction::parse(std::string_view spec) {
    const auto colon = spec.find(':');
    if (spec.substr(0, colon) != "power" || colon == std::string_view::npos)
        throw ConfigError("growth function expects power:c,e");
    const auto parts = split(spec.substr(colon + 1), ',');
    if (parts.size() != 2) throw ConfigError("growth function expects power:c,e");
    GrowthFunction h{parse_real(parts[0], "h c"), parse_real(parts[1], "h exponent")};
    if (!(h.c > 0.0) || !(h.exponent >= 0.0)) throw ConfigError("growth function requires c > 0 and e >= 0");
    return h;
}

std::string GrowthFunction::label() const { return "power:" + fmt(c) + "," + fmt(exponent); }

std::size_t PhasePlan::phase_of(std::uint64_t t) const {
    const auto it = std::lower_bound(boundaries.begin(), boundaries.end(), t);
    if (it == boundaries.end()) throw std::out_of_range("step beyond the phase plan");
    return static_cast<std::size_t>(it - boundaries.begin());
}

PhasePlan phase_plan(std::uint64_t t1, std::uint64_t horizon, const GrowthFunction& h) {
    if (t1 < 2) throw ConfigError("initial phase length T1 must be >= 2");
    if (horizon < 1) throw ConfigError("horizon must be >= 1");
    PhasePlan plan;
    plan.t1 = t1;
    std::uint64_t b = t1;
    while (true) {
        const std::uint64_t d = h(b);
        if (d >= b)
            throw ConfigError("invalid h: h(" + std::to_string(b) + ") = " + std::to_string(d) + " is not < " +
                              std::to_string(b));
        if (!plan.guesses.empty() && d < plan.guesses.back()) throw ConfigError("invalid h: h must be increasing");
        plan.boundaries.push_back(b);
        plan.guesses.push_back(d);
        if (b >= horizon) break;
        if (b > kMax / 2) throw std::overflow_error("phase boundary overflow");
        b *= 2;
    }
    return plan;
}

PhasePlan single_phase_plan(std::uint64_t horizon, std::uint64_t d) {
    if (d < 1) throw ConfigError("delay guess d must be >= 1");
    PhasePlan plan;
    plan.t1 = horizon;
    plan.boundaries = {horizon};
    plan.guesses = {d};
    return plan;
}

}  // namespace banditlab
