#include "banditlab/csv.hpp"

#include <algorithm>
#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include "banditlab/errors.hpp"

namespace banditlab {

namespace {

std::vector<std::string_view> split(std::string_view line, char sep = ',') {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        const std::size_t pos = line.find(sep, start);
        if (pos == std::string_view::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.back() == '\r' || s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    return s;
}

std::uint64_t parse_uint(std::string_view s, std::size_t line, const char* what) {
    const std::string str(trim(s));
    if (str.empty() || str.find_first_not_of("0123456789") != std::string::npos)
        throw ParseError(std::string(what) + " is not a non-negative integer: '" + str + "'", line);
    errno = 0;
    const unsigned long long v = std::strtoull(str.c_str(), nullptr, 10);
    if (errno == ERANGE) throw ParseError(std::string(what) + " is out of range", line);
    return v;
}

double parse_real(std::string_view s, std::size_t line, const char* what) {
    const std::string str(trim(s));
    char* end = nullptr;
    const double v = std::strtod(str.c_str(), &end);
    if (str.empty() || *end != '\0') throw ParseError(std::string(what) + " is not a number: '" + str + "'", line);
    return v;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
    const std::filesystem::path p(path);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot write '" + path + "'");
    out << text;
    if (!out) throw ConfigError("failed writing '" + path + "'");
}

// Calls fn(line_number, line) for each non-empty line.
template <class Fn>
void for_each_line(std::string_view text, Fn fn) {
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        ++line_no;
        const std::string_view line = trim(text.substr(start, end - start));
        if (!line.empty()) fn(line_no, line);
        start = end + 1;
    }
}

}  // namespace

std::string format_real(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

std::vector<RegretRow> regret_rows(const std::vector<RegretCurve>& curves, std::string_view setting,
                                   std::string_view kernel) {
    std::vector<RegretRow> rows;
    for (const auto& c : curves)
        for (const auto& s : c.samples)
            rows.push_back({c.policy, std::string(setting), std::string(kernel), c.seed, s.t, s.regret});
    std::stable_sort(rows.begin(), rows.end(), [](const RegretRow& a, const RegretRow& b) {
        return std::tie(a.policy, a.seed, a.t) < std::tie(b.policy, b.seed, b.t);
    });
    return rows;
}

std::string regret_csv(const std::vector<RegretRow>& rows) {
    std::string out(kRegretHeader);
    out += '\n';
    for (const auto& r : rows) {
        out += r.policy + ',' + r.setting + ',' + r.kernel + ',' + std::to_string(r.seed) + ',' +
               std::to_string(r.t) + ',' + format_real(r.cum_regret) + '\n';
    }
    return out;
}

void export_csv(const std::vector<RegretCurve>& curves, std::string_view setting, std::string_view kernel,
                const std::string& path) {
    write_file(path, regret_csv(regret_rows(curves, setting, kernel)));
}

std::vector<RegretRow> read_regret_csv(const std::string& path) {
    const std::string text = read_file(path);
    std::vector<RegretRow> rows;
    bool header = false;
    for_each_line(text, [&](std::size_t line, std::string_view s) {
        if (!header) {
            if (s != kRegretHeader) throw ParseError("expected header '" + std::string(kRegretHeader) + "'", line);
            header = true;
            return;
        }
        const auto f = split(s);
        if (f.size() != 6) throw ParseError("expected 6 fields, got " + std::to_string(f.size()), line);
        rows.push_back({std::string(f[0]), std::string(f[1]), std::string(f[2]), parse_uint(f[3], line, "seed"),
                        parse_uint(f[4], line, "t"), parse_real(f[5], line, "cum_regret")});
    });
    if (!header) throw ParseError("empty regret file", 1);
    return rows;
}

std::string aggregate_csv(const std::vector<AggregateCurve>& curves, std::string_view setting,
                          std::string_view kernel) {
    std::string out(kAggregateHeader);
    out += '\n';
    for (const auto& c : curves)
        for (std::size_t j = 0; j < c.t.size(); ++j)
            out += c.policy + ',' + std::string(setting) + ',' + std::string(kernel) + ',' + std::to_string(c.t[j]) +
                   ',' + format_real(c.mean[j]) + ',' + format_real(c.std[j]) + ',' + std::to_string(c.reps) + '\n';
    return out;
}

void export_aggregate_csv(const std::vector<AggregateCurve>& curves, std::string_view setting,
                          std::string_view kernel, const std::string& path) {
    write_file(path, aggregate_csv(curves, setting, kernel));
}

TraceData parse_trace(std::string_view text) {
    struct Entry {
        std::uint64_t t;
        std::uint64_t arm;
        double reward;
    };
    std::vector<Entry> entries;
    std::set<std::uint64_t> arms_at_t;
    std::uint64_t last_t = 0;
    bool header = false;
    for_each_line(text, [&](std::size_t line, std::string_view s) {
        if (!header) {
            if (s != kTraceHeader) throw ParseError("expected header '" + std::string(kTraceHeader) + "'", line);
            header = true;
            return;
        }
        const auto f = split(s);
        if (f.size() != 3) throw ParseError("expected 3 fields, got " + std::to_string(f.size()), line);
        const std::uint64_t t = parse_uint(f[0], line, "t");
        const std::uint64_t arm = parse_uint(f[1], line, "arm");
        const double reward = parse_real(f[2], line, "reward");
        if (t < 1) throw ParseError("t must be >= 1", line);
        if (arm < 1) throw ParseError("arm must be >= 1", line);
        if (!(reward >= 0.0 && reward <= 1.0)) throw ParseError("reward must lie in [0,1]", line);
        if (t < last_t) throw ParseError("t decreases (" + std::to_string(t) + " after " + std::to_string(last_t) + ")", line);
        if (t != last_t) arms_at_t.clear();
        if (!arms_at_t.insert(arm).second)
            throw ParseError("duplicate row for t=" + std::to_string(t) + " arm=" + std::to_string(arm), line);
        last_t = t;
        entries.push_back({t, arm, reward});
    });
    if (!header) throw ParseError("empty trace file", 1);
    if (entries.empty()) throw ParseError("trace has no rows", 2);

    TraceData d;
    d.steps = last_t;
    for (const auto& e : entries) d.arms = std::max<std::size_t>(d.arms, e.arm);
    d.values.assign(d.arms * d.steps, 0.0);
    for (const auto& e : entries) d.values[(e.t - 1) * d.arms + (e.arm - 1)] = e.reward;
    return d;
}

TraceData load_trace(const std::string& path) { return parse_trace(read_file(path)); }

}  // namespace banditlab
