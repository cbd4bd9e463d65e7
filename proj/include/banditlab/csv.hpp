#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "banditlab/experiment.hpp"

namespace banditlab {

inline constexpr std::string_view kRegretHeader = "policy,setting,kernel,seed,t,cum_regret";
inline constexpr std::string_view kAggregateHeader = "policy,setting,kernel,t,mean_regret,std_regret,reps";
inline constexpr std::string_view kTraceHeader = "t,arm,reward";

// "%.9g"
std::string format_real(double v);

struct RegretRow {
    std::string policy;
    std::string setting;
    std::string kernel;
    std::uint64_t seed = 0;
    std::uint64_t t = 0;
    double cum_regret = 0.0;
};

// Rows sorted by (policy, seed, t).
std::vector<RegretRow> regret_rows(const std::vector<RegretCurve>& curves, std::string_view setting,
                                   std::string_view kernel);
std::string regret_csv(const std::vector<RegretRow>& rows);
void export_csv(const std::vector<RegretCurve>& curves, std::string_view setting, std::string_view kernel,
                const std::string& path);
std::vector<RegretRow> read_regret_csv(const std::string& path);

std::string aggregate_csv(const std::vector<AggregateCurve>& curves, std::string_view setting, std::string_view kernel);
void export_aggregate_csv(const std::vector<AggregateCurve>& curves, std::string_view setting,
                          std::string_view kernel, const std::string& path);

// Replayable totals: values[(t-1)*arms + i] = s_i(t).
struct TraceData {
    std::size_t arms = 0;
    std::size_t steps = 0;
    std::vector<double> values;
};

// Reads `t,arm,reward` rows (1-based t and arm, header required). Several rows
// may share a t; steps without a row for an arm give that arm 0. Throws
// ParseError with the line number on malformed rows, decreasing t, duplicate
// (t, arm) pairs or rewards outside [0,1], and on a file with no rows.
TraceData load_trace(const std::string& path);
TraceData parse_trace(std::string_view text);

}  // namespace banditlab
