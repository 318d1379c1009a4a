#pragma once

#include "projsub/solver.hpp"

#include <iosfwd>
#include <optional>
#include <string>

#include <json.hpp>

namespace projsub {

/// Shortest representation with 17 significant digits, '.' separator, no locale.
std::string format_number(double v);
double parse_number(const std::string &text);

/// CSV trace. Columns:
///   k, lambda, f, residual_max, residual_1..residual_M, step_norm, x_1..x_n,
///   and inner_j_d (inner iterate j, coordinate d) when inner iterates were recorded.
/// One row per iteration, then a terminal row for the last iterate with lambda, step_norm
/// and inner fields empty. A NaN objective value is written as an empty field.
void write_trace_csv(std::ostream &out, const RunTrace &trace);
void write_trace_csv(const std::string &path, const RunTrace &trace);

/// Inverse of write_trace_csv. Only per-row fields are restored; run metadata (method,
/// schedule, ...) is left at its defaults for the caller to fill in.
RunTrace read_trace_csv(std::istream &in);
RunTrace read_trace_csv(const std::string &path);

struct RunSummary {
    std::string method;
    std::string problem;
    std::uint64_t seed = 0;
    std::size_t iterations = 0;
    std::string status;
    std::string abort_reason;
    std::optional<double> final_f;
    std::optional<double> best_f;
    double final_residual = 0.0;
    double wall_seconds = 0.0;
    std::string schedule;
};

RunSummary summarize(const RunTrace &trace, const std::string &problem);
nlohmann::ordered_json to_json(const RunSummary &s);

} // namespace projsub
