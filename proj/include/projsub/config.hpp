#pragma once

#include "projsub/problems.hpp"
#include "projsub/solver.hpp"

#include <optional>
#include <string>

#include <json.hpp>

namespace projsub {

/// A fully resolved run: problem, solver settings, start point and output paths.
struct RunConfig {
    Problem problem;
    SolverConfig solver;
    Vector x0;
    std::optional<std::string> trace_path;
    std::optional<std::string> summary_path;
};

/// Schema-checked conversion; unknown keys and wrong types raise ConfigError. Method/field
/// compatibility is left to validate() so command-line overrides can be applied first.
RunConfig parse_run_config(const nlohmann::json &doc);
/// Reads and parses a config file. Malformed JSON raises ConfigError.
RunConfig load_run_config(const std::string &path);

ConvexSet parse_set(const nlohmann::json &doc);
ComponentFunction parse_function(const nlohmann::json &doc);
/// Catalog name or inline definition.
Problem parse_problem(const nlohmann::json &doc);
StepSchedule parse_schedule(const nlohmann::json &doc);
Ordering parse_ordering(const nlohmann::json &doc);

} // namespace projsub
