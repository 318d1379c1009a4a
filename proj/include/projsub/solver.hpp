#pragma once

#include "projsub/core.hpp"
#include "projsub/functions.hpp"
#include "projsub/schedules.hpp"
#include "projsub/sets.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace projsub {

/// A solver configuration is inconsistent with the problem or with the method's requirements.
class ConfigError : public Error {
  public:
    using Error::Error;
};

enum class Method { SPA, CPA, PPA, RSPA, RPPA, GPA, POCS_sequential, POCS_parallel };

std::string to_string(Method m);
Method parse_method(const std::string &name);

bool is_parallel(Method m) noexcept;
bool is_relaxed(Method m) noexcept;
bool is_pocs(Method m) noexcept;
/// Methods whose convergence theory needs 0 < lambda_k -> 0 and sum lambda_k = infinity.
bool needs_standard_schedule(Method m) noexcept;

/// Order in which the cyclic method visits the sets.
struct Ordering {
    enum class Kind { cyclic, custom, random };

    Kind kind = Kind::cyclic;
    /// 0-based set indices, repeated periodically (custom kind).
    std::vector<std::size_t> map;
    /// Every window of this many consecutive steps must visit every set (custom kind).
    std::size_t window = 0;

    static Ordering cyclic() { return {}; }
    static Ordering custom(std::vector<std::size_t> map, std::size_t window);
    static Ordering random() { return {Kind::random, {}, 0}; }
};

/// Optional early stop: max(||x_{k+1} - x_k||, residual) < tol for `window` consecutive steps.
struct StopRule {
    bool enabled = false;
    double tol = 1e-9;
    std::size_t window = 50;
};

/// Point at which relaxed methods linearise the constraints.
enum class CutterAnchor { iterate, inner_end };

struct SolverConfig {
    SolverConfig(Method m, StepSchedule s) : method(m), schedule(std::move(s)) {}

    Method method;
    StepSchedule schedule;
    std::optional<WeightVector> weights;
    Ordering ordering;
    std::uint64_t max_iters = 1000;
    StopRule stop;
    bool record_inner = false;
    /// Permits schedules that violate the method's step-size requirement.
    bool override_schedule_guard = false;
    std::uint64_t seed = 0;
    CutterAnchor anchor = CutterAnchor::iterate;
    /// Iterates with max residual at most this are eligible for best_f.
    double feasibility_tol = 1e-3;
};

/// State of iteration k: x_k and quantities evaluated there, plus the step to x_{k+1}.
struct IterationRecord {
    std::uint64_t k = 0;
    double lambda = 0.0;
    Vector x;
    double f = 0.0;
    std::vector<double> residuals;
    double residual_max = 0.0;
    /// ||x_{k+1} - x_k||
    double step_norm = 0.0;
    /// x_{k,1}, ..., x_{k,N} when inner recording is enabled.
    std::vector<Vector> inner;
};

/// The last iterate reached (no outgoing step).
struct TerminalState {
    Vector x;
    double f = 0.0;
    std::vector<double> residuals;
    double residual_max = 0.0;
};

enum class RunStatus { completed, stopped_early, aborted };

std::string to_string(RunStatus s);

struct RunTrace {
    Method method = Method::SPA;
    std::string schedule;
    std::uint64_t seed = 0;
    std::size_t set_count = 0;
    std::size_t component_count = 0;
    Ordering::Kind ordering = Ordering::Kind::cyclic;
    CutterAnchor anchor = CutterAnchor::iterate;
    std::vector<IterationRecord> records;
    TerminalState terminal;
    RunStatus status = RunStatus::completed;
    std::string abort_reason;
    double wall_seconds = 0.0;
    /// Minimum f over iterates whose max residual is within the feasibility tolerance.
    std::optional<double> best_f;

    std::size_t iterations() const noexcept { return records.size(); }
    /// x_{k+1} for record index k.
    const Vector &next_iterate(std::size_t k) const;
    bool has_inner() const noexcept;
};

struct InnerCycle {
    Vector end;
    std::vector<Vector> points;
};

/// x_{k,j} = x_{k,j-1} - lam v_{k,j}, j = 1..N. Throws RegionEscape if some x_{k,j-1}
/// leaves the operating region of f_j.
InnerCycle inner_cycle(const Vector &xk, const CompositeObjective &objective, double lam);

/// P_{C_M} ... P_{C_1} x
Vector step_sequential(const Vector &x, const std::vector<ConvexSet> &sets);
/// P_{C_i} x with i the 0-based set index.
Vector step_cyclic(const Vector &x, const std::vector<ConvexSet> &sets, std::size_t set_index);
/// sum_i beta_i P_{C_i} x, reduced in ascending i.
Vector step_parallel(const Vector &x, const std::vector<ConvexSet> &sets, const WeightVector &beta);

enum class RelaxedMode { parallel, sequential };

/// The half-spaces used by the relaxed step: sublevel sets are replaced by their cutter at
/// `anchor`, sets with exact projections are kept as they are.
std::vector<std::optional<ConvexSet>> relaxed_targets(const std::vector<ConvexSet> &sets,
                                                      const Vector &anchor);

Vector step_relaxed(const Vector &x, const std::vector<ConvexSet> &sets, RelaxedMode mode,
                    const std::optional<WeightVector> &beta, const Vector &anchor);

/// 0-based index of the set used for the step from x_k to x_{k+1} in the cyclic order.
std::size_t cyclic_index(std::uint64_t k, std::size_t set_count);

/// P_{C_q} P_{C_{q-1}} ... P_{C_1} P_{C_M} ... P_{C_{q+1}} x, with q a 0-based index.
Vector exact_cyclic_projection(const Vector &x, const std::vector<ConvexSet> &sets, std::size_t q);

/// Checks method/field compatibility; throws ConfigError.
void validate(const SolverConfig &config, const CompositeObjective *objective,
              const std::vector<ConvexSet> &sets, const Vector &x0);

/// Runs x_{k+1} = V_{k+1}(inner_cycle(x_k)) for the configured method.
RunTrace solve(const CompositeObjective &objective, const std::vector<ConvexSet> &sets,
               const SolverConfig &config, const Vector &x0);

/// Feasibility iteration without an objective. `beta` is required for the parallel mode.
RunTrace pocs_solve(const std::vector<ConvexSet> &sets, RelaxedMode mode,
                    const std::optional<WeightVector> &beta, const Vector &x0, std::uint64_t iters);

/// x_{k+1} = P_{C_1}(x_k - lambda_k grad f_1(x_k)) for a smooth f_1.
RunTrace gpa_solve(const ComponentFunction &f1, const ConvexSet &c1, const StepSchedule &schedule,
                   const Vector &x0, std::uint64_t iters, bool override_schedule_guard = false);

} // namespace projsub
