#include "projsub/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

namespace projsub {

std::string to_string(Method m) {
    switch (m) {
    case Method::SPA: return "SPA";
    case Method::CPA: return "CPA";
    case Method::PPA: return "PPA";
    case Method::RSPA: return "RSPA";
    case Method::RPPA: return "RPPA";
    case Method::GPA: return "GPA";
    case Method::POCS_sequential: return "POCS-sequential";
    case Method::POCS_parallel: return "POCS-parallel";
    }
    return "unknown";
}

Method parse_method(const std::string &name) {
    for (Method m : {Method::SPA, Method::CPA, Method::PPA, Method::RSPA, Method::RPPA, Method::GPA,
                     Method::POCS_sequential, Method::POCS_parallel}) {
        if (to_string(m) == name) return m;
    }
    throw ConfigError("unknown method '" + name + "'");
}

bool is_parallel(Method m) noexcept {
    return m == Method::PPA || m == Method::RPPA || m == Method::POCS_parallel;
}

bool is_relaxed(Method m) noexcept { return m == Method::RSPA || m == Method::RPPA; }

bool is_pocs(Method m) noexcept {
    return m == Method::POCS_sequential || m == Method::POCS_parallel;
}

bool needs_standard_schedule(Method m) noexcept {
    return m == Method::SPA || m == Method::CPA || m == Method::PPA || m == Method::RSPA ||
           m == Method::RPPA;
}

std::string to_string(RunStatus s) {
    switch (s) {
    case RunStatus::completed: return "completed";
    case RunStatus::stopped_early: return "stopped_early";
    case RunStatus::aborted: return "aborted";
    }
    return "unknown";
}

Ordering Ordering::custom(std::vector<std::size_t> map, std::size_t window) {
    return {Kind::custom, std::move(map), window};
}

const Vector &RunTrace::next_iterate(std::size_t k) const {
    return k + 1 < records.size() ? records[k + 1].x : terminal.x;
}

bool RunTrace::has_inner() const noexcept {
    return !records.empty() &&
           std::all_of(records.begin(), records.end(), [](const auto &r) { return !r.inner.empty(); });
}

// ---------------------------------------------------------------------------
// Building blocks

InnerCycle inner_cycle(const Vector &xk, const CompositeObjective &objective, double lam) {
    if (!(lam > 0.0)) throw Error("inner cycle: step size must be positive");
    InnerCycle out{xk, {}};
    out.points.reserve(objective.size());
    for (std::size_t j = 0; j < objective.size(); ++j) {
        const auto &fj = objective[j];
        if (!fj.in_region(out.end)) {
            throw RegionEscape("iterate " + to_string(out.end) + " left the operating region of "
                               "component " + std::to_string(j + 1) + " (radius " +
                               std::to_string(*fj.region_radius()) + ")");
        }
        out.end = axpy(-lam, fj.subgradient(out.end), out.end);
        out.points.push_back(out.end);
    }
    return out;
}

Vector step_sequential(const Vector &x, const std::vector<ConvexSet> &sets) {
    Vector y = x;
    for (const auto &s : sets) y = project(s, y);
    return y;
}

Vector step_cyclic(const Vector &x, const std::vector<ConvexSet> &sets, std::size_t set_index) {
    if (set_index >= sets.size()) throw Error("cyclic step: set index out of range");
    return project(sets[set_index], x);
}

namespace {

template <class Project>
Vector weighted_combination(const Vector &x, const WeightVector &beta, std::size_t count,
                            Project &&proj) {
    if (beta.size() != count) {
        throw ConfigError("parallel step: " + std::to_string(beta.size()) + " weights for " +
                          std::to_string(count) + " sets");
    }
    std::vector<Vector> projected;
    projected.reserve(count);
    for (std::size_t i = 0; i < count; ++i) projected.push_back(proj(i, x));
    Vector out = Vector::zeros(x.size());
    for (std::size_t i = 0; i < count; ++i) out = axpy(beta[i], projected[i], out);
    return out;
}

Vector project_target(const std::optional<ConvexSet> &target, const Vector &x) {
    return target ? project(*target, x) : x;
}

} // namespace

Vector step_parallel(const Vector &x, const std::vector<ConvexSet> &sets, const WeightVector &beta) {
    return weighted_combination(x, beta, sets.size(),
                                [&](std::size_t i, const Vector &y) { return project(sets[i], y); });
}

std::vector<std::optional<ConvexSet>> relaxed_targets(const std::vector<ConvexSet> &sets,
                                                      const Vector &anchor) {
    std::vector<std::optional<ConvexSet>> out;
    out.reserve(sets.size());
    for (const auto &s : sets) {
        if (const auto *sub = s.as_sublevel()) {
            Cutter cut = cutter_halfspace(*sub, anchor);
            out.push_back(cut ? std::optional<ConvexSet>(std::move(*cut)) : std::nullopt);
        } else {
            out.emplace_back(s);
        }
    }
    return out;
}

Vector step_relaxed(const Vector &x, const std::vector<ConvexSet> &sets, RelaxedMode mode,
                    const std::optional<WeightVector> &beta, const Vector &anchor) {
    const auto targets = relaxed_targets(sets, anchor);
    if (mode == RelaxedMode::sequential) {
        Vector y = x;
        for (const auto &t : targets) y = project_target(t, y);
        return y;
    }
    if (!beta) throw ConfigError("relaxed parallel step needs weights");
    return weighted_combination(x, *beta, targets.size(), [&](std::size_t i, const Vector &y) {
        return project_target(targets[i], y);
    });
}

std::size_t cyclic_index(std::uint64_t k, std::size_t set_count) {
    return static_cast<std::size_t>(k % set_count);
}

Vector exact_cyclic_projection(const Vector &x, const std::vector<ConvexSet> &sets, std::size_t q) {
    const std::size_t m = sets.size();
    if (q >= m) throw Error("exact cyclic projection: index out of range");
    Vector y = x;
    for (std::size_t step = 1; step <= m; ++step) {
        y = project(sets[(q + step) % m], y);
    }
    return y;
}

// ---------------------------------------------------------------------------
// Validation

namespace {

void validate_ordering(const Ordering &ordering, std::size_t set_count, std::uint64_t max_iters) {
    if (ordering.kind != Ordering::Kind::custom) return;
    const auto &map = ordering.map;
    if (map.empty()) throw ConfigError("custom ordering: map must be nonempty");
    for (std::size_t idx : map) {
        if (idx >= set_count) throw ConfigError("custom ordering: set index out of range");
    }
    const std::size_t window = ordering.window;
    if (window < set_count) {
        throw ConfigError("custom ordering: window bound must be at least the number of sets");
    }
    // The map repeats with period map.size(), so windows starting in the first period cover
    // every window that fits in the run.
    if (max_iters < window) return;
    const std::uint64_t last_start = std::min<std::uint64_t>(map.size() - 1, max_iters - window);
    std::vector<std::size_t> seen(set_count);
    for (std::uint64_t start = 0; start <= last_start; ++start) {
        std::fill(seen.begin(), seen.end(), 0);
        std::size_t distinct = 0;
        for (std::size_t t = 0; t < window; ++t) {
            const std::size_t idx = map[(start + t) % map.size()];
            if (seen[idx]++ == 0) ++distinct;
        }
        if (distinct != set_count) {
            throw ConfigError("custom ordering violates its window bound " +
                              std::to_string(window) + " at step " + std::to_string(start));
        }
    }
}

} // namespace

void validate(const SolverConfig &config, const CompositeObjective *objective,
              const std::vector<ConvexSet> &sets, const Vector &x0) {
    const Method m = config.method;
    if (sets.empty()) throw ConfigError("at least one constraint set is required");
    for (const auto &s : sets) {
        if (s.dimension() != x0.size()) throw ConfigError("set dimension differs from x0");
    }
    if (!is_pocs(m)) {
        if (!objective) throw ConfigError(to_string(m) + " needs an objective");
        if (objective->dimension() != x0.size()) throw ConfigError("objective dimension differs from x0");
    }
    if (!is_relaxed(m)) {
        for (const auto &s : sets) {
            if (!s.has_exact_projection()) {
                throw ConfigError(to_string(m) + " needs exact projections; sublevel sets are only "
                                  "supported by RSPA and RPPA");
            }
        }
    }
    if (is_parallel(m)) {
        if (!config.weights) throw ConfigError(to_string(m) + " requires weights");
        if (config.weights->size() != sets.size()) {
            throw ConfigError("weights length " + std::to_string(config.weights->size()) +
                              " does not match " + std::to_string(sets.size()) + " sets");
        }
    } else if (config.weights) {
        throw ConfigError("weights are only used by parallel methods, not " + to_string(m));
    }
    if (m != Method::CPA && config.ordering.kind != Ordering::Kind::cyclic) {
        throw ConfigError("orderings other than cyclic apply to CPA only");
    }
    validate_ordering(config.ordering, sets.size(), config.max_iters);

    const auto flags = config.schedule.classify();
    if (needs_standard_schedule(m) && !flags.standard_condition() && !config.override_schedule_guard) {
        throw ConfigError("step sizes for " + to_string(m) +
                          " must satisfy 0 < lambda_k -> 0 and sum lambda_k = infinity; " +
                          config.schedule.describe() +
                          " does not (use the schedule-guard override for nondiminishing runs)");
    }
    if (m == Method::GPA) {
        if (objective->size() != 1 || sets.size() != 1) {
            throw ConfigError("GPA needs exactly one component function and one set");
        }
        const auto alpha = (*objective)[0].gradient_lipschitz();
        if (!alpha) throw ConfigError("GPA needs a smooth component with Lipschitz gradient");
        const auto [lo, hi] = config.schedule.tail_bounds();
        const bool admissible = lo > 0.0 && (*alpha == 0.0 || hi < 2.0 / *alpha);
        if (!admissible && !config.override_schedule_guard) {
            throw ConfigError("GPA step sizes need 0 < liminf lambda_k <= limsup lambda_k < 2/alpha "
                              "(alpha = " + std::to_string(*alpha) + "); got " +
                              config.schedule.describe());
        }
    }
}

// ---------------------------------------------------------------------------
// Engine

namespace {

class SetSequencer {
  public:
    SetSequencer(const Ordering &ordering, std::size_t set_count, std::uint64_t seed)
        : ordering_(ordering), set_count_(set_count), rng_(seed) {}

    std::size_t next(std::uint64_t k) {
        switch (ordering_.kind) {
        case Ordering::Kind::cyclic: return cyclic_index(k, set_count_);
        case Ordering::Kind::custom: return ordering_.map[k % ordering_.map.size()];
        case Ordering::Kind::random: return rng_.index(set_count_);
        }
        return 0;
    }

  private:
    const Ordering &ordering_;
    std::size_t set_count_;
    Rng rng_;
};

struct Evaluation {
    double f;
    std::vector<double> residuals;
    double residual_max;
};

Evaluation evaluate(const CompositeObjective *objective, const std::vector<ConvexSet> &sets,
                    const Vector &x) {
    Evaluation e{objective ? objective->value(x) : std::numeric_limits<double>::quiet_NaN(), {}, 0.0};
    e.residuals.reserve(sets.size());
    for (const auto &s : sets) {
        e.residuals.push_back(residual(s, x));
        e.residual_max = std::max(e.residual_max, e.residuals.back());
    }
    return e;
}

RunTrace run(const CompositeObjective *objective, const std::vector<ConvexSet> &sets,
             const SolverConfig &config, const Vector &x0) {
    validate(config, objective, sets, x0);
    const auto started = std::chrono::steady_clock::now();
    const Method m = config.method;

    RunTrace trace;
    trace.method = m;
    trace.schedule = is_pocs(m) ? "none" : config.schedule.describe();
    trace.seed = config.seed;
    trace.set_count = sets.size();
    trace.component_count = objective ? objective->size() : 0;
    trace.ordering = config.ordering.kind;
    trace.anchor = config.anchor;
    trace.records.reserve(static_cast<std::size_t>(std::min<std::uint64_t>(config.max_iters, 1u << 20)));

    SetSequencer sequencer(config.ordering, sets.size(), config.seed);
    Vector x = x0;
    Evaluation current = evaluate(objective, sets, x);
    std::size_t quiet_steps = 0;

    auto consider_best = [&](const Evaluation &e) {
        if (std::isfinite(e.f) && e.residual_max <= config.feasibility_tol) {
            trace.best_f = trace.best_f ? std::min(*trace.best_f, e.f) : e.f;
        }
    };
    consider_best(current);

    try {
        for (std::uint64_t k = 0; k < config.max_iters; ++k) {
            IterationRecord rec;
            rec.k = k;
            rec.lambda = is_pocs(m) ? 0.0 : config.schedule.lambda(k);
            rec.x = x;
            rec.f = current.f;
            rec.residuals = current.residuals;
            rec.residual_max = current.residual_max;

            Vector after_inner = x;
            if (!is_pocs(m)) {
                InnerCycle inner = inner_cycle(x, *objective, rec.lambda);
                after_inner = std::move(inner.end);
                if (config.record_inner) rec.inner = std::move(inner.points);
            }

            Vector next = [&] {
                switch (m) {
                case Method::SPA:
                case Method::GPA:
                case Method::POCS_sequential: return step_sequential(after_inner, sets);
                case Method::CPA: return step_cyclic(after_inner, sets, sequencer.next(k));
                case Method::PPA:
                case Method::POCS_parallel: return step_parallel(after_inner, sets, *config.weights);
                case Method::RSPA:
                case Method::RPPA: {
                    const Vector &anchor = config.anchor == CutterAnchor::iterate ? x : after_inner;
                    return step_relaxed(after_inner, sets,
                                        m == Method::RPPA ? RelaxedMode::parallel
                                                          : RelaxedMode::sequential,
                                        config.weights, anchor);
                }
                }
                return after_inner;
            }();

            Evaluation next_eval = evaluate(objective, sets, next);
            if (objective && !std::isfinite(next_eval.f)) {
                throw NonFiniteError("objective value became non-finite at iteration " +
                                     std::to_string(k + 1));
            }
            rec.step_norm = distance_between(next, x);
            const bool quiet = std::max(rec.step_norm, next_eval.residual_max) < config.stop.tol;
            trace.records.push_back(std::move(rec));
            x = std::move(next);
            current = std::move(next_eval);
            consider_best(current);

            quiet_steps = quiet ? quiet_steps + 1 : 0;
            if (config.stop.enabled && quiet_steps >= config.stop.window) {
                trace.status = RunStatus::stopped_early;
                break;
            }
        }
    } catch (const RegionEscape &e) {
        trace.status = RunStatus::aborted;
        trace.abort_reason = e.what();
    } catch (const NonFiniteError &e) {
        trace.status = RunStatus::aborted;
        trace.abort_reason = e.what();
    } catch (const InfeasibleCut &e) {
        trace.status = RunStatus::aborted;
        trace.abort_reason = e.what();
    }

    trace.terminal = {x, current.f, current.residuals, current.residual_max};
    trace.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return trace;
}

} // namespace

RunTrace solve(const CompositeObjective &objective, const std::vector<ConvexSet> &sets,
               const SolverConfig &config, const Vector &x0) {
    return run(&objective, sets, config, x0);
}

RunTrace pocs_solve(const std::vector<ConvexSet> &sets, RelaxedMode mode,
                    const std::optional<WeightVector> &beta, const Vector &x0, std::uint64_t iters) {
    SolverConfig config(mode == RelaxedMode::parallel ? Method::POCS_parallel : Method::POCS_sequential,
                        StepSchedule::constant(1.0));
    config.weights = beta;
    config.max_iters = iters;
    return run(nullptr, sets, config, x0);
}

RunTrace gpa_solve(const ComponentFunction &f1, const ConvexSet &c1, const StepSchedule &schedule,
                   const Vector &x0, std::uint64_t iters, bool override_schedule_guard) {
    const CompositeObjective objective({f1});
    SolverConfig config(Method::GPA, schedule);
    config.max_iters = iters;
    config.override_schedule_guard = override_schedule_guard;
    return run(&objective, {c1}, config, x0);
}

} // namespace projsub
