#include "projsub/check_runner.hpp"

#include <algorithm>

namespace projsub {

const std::vector<std::string> &check_names() {
    static const std::vector<std::string> names{
        "key-estimate",  "feasibility-decay", "ppa-lemma",     "spa-lemma",
        "inner-drift",   "cyclic-window",     "constant-step", "asymptotic-regularity"};
    return names;
}

void attach_metadata(RunTrace &trace, const RunConfig &config) {
    const SolverConfig &s = config.solver;
    trace.method = s.method;
    trace.ordering = s.ordering.kind;
    trace.anchor = s.anchor;
    trace.seed = s.seed;
    trace.schedule = is_pocs(s.method) ? "none" : s.schedule.describe();
    trace.component_count = config.problem.objective.size();
    if (trace.set_count != config.problem.sets.size()) {
        throw Error("trace has " + std::to_string(trace.set_count) + " residual columns but the problem has " +
                    std::to_string(config.problem.sets.size()) + " sets");
    }
    if (trace.terminal.x.size() != config.problem.dimension()) {
        throw Error("trace dimension differs from the problem dimension");
    }
}

namespace {

const Vector &probe(const Problem &p, const std::string &check) {
    if (!p.feasible_point) throw CheckNotApplicable(check + ": problem has no certified feasible point");
    return *p.feasible_point;
}

void need_inner(const RunTrace &trace, const std::string &check) {
    if (!trace.has_inner()) throw CheckNotApplicable(check + ": trace has no inner iterates");
}

DistanceOracle exact_distance(const Problem &p) {
    if (!p.intersection_projection) return {};
    return [&p](const Vector &x) { return *p.intersection_distance(x); };
}

} // namespace

CheckReport run_check(const std::string &name, const RunTrace &trace, const RunConfig &config,
                      const CheckOptions &options) {
    const Problem &p = config.problem;
    const Method m = trace.method;
    const double L = p.objective.lipschitz_bound();

    if (name == "key-estimate") {
        return check_key_estimate(trace, p.objective, p.sets, probe(p, name), L);
    }
    if (name == "feasibility-decay") {
        return check_feasibility_decay(trace, p.sets, options.feasibility_threshold, exact_distance(p));
    }
    if (name == "ppa-lemma") {
        if (m != Method::PPA && m != Method::RPPA) {
            throw CheckNotApplicable(name + ": needs a PPA or RPPA trace, got " + to_string(m));
        }
        need_inner(trace, name);
        return check_ppa_lemma(trace, p.sets, *config.solver.weights, probe(p, name), L, exact_distance(p));
    }
    if (name == "spa-lemma") {
        if (m != Method::SPA && m != Method::RSPA) {
            throw CheckNotApplicable(name + ": needs an SPA or RSPA trace, got " + to_string(m));
        }
        need_inner(trace, name);
        return check_spa_lemma(trace, p.sets, probe(p, name));
    }
    if (name == "inner-drift") {
        if (is_pocs(m)) throw CheckNotApplicable(name + ": feasibility-only runs have no inner cycle");
        need_inner(trace, name);
        return check_inner_drift(trace, L);
    }
    if (name == "cyclic-window") {
        if (m != Method::CPA || trace.ordering != Ordering::Kind::cyclic) {
            throw CheckNotApplicable(name + ": needs a CPA trace with cyclic ordering");
        }
        return check_cyclic_window(trace, p.sets, L);
    }
    if (name == "constant-step") {
        if (is_pocs(m) || config.solver.schedule.kind() != ScheduleKind::constant) {
            throw CheckNotApplicable(name + ": needs a constant step-size schedule");
        }
        if (!p.reference) throw CheckNotApplicable(name + ": problem has no reference optimum");
        return check_constant_step_bound(trace, p.reference->fstar, L, options.constant_step_slack);
    }
    if (name == "asymptotic-regularity") {
        if (is_pocs(m)) throw CheckNotApplicable(name + ": needs a step-size schedule");
        return check_asymptotic_regularity(trace, L);
    }
    throw Error("unknown check '" + name + "'");
}

std::vector<CheckReport> run_checks(const std::vector<std::string> &names, const RunTrace &trace,
                                    const RunConfig &config, const CheckOptions &options) {
    const auto &known = check_names();
    for (const auto &n : names) {
        if (n != "all" && std::find(known.begin(), known.end(), n) == known.end()) {
            throw Error("unknown check '" + n + "'");
        }
    }
    std::vector<CheckReport> out;
    for (const auto &n : names) {
        if (n != "all") {
            out.push_back(run_check(n, trace, config, options));
            continue;
        }
        for (const auto &k : known) {
            try {
                out.push_back(run_check(k, trace, config, options));
            } catch (const CheckNotApplicable &e) {
                out.push_back(skipped_report(k, e.what()));
            }
        }
    }
    return out;
}

} // namespace projsub
