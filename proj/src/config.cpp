#include "projsub/config.hpp"

#include <fstream>
#include <set>

namespace projsub {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string &where, const std::string &what) {
    throw ConfigError(where + ": " + what);
}

void allow_keys(const json &doc, const std::string &where, std::initializer_list<const char *> keys) {
    if (!doc.is_object()) fail(where, "expected an object");
    const std::set<std::string> allowed(keys.begin(), keys.end());
    for (const auto &item : doc.items()) {
        if (!allowed.count(item.key())) fail(where, "unknown key '" + item.key() + "'");
    }
}

const json &need(const json &doc, const std::string &where, const char *key) {
    const auto it = doc.find(key);
    if (it == doc.end()) fail(where, std::string("missing key '") + key + "'");
    return *it;
}

double number(const json &v, const std::string &where) {
    if (!v.is_number()) fail(where, "expected a number");
    return v.get<double>();
}

std::uint64_t count(const json &v, const std::string &where) {
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
        fail(where, "expected a nonnegative integer");
    }
    return v.get<std::uint64_t>();
}

bool boolean(const json &v, const std::string &where) {
    if (!v.is_boolean()) fail(where, "expected true or false");
    return v.get<bool>();
}

std::string text(const json &v, const std::string &where) {
    if (!v.is_string()) fail(where, "expected a string");
    return v.get<std::string>();
}

std::vector<double> numbers(const json &v, const std::string &where) {
    if (!v.is_array()) fail(where, "expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) out.push_back(number(v[i], where + "[" + std::to_string(i) + "]"));
    return out;
}

Vector vec(const json &v, const std::string &where) {
    auto c = numbers(v, where);
    if (c.empty()) fail(where, "vector must be nonempty");
    try {
        return Vector(std::move(c));
    } catch (const Error &e) {
        fail(where, e.what());
    }
}

std::vector<Vector> rows(const json &v, const std::string &where) {
    if (!v.is_array() || v.empty()) fail(where, "expected a nonempty array of vectors");
    std::vector<Vector> out;
    for (std::size_t i = 0; i < v.size(); ++i) out.push_back(vec(v[i], where + "[" + std::to_string(i) + "]"));
    return out;
}

// Constructors of the library types validate their arguments and throw Error; report
// those against the config location.
template <class F> auto build(const std::string &where, F &&make) {
    try {
        return make();
    } catch (const ConfigError &) {
        throw;
    } catch (const Error &e) {
        fail(where, e.what());
    }
}

ConstraintFunction parse_constraint(const json &doc, const std::string &where) {
    const std::string kind = text(need(doc, where, "kind"), where + ".kind");
    if (kind == "quadratic-ball") {
        allow_keys(doc, where, {"kind", "center", "radius"});
        return QuadraticBallConstraint{vec(need(doc, where, "center"), where + ".center"),
                                       number(need(doc, where, "radius"), where + ".radius")};
    }
    if (kind == "affine") {
        allow_keys(doc, where, {"kind", "a", "b"});
        return AffineConstraint{vec(need(doc, where, "a"), where + ".a"), number(need(doc, where, "b"), where + ".b")};
    }
    if (kind == "max-affine") {
        allow_keys(doc, where, {"kind", "a", "b"});
        return build(where, [&] {
            return ConstraintFunction(MaxAffineConstraint{rows(need(doc, where, "a"), where + ".a"),
                                                          numbers(need(doc, where, "b"), where + ".b")});
        });
    }
    fail(where, "unknown constraint kind '" + kind + "'");
}

ConvexSet parse_set_at(const json &doc, const std::string &where) {
    if (!doc.is_object()) fail(where, "expected an object");
    const std::string kind = text(need(doc, where, "kind"), where + ".kind");
    return build(where, [&]() -> ConvexSet {
        if (kind == "halfspace" || kind == "hyperplane") {
            allow_keys(doc, where, {"kind", "a", "b"});
            Vector a = vec(need(doc, where, "a"), where + ".a");
            const double b = number(need(doc, where, "b"), where + ".b");
            if (kind == "halfspace") return Halfspace(std::move(a), b);
            return Hyperplane(std::move(a), b);
        }
        if (kind == "ball") {
            allow_keys(doc, where, {"kind", "center", "radius"});
            return Ball(vec(need(doc, where, "center"), where + ".center"),
                        number(need(doc, where, "radius"), where + ".radius"));
        }
        if (kind == "box") {
            allow_keys(doc, where, {"kind", "lower", "upper"});
            return Box(vec(need(doc, where, "lower"), where + ".lower"),
                       vec(need(doc, where, "upper"), where + ".upper"));
        }
        if (kind == "simplex") {
            allow_keys(doc, where, {"kind", "n"});
            return Simplex(static_cast<std::size_t>(count(need(doc, where, "n"), where + ".n")));
        }
        if (kind == "sublevel") {
            allow_keys(doc, where, {"kind", "constraint"});
            return SublevelSet{parse_constraint(need(doc, where, "constraint"), where + ".constraint")};
        }
        fail(where, "unknown set kind '" + kind + "'");
    });
}

ComponentFunction parse_function_at(const json &doc, const std::string &where) {
    if (!doc.is_object()) fail(where, "expected an object");
    const std::string kind = text(need(doc, where, "kind"), where + ".kind");
    return build(where, [&]() -> ComponentFunction {
        if (kind == "abs-deviation" || kind == "affine") {
            allow_keys(doc, where, {"kind", "a", "b"});
            Vector a = vec(need(doc, where, "a"), where + ".a");
            const double b = number(need(doc, where, "b"), where + ".b");
            if (kind == "affine") return AffineFunction{std::move(a), b};
            return AbsDeviation{std::move(a), b};
        }
        if (kind == "quadratic-distance") {
            allow_keys(doc, where, {"kind", "center", "region_radius"});
            std::optional<double> radius;
            if (doc.contains("region_radius")) radius = number(doc["region_radius"], where + ".region_radius");
            return QuadraticDistance(vec(need(doc, where, "center"), where + ".center"), radius);
        }
        if (kind == "l1-norm") {
            allow_keys(doc, where, {"kind", "n"});
            return L1Norm{static_cast<std::size_t>(count(need(doc, where, "n"), where + ".n"))};
        }
        if (kind == "max-affine") {
            allow_keys(doc, where, {"kind", "a", "b"});
            return MaxAffine{rows(need(doc, where, "a"), where + ".a"), numbers(need(doc, where, "b"), where + ".b")};
        }
        fail(where, "unknown function kind '" + kind + "'");
    });
}

} // namespace

ConvexSet parse_set(const json &doc) { return parse_set_at(doc, "set"); }

ComponentFunction parse_function(const json &doc) { return parse_function_at(doc, "function"); }

Problem parse_problem(const json &doc) {
    const std::string where = "problem";
    if (doc.is_string()) {
        return build(where, [&] { return builtin_problem(doc.get<std::string>()); });
    }
    allow_keys(doc, where, {"name", "objective", "sets", "feasible_point", "reference", "start"});
    const json &fs = need(doc, where, "objective");
    const json &ss = need(doc, where, "sets");
    if (!fs.is_array() || fs.empty()) fail(where + ".objective", "expected a nonempty array");
    if (!ss.is_array() || ss.empty()) fail(where + ".sets", "expected a nonempty array");

    std::vector<ComponentFunction> parts;
    for (std::size_t j = 0; j < fs.size(); ++j) {
        parts.push_back(parse_function_at(fs[j], where + ".objective[" + std::to_string(j) + "]"));
    }
    std::vector<ConvexSet> sets;
    for (std::size_t i = 0; i < ss.size(); ++i) {
        sets.push_back(parse_set_at(ss[i], where + ".sets[" + std::to_string(i) + "]"));
    }
    const std::size_t n = sets.front().dimension();

    Problem p{doc.contains("name") ? text(doc["name"], where + ".name") : std::string("inline"),
              build(where, [&] { return CompositeObjective(std::move(parts)); }),
              std::move(sets),
              std::nullopt,
              std::nullopt,
              {},
              doc.contains("start") ? vec(doc["start"], where + ".start") : Vector::zeros(n)};
    if (doc.contains("feasible_point")) p.feasible_point = vec(doc["feasible_point"], where + ".feasible_point");
    if (doc.contains("reference")) {
        const json &r = doc["reference"];
        allow_keys(r, where + ".reference", {"xstar", "fstar"});
        p.reference = Reference{vec(need(r, where, "xstar"), where + ".reference.xstar"),
                                number(need(r, where, "fstar"), where + ".reference.fstar"), "user"};
    }
    build(where, [&] {
        validate_problem(p);
        return 0;
    });
    return p;
}

StepSchedule parse_schedule(const json &doc) {
    const std::string where = "schedule";
    const std::string kind = text(need(doc, where, "kind"), where + ".kind");
    return build(where, [&] {
        if (kind == "power") {
            allow_keys(doc, where, {"kind", "lambda0", "p"});
            return StepSchedule::power(number(need(doc, where, "lambda0"), where + ".lambda0"),
                                       number(need(doc, where, "p"), where + ".p"));
        }
        if (kind == "constant") {
            allow_keys(doc, where, {"kind", "lambda0"});
            return StepSchedule::constant(number(need(doc, where, "lambda0"), where + ".lambda0"));
        }
        if (kind == "table") {
            allow_keys(doc, where, {"kind", "values", "flags"});
            ScheduleFlags flags;
            if (doc.contains("flags")) {
                const json &f = doc["flags"];
                allow_keys(f, where + ".flags", {"diminishing", "divergent_sum", "square_summable"});
                if (f.contains("diminishing")) flags.diminishing = boolean(f["diminishing"], where + ".flags");
                if (f.contains("divergent_sum")) flags.divergent_sum = boolean(f["divergent_sum"], where + ".flags");
                if (f.contains("square_summable")) {
                    flags.square_summable = boolean(f["square_summable"], where + ".flags");
                }
            }
            return StepSchedule::table(numbers(need(doc, where, "values"), where + ".values"), flags);
        }
        fail(where, "unknown schedule kind '" + kind + "'");
    });
}

Ordering parse_ordering(const json &doc) {
    const std::string where = "ordering";
    std::string kind;
    if (doc.is_string()) {
        kind = doc.get<std::string>();
    } else {
        kind = text(need(doc, where, "kind"), where + ".kind");
    }
    if (kind == "cyclic" || kind == "random") {
        if (doc.is_object()) allow_keys(doc, where, {"kind"});
        return kind == "cyclic" ? Ordering::cyclic() : Ordering::random();
    }
    if (kind == "custom") {
        if (!doc.is_object()) fail(where, "custom ordering needs a map and a window");
        allow_keys(doc, where, {"kind", "map", "window"});
        const json &m = need(doc, where, "map");
        if (!m.is_array()) fail(where + ".map", "expected an array of set indices");
        std::vector<std::size_t> map;
        for (const auto &v : m) {
            const auto idx = count(v, where + ".map");
            if (idx == 0) fail(where + ".map", "set indices start at 1");
            map.push_back(static_cast<std::size_t>(idx - 1));
        }
        return Ordering::custom(std::move(map),
                                static_cast<std::size_t>(count(need(doc, where, "window"), where + ".window")));
    }
    fail(where, "unknown ordering '" + kind + "'");
}

RunConfig parse_run_config(const json &doc) {
    allow_keys(doc, "config",
               {"problem", "method", "schedule", "weights", "ordering", "x0", "max_iters", "seed",
                "record_inner", "override_schedule_guard", "stop", "feasibility_tol", "cutter_anchor",
                "output"});
    Problem problem = parse_problem(need(doc, "config", "problem"));
    const Method method = build("method", [&] { return parse_method(text(need(doc, "config", "method"), "method")); });

    std::optional<StepSchedule> schedule;
    if (doc.contains("schedule")) schedule = parse_schedule(doc["schedule"]);
    if (!schedule) {
        if (!is_pocs(method)) fail("config", "missing key 'schedule'");
        schedule = StepSchedule::constant(1.0);
    }
    SolverConfig solver(method, *schedule);

    if (doc.contains("weights")) {
        const json &w = doc["weights"];
        if (w.is_string() && w.get<std::string>() == "uniform") {
            solver.weights = WeightVector::uniform(problem.sets.size());
        } else {
            solver.weights = build("weights", [&] { return WeightVector(numbers(w, "weights")); });
        }
    }
    if (doc.contains("ordering")) solver.ordering = parse_ordering(doc["ordering"]);
    if (doc.contains("max_iters")) solver.max_iters = count(doc["max_iters"], "max_iters");
    if (doc.contains("seed")) solver.seed = count(doc["seed"], "seed");
    if (doc.contains("record_inner")) solver.record_inner = boolean(doc["record_inner"], "record_inner");
    if (doc.contains("override_schedule_guard")) {
        solver.override_schedule_guard = boolean(doc["override_schedule_guard"], "override_schedule_guard");
    }
    if (doc.contains("stop")) {
        const json &s = doc["stop"];
        allow_keys(s, "stop", {"tol", "window"});
        solver.stop.enabled = true;
        if (s.contains("tol")) solver.stop.tol = number(s["tol"], "stop.tol");
        if (s.contains("window")) solver.stop.window = static_cast<std::size_t>(count(s["window"], "stop.window"));
        if (!(solver.stop.tol > 0.0) || solver.stop.window == 0) fail("stop", "tol and window must be positive");
    }
    if (doc.contains("feasibility_tol")) {
        solver.feasibility_tol = number(doc["feasibility_tol"], "feasibility_tol");
        if (!(solver.feasibility_tol >= 0.0)) fail("feasibility_tol", "must be nonnegative");
    }
    if (doc.contains("cutter_anchor")) {
        const std::string a = text(doc["cutter_anchor"], "cutter_anchor");
        if (a == "iterate") {
            solver.anchor = CutterAnchor::iterate;
        } else if (a == "inner-end") {
            solver.anchor = CutterAnchor::inner_end;
        } else {
            fail("cutter_anchor", "expected 'iterate' or 'inner-end'");
        }
    }

    Vector x0 = doc.contains("x0") ? vec(doc["x0"], "x0") : problem.start;
    RunConfig cfg{std::move(problem), std::move(solver), std::move(x0), std::nullopt, std::nullopt};
    if (doc.contains("output")) {
        const json &o = doc["output"];
        allow_keys(o, "output", {"trace", "summary"});
        if (o.contains("trace")) cfg.trace_path = text(o["trace"], "output.trace");
        if (o.contains("summary")) cfg.summary_path = text(o["summary"], "output.summary");
    }
    return cfg;
}

RunConfig load_run_config(const std::string &path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config '" + path + "'");
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error &e) {
        throw ConfigError("malformed JSON in '" + path + "': " + e.what());
    }
    return parse_run_config(doc);
}

} // namespace projsub
