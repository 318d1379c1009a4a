#include "projsub/check_runner.hpp"
#include "projsub/config.hpp"
#include "projsub/diagnostics.hpp"
#include "projsub/trace_io.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cmath>

namespace py = pybind11;
using namespace projsub;
using nlohmann::json;

namespace pybind11::detail {

// Vector <-> sequence of floats.
template <> struct type_caster<projsub::Vector> {
    PYBIND11_TYPE_CASTER(projsub::Vector, const_name("list[float]"));

    bool load(handle src, bool convert) {
        list_caster<std::vector<double>, double> inner;
        if (!inner.load(src, convert)) return false;
        value = projsub::Vector(std::move(static_cast<std::vector<double> &>(inner)));
        return true;
    }

    static handle cast(const projsub::Vector &v, return_value_policy, handle) {
        py::list out(v.size());
        for (std::size_t i = 0; i < v.size(); ++i) out[i] = py::float_(v[i]);
        return out.release();
    }
};

} // namespace pybind11::detail

namespace {

/// A finished run together with the config that produced it.
struct Run {
    RunConfig config;
    RunTrace trace;
};

py::object maybe(const std::optional<double> &v) {
    return v ? py::object(py::float_(*v)) : py::object(py::none());
}

py::dict report_dict(const CheckReport &r) {
    py::dict d;
    d["name"] = r.name;
    d["status"] = to_string(r.status);
    d["examined"] = r.examined;
    d["violations"] = r.violations;
    d["worst_margin"] = std::isfinite(r.worst_margin) ? py::object(py::float_(r.worst_margin)) : py::none();
    d["note"] = r.note;
    return d;
}

py::list reports_list(const std::vector<CheckReport> &reports) {
    py::list out;
    for (const auto &r : reports) out.append(report_dict(r));
    return out;
}

Run run_config(const std::string &config_json) {
    RunConfig cfg = parse_run_config(json::parse(config_json));
    validate(cfg.solver, &cfg.problem.objective, cfg.problem.sets, cfg.x0);
    RunTrace trace = solve(cfg.problem, cfg.solver, cfg.x0);
    return Run{std::move(cfg), std::move(trace)};
}

template <class F> std::vector<double> column(const RunTrace &t, F field) {
    std::vector<double> out;
    out.reserve(t.iterations());
    for (const auto &r : t.records) out.push_back(field(r));
    return out;
}

} // namespace

PYBIND11_MODULE(_projsub, m) {
    m.doc() = "Projected subgradient solver kit";

    // Translators are tried newest first, so the derived type goes last.
    py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

    m.def("project", [](const std::string &set_json, const Vector &x) {
        return project(parse_set(json::parse(set_json)), x);
    });
    m.def("distance", [](const std::string &set_json, const Vector &x) {
        return distance(parse_set(json::parse(set_json)), x);
    });
    m.def("contains", [](const std::string &set_json, const Vector &x) {
        return contains(parse_set(json::parse(set_json)), x);
    });

    m.def("problem_names", &builtin_problem_names);
    m.def("problem_info", [](const std::string &name) {
        const Problem p = builtin_problem(name);
        py::dict d;
        d["name"] = p.name;
        d["dimension"] = p.dimension();
        d["sets"] = p.sets.size();
        d["components"] = p.objective.size();
        d["lipschitz"] = p.objective.lipschitz_bound();
        d["start"] = p.start;
        d["feasible_point"] = p.feasible_point ? py::cast(*p.feasible_point) : py::none();
        if (p.reference) {
            d["xstar"] = p.reference->xstar;
            d["fstar"] = p.reference->fstar;
        }
        return d;
    });
    m.def(
        "grid_reference",
        [](const std::string &name, double h) {
            const GridResult g = grid_reference(builtin_problem(name), GridOracle{Vector{-1, -1}, Vector{1, 1}, h, {}});
            py::dict d;
            d["xhat"] = g.xhat;
            d["fhat"] = g.fhat;
            d["gap_bound"] = g.gap_bound;
            d["points_scanned"] = g.points_scanned;
            return d;
        },
        py::arg("name"), py::arg("h") = 0.01);

    py::class_<Run>(m, "Run")
        .def_property_readonly("method", [](const Run &r) { return to_string(r.trace.method); })
        .def_property_readonly("status", [](const Run &r) { return to_string(r.trace.status); })
        .def_property_readonly("abort_reason", [](const Run &r) { return r.trace.abort_reason; })
        .def_property_readonly("iterations", [](const Run &r) { return r.trace.iterations(); })
        .def_property_readonly("best_f", [](const Run &r) { return maybe(r.trace.best_f); })
        .def_property_readonly("final_x", [](const Run &r) { return r.trace.terminal.x; })
        .def_property_readonly("final_f", [](const Run &r) { return r.trace.terminal.f; })
        .def_property_readonly("final_residual", [](const Run &r) { return r.trace.terminal.residual_max; })
        .def_property_readonly("x", [](const Run &r) {
            std::vector<Vector> out;
            for (const auto &rec : r.trace.records) out.push_back(rec.x);
            out.push_back(r.trace.terminal.x);
            return out;
        })
        .def_property_readonly("f", [](const Run &r) { return column(r.trace, [](const auto &rec) { return rec.f; }); })
        .def_property_readonly("lam", [](const Run &r) { return column(r.trace, [](const auto &rec) { return rec.lambda; }); })
        .def_property_readonly("residual_max",
                               [](const Run &r) { return column(r.trace, [](const auto &rec) { return rec.residual_max; }); })
        .def("check",
             [](const Run &r, const std::vector<std::string> &names) {
                 return reports_list(run_checks(names, r.trace, r.config));
             },
             py::arg("names") = std::vector<std::string>{"all"})
        .def("write_csv", [](const Run &r, const std::string &path) { write_trace_csv(path, r.trace); })
        .def("summary", [](const Run &r) { return to_json(summarize(r.trace, r.config.problem.name)).dump(); });

    m.def("run", &run_config, py::arg("config_json"));

    m.def(
        "counterexample",
        [](std::uint64_t K, double exponent, double frequency) {
            const auto s = counterexample_summary(K, CounterexampleParams{exponent, frequency});
            py::dict d;
            d["recurrence_violations"] = s.recurrence_violations;
            d["display_violations"] = s.display_violations;
            d["beta_sq_tail"] = s.beta_sq_tail;
            d["mu_final_max"] = s.mu_final_max;
            d["alpha_max_upper"] = s.alpha_max_upper;
            d["alpha_min_upper"] = s.alpha_min_upper;
            d["checks"] = reports_list(counterexample_checks(s));
            return d;
        },
        py::arg("K"), py::arg("exponent") = 2.0 / 3.0, py::arg("frequency") = 1.0);
}
