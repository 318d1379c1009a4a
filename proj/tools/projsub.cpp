// projsub: run, check and compare projected subgradient experiments.
//
// Exit codes: 0 success / all checks pass, 1 a check or compared run failed,
// 2 invalid input (config, flags, trace, unknown check), 3 numeric abort during solve.

#include "projsub/check_runner.hpp"
#include "projsub/config.hpp"
#include "projsub/diagnostics.hpp"
#include "projsub/trace_io.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace projsub;

namespace {

constexpr int kOk = 0;
constexpr int kFailed = 1;
constexpr int kInvalid = 2;
constexpr int kAborted = 3;

void write_json(const std::string &path, const nlohmann::ordered_json &doc) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open '" + path + "' for writing");
    out << doc.dump(2) << '\n';
    if (!out) throw Error("failed writing '" + path + "'");
}

struct SolveArgs {
    std::string config;
    std::string out;
    std::string summary;
    std::optional<std::uint64_t> seed;
    bool override_guard = false;
};

RunConfig load_with_overrides(const std::string &path, const std::optional<std::uint64_t> &seed,
                              bool override_guard) {
    RunConfig cfg = load_run_config(path);
    if (seed) cfg.solver.seed = *seed;
    if (override_guard) cfg.solver.override_schedule_guard = true;
    validate(cfg.solver, &cfg.problem.objective, cfg.problem.sets, cfg.x0);
    return cfg;
}

int cmd_solve(const SolveArgs &args) {
    std::optional<RunConfig> loaded;
    try {
        loaded = load_with_overrides(args.config, args.seed, args.override_guard);
    } catch (const Error &e) {
        std::cerr << "projsub solve: " << e.what() << '\n';
        return kInvalid;
    }
    const RunConfig &cfg = *loaded;
    const std::string trace_path = !args.out.empty() ? args.out : cfg.trace_path.value_or("");
    const std::string summary_path = !args.summary.empty() ? args.summary : cfg.summary_path.value_or("");
    if (trace_path.empty()) {
        std::cerr << "projsub solve: no trace path (use --out or output.trace in the config)\n";
        return kInvalid;
    }

    RunTrace trace;
    try {
        trace = solve(cfg.problem, cfg.solver, cfg.x0);
        write_trace_csv(trace_path, trace);
        if (!summary_path.empty()) write_json(summary_path, to_json(summarize(trace, cfg.problem.name)));
    } catch (const Error &e) {
        std::cerr << "projsub solve: " << e.what() << '\n';
        return kInvalid;
    }
    if (trace.status == RunStatus::aborted) {
        std::cerr << "projsub solve: aborted after " << trace.iterations()
                  << " iterations: " << trace.abort_reason << '\n';
        return kAborted;
    }
    return kOk;
}

struct CheckArgs {
    std::string config;
    std::string trace;
    std::string checks = "all";
    std::string out;
    CheckOptions options;
};

std::vector<std::string> split_list(const std::string &list) {
    std::vector<std::string> out;
    std::stringstream ss(list);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

int cmd_check(const CheckArgs &args) {
    std::vector<CheckReport> reports;
    try {
        const RunConfig cfg = load_run_config(args.config);
        RunTrace trace = read_trace_csv(args.trace);
        attach_metadata(trace, cfg);
        const auto names = split_list(args.checks);
        if (names.empty()) throw Error("no checks requested");
        reports = run_checks(names, trace, cfg, args.options);
    } catch (const Error &e) {
        std::cerr << "projsub check: " << e.what() << '\n';
        return kInvalid;
    }
    try {
        if (!args.out.empty()) write_json(args.out, export_report(reports));
    } catch (const Error &e) {
        std::cerr << "projsub check: " << e.what() << '\n';
        return kInvalid;
    }
    for (const auto &r : reports) {
        std::cout << r.name << ": " << to_string(r.status) << " (" << r.violations << "/" << r.examined
                  << ")";
        if (!r.note.empty()) std::cout << "  " << r.note;
        std::cout << '\n';
    }
    return all_pass(reports) ? kOk : kFailed;
}

struct CompareArgs {
    std::vector<std::string> configs;
    std::optional<double> max_gap;
};

std::string cell(const std::optional<double> &v, int precision = 6) {
    if (!v || !std::isfinite(*v)) return "-";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", precision, *v);
    return buf;
}

int cmd_compare(const CompareArgs &args) {
    const std::vector<std::string> header{"config", "problem", "method", "iters", "best_f", "fstar",
                                          "gap",    "residual", "status"};
    std::vector<std::vector<std::string>> rows;
    bool any_failed = false;
    for (const auto &path : args.configs) {
        std::vector<std::string> row{path};
        try {
            const RunConfig cfg = load_with_overrides(path, std::nullopt, false);
            const RunTrace trace = solve(cfg.problem, cfg.solver, cfg.x0);
            const std::optional<double> value =
                trace.best_f ? trace.best_f
                             : (std::isfinite(trace.terminal.f) ? std::optional<double>(trace.terminal.f)
                                                                : std::nullopt);
            std::optional<double> fstar;
            std::optional<double> gap;
            if (cfg.problem.reference) fstar = cfg.problem.reference->fstar;
            if (fstar && value) gap = std::abs(*value - *fstar);
            bool ok = trace.status != RunStatus::aborted;
            if (args.max_gap && !(gap && *gap <= *args.max_gap)) ok = false;
            std::string status = to_string(trace.status);
            if (!ok) status += " FAIL";
            any_failed = any_failed || !ok;
            row.insert(row.end(), {cfg.problem.name, to_string(cfg.solver.method),
                                   std::to_string(trace.iterations()), cell(value), cell(fstar),
                                   cell(gap, 3), cell(trace.terminal.residual_max, 3), status});
        } catch (const Error &e) {
            any_failed = true;
            row.insert(row.end(), {"-", "-", "-", "-", "-", "-", "-", std::string("error: ") + e.what()});
        }
        rows.push_back(std::move(row));
    }

    std::vector<std::size_t> width(header.size());
    for (std::size_t c = 0; c < header.size(); ++c) {
        width[c] = header[c].size();
        for (const auto &r : rows) width[c] = std::max(width[c], r[c].size());
    }
    auto print = [&](const std::vector<std::string> &r) {
        for (std::size_t c = 0; c < r.size(); ++c) {
            std::cout << r[c];
            if (c + 1 < r.size()) std::cout << std::string(width[c] - r[c].size() + 2, ' ');
        }
        std::cout << '\n';
    };
    print(header);
    for (const auto &r : rows) print(r);
    return any_failed ? kFailed : kOk;
}

struct CounterexampleArgs {
    std::uint64_t K = 10'000'000;
    CounterexampleParams params;
    std::string out;
    std::string table;
};

int cmd_counterexample(const CounterexampleArgs &args) {
    std::vector<CheckReport> reports;
    try {
        const auto summary = counterexample_summary(args.K, args.params);
        reports = counterexample_checks(summary);
        if (!args.table.empty()) {
            std::ofstream out(args.table);
            if (!out) throw Error("cannot open '" + args.table + "' for writing");
            out << "k,alpha,beta,mu\n";
            for (const auto &r : counterexample_sequences(args.K, args.params)) {
                out << r.k << ',' << format_number(r.alpha) << ',' << format_number(r.beta) << ','
                    << format_number(r.mu) << '\n';
            }
        }
        if (!args.out.empty()) write_json(args.out, export_report(reports));
    } catch (const Error &e) {
        std::cerr << "projsub counterexample: " << e.what() << '\n';
        return kInvalid;
    }
    for (const auto &r : reports) {
        std::cout << r.name << ": " << to_string(r.status) << "  " << r.note << '\n';
    }
    return all_pass(reports) ? kOk : kFailed;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Projected subgradient solver kit"};
    app.require_subcommand(1);

    SolveArgs solve_args;
    auto *solve_cmd = app.add_subcommand("solve", "Run a configured experiment and write its trace");
    solve_cmd->add_option("--config", solve_args.config, "Run config (JSON)")->required();
    solve_cmd->add_option("--out", solve_args.out, "Trace CSV path");
    solve_cmd->add_option("--summary", solve_args.summary, "Summary JSON path");
    solve_cmd->add_option("--seed", solve_args.seed, "Override the config seed");
    solve_cmd->add_flag("--override-schedule-guard", solve_args.override_guard,
                        "Allow step sizes that violate the method's schedule requirement");

    CheckArgs check_args;
    auto *check_cmd = app.add_subcommand("check", "Verify a recorded trace against the monitors");
    check_cmd->add_option("--config", check_args.config, "Run config that produced the trace")->required();
    check_cmd->add_option("--trace", check_args.trace, "Trace CSV")->required();
    check_cmd->add_option("--checks", check_args.checks, "Comma-separated check names, or 'all'");
    check_cmd->add_option("--out", check_args.out, "Report JSON path");
    check_cmd->add_option("--feasibility-threshold", check_args.options.feasibility_threshold,
                          "Final-tenth residual bound for feasibility-decay");
    check_cmd->add_option("--constant-step-slack", check_args.options.constant_step_slack,
                          "Slack added to the constant-step bound");

    CompareArgs compare_args;
    auto *compare_cmd = app.add_subcommand("compare", "Run several configs and tabulate the results");
    compare_cmd->add_option("configs", compare_args.configs, "Run configs")->required();
    compare_cmd->add_option("--max-gap", compare_args.max_gap, "Mark rows whose |best f - f*| exceeds this");

    CounterexampleArgs cex_args;
    auto *cex_cmd = app.add_subcommand("counterexample", "Evaluate the divergent sin-log sequences");
    cex_cmd->add_option("--K", cex_args.K, "Number of terms")->check(CLI::Range(std::uint64_t{2}, std::uint64_t{1'000'000'000}));
    cex_cmd->add_option("--exponent", cex_args.params.exponent, "beta_k = k^-exponent");
    cex_cmd->add_option("--frequency", cex_args.params.frequency, "alpha_k = |sin(frequency log k)|");
    cex_cmd->add_option("--out", cex_args.out, "Report JSON path");
    cex_cmd->add_option("--table", cex_args.table, "Write the sequences as CSV");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kInvalid;
    }

    if (*solve_cmd) return cmd_solve(solve_args);
    if (*check_cmd) return cmd_check(check_args);
    if (*compare_cmd) return cmd_compare(compare_args);
    if (*cex_cmd) return cmd_counterexample(cex_args);
    return kInvalid;
}
