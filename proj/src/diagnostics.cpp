#include "projsub/diagnostics.hpp"

#include <algorithm>
#include <cmath>

namespace projsub {

std::string to_string(CheckStatus s) {
    switch (s) {
    case CheckStatus::pass: return "pass";
    case CheckStatus::fail: return "fail";
    case CheckStatus::skipped: return "skipped";
    }
    return "unknown";
}

CheckReport skipped_report(std::string name, std::string reason) {
    CheckReport r;
    r.name = std::move(name);
    r.status = CheckStatus::skipped;
    r.note = std::move(reason);
    return r;
}

Tolerance inequality_tolerance() { return Tolerance(1e-9, 1e-12); }

namespace {

/// Accumulates margins rhs - lhs of a family of inequalities lhs <= rhs.
class MarginTally {
  public:
    MarginTally(std::string name, const Tolerance &tol) : tol_(tol) { report_.name = std::move(name); }

    void add(double lhs, double rhs) {
        ++report_.examined;
        const double margin = rhs - lhs;
        report_.worst_margin = std::min(report_.worst_margin, margin);
        if (!(margin >= -tol_.slack(std::max(std::abs(lhs), std::abs(rhs))))) ++report_.violations;
    }

    CheckReport finish(std::string note = {}) {
        report_.status = report_.violations == 0 ? CheckStatus::pass : CheckStatus::fail;
        report_.note = std::move(note);
        return report_;
    }

  private:
    CheckReport report_;
    Tolerance tol_;
};

const Vector &iterate(const RunTrace &trace, std::size_t k) {
    return k < trace.records.size() ? trace.records[k].x : trace.terminal.x;
}

std::size_t tenth(std::size_t n) { return std::max<std::size_t>(1, (n + 9) / 10); }

void require_member(const std::vector<ConvexSet> &sets, const Vector &z) {
    for (const auto &s : sets) {
        if (!contains(s, z)) {
            throw Error("probe point " + to_string(z) + " is not in a " + s.kind() +
                        " constraint set");
        }
    }
}

double max_residual(const std::vector<ConvexSet> &sets, const Vector &x) {
    double r = 0.0;
    for (const auto &s : sets) r = std::max(r, residual(s, x));
    return r;
}

/// Projection targets used for the step out of record k.
std::vector<std::optional<ConvexSet>> step_targets(const RunTrace &trace,
                                                   const std::vector<ConvexSet> &sets, std::size_t k) {
    if (is_relaxed(trace.method)) {
        const auto &rec = trace.records[k];
        const Vector &anchor = trace.anchor == CutterAnchor::iterate ? rec.x : rec.inner.back();
        return relaxed_targets(sets, anchor);
    }
    return {sets.begin(), sets.end()};
}

double target_distance(const std::optional<ConvexSet> &t, const Vector &x) {
    return t ? distance(*t, x) : 0.0;
}

Vector target_project(const std::optional<ConvexSet> &t, const Vector &x) {
    return t ? project(*t, x) : x;
}

void require_inner(const RunTrace &trace, const char *check) {
    if (!trace.has_inner()) {
        throw Error(std::string(check) + " needs inner iterates; rerun with inner recording on");
    }
}

} // namespace

CheckReport check_key_estimate(const RunTrace &trace, const CompositeObjective &objective,
                               const std::vector<ConvexSet> &sets, const Vector &z, double L,
                               const Tolerance &tol) {
    require_member(sets, z);
    const double fz = objective.value(z);
    MarginTally tally("key-estimate", tol);
    for (std::size_t k = 0; k < trace.iterations(); ++k) {
        const auto &rec = trace.records[k];
        const double lam = rec.lambda;
        const double lhs = squared_distance(trace.next_iterate(k), z);
        const double descent = lam == 0.0 ? 0.0 : 2.0 * lam * (rec.f - fz);
        const double rhs = squared_distance(rec.x, z) - descent + lam * lam * L * L;
        tally.add(lhs, rhs);
    }
    return tally.finish("probe z = " + to_string(z));
}

CheckReport check_feasibility_decay(const RunTrace &trace, const std::vector<ConvexSet> &sets,
                                    double threshold, const DistanceOracle &exact_dC) {
    CheckReport report;
    report.name = "feasibility-decay";
    const std::size_t n = trace.iterations() + 1;
    const std::size_t t = tenth(n);

    auto evaluate_series = [&](auto &&measure, const char *label) {
        double first_min = std::numeric_limits<double>::infinity();
        double final_max = 0.0;
        for (std::size_t k = 0; k < t; ++k) first_min = std::min(first_min, measure(iterate(trace, k)));
        for (std::size_t k = n - t; k < n; ++k) {
            const double r = measure(iterate(trace, k));
            final_max = std::max(final_max, r);
            ++report.examined;
            if (r > threshold) ++report.violations;
        }
        const bool decayed = final_max < first_min || final_max <= 1e-12;
        if (!decayed) ++report.violations;
        report.worst_margin = std::min(report.worst_margin, threshold - final_max);
        if (!report.note.empty()) report.note += "; ";
        report.note += std::string(label) + ": final-tenth max " + std::to_string(final_max) +
                       ", first-tenth min " + std::to_string(first_min);
    };

    evaluate_series([&](const Vector &x) { return max_residual(sets, x); }, "surrogate max_i d_Ci");
    if (exact_dC) evaluate_series(exact_dC, "exact d_C");
    report.status = report.violations == 0 ? CheckStatus::pass : CheckStatus::fail;
    return report;
}

CheckReport check_ppa_lemma(const RunTrace &trace, const std::vector<ConvexSet> &sets,
                            const WeightVector &beta, const Vector &z, double L,
                            const DistanceOracle &exact_dC, const Tolerance &tol) {
    if (trace.method != Method::PPA && trace.method != Method::RPPA) {
        throw Error("ppa-lemma applies to PPA and RPPA traces, not " + to_string(trace.method));
    }
    require_inner(trace, "ppa-lemma");
    if (beta.size() != sets.size()) throw Error("ppa-lemma: weight count differs from set count");
    require_member(sets, z);

    MarginTally tally("ppa-lemma", tol);
    for (std::size_t k = 0; k < trace.iterations(); ++k) {
        const auto &rec = trace.records[k];
        const Vector &xk = rec.x;
        const Vector &xkN = rec.inner.back();
        const Vector &next = trace.next_iterate(k);
        const auto targets = step_targets(trace, sets, k);

        double weighted_at_end = 0.0;
        double weighted_at_start = 0.0;
        for (std::size_t i = 0; i < targets.size(); ++i) {
            const double d_end = target_distance(targets[i], xkN);
            const double d_start = target_distance(targets[i], xk);
            weighted_at_end += beta[i] * d_end * d_end;
            weighted_at_start += beta[i] * d_start * d_start;
        }

        tally.add(distance_between(xkN, xk), L * rec.lambda);
        tally.add(squared_distance(next, z), squared_distance(xkN, z) - weighted_at_end);
        if (exact_dC) {
            const double dc_next = exact_dC(next);
            const double dc_end = exact_dC(xkN);
            const double dc_start = exact_dC(xk);
            tally.add(dc_next * dc_next, dc_end * dc_end - weighted_at_end);
            tally.add(dc_next * dc_next, dc_start * dc_start - weighted_at_start +
                                             2.0 * rec.lambda * L * (2.0 * dc_start + rec.lambda * L));
        }
    }
    return tally.finish(exact_dC ? "items i-iv" : "items i-ii (d_C unavailable)");
}

CheckReport check_spa_lemma(const RunTrace &trace, const std::vector<ConvexSet> &sets,
                            const Vector &z, const Tolerance &tol) {
    if (trace.method != Method::SPA && trace.method != Method::RSPA) {
        throw Error("spa-lemma applies to SPA and RSPA traces, not " + to_string(trace.method));
    }
    require_inner(trace, "spa-lemma");
    require_member(sets, z);

    MarginTally tally("spa-lemma", tol);
    for (std::size_t k = 0; k < trace.iterations(); ++k) {
        const Vector &xkN = trace.records[k].inner.back();
        const auto targets = step_targets(trace, sets, k);
        double chain = 0.0;
        Vector y = xkN;
        for (const auto &t : targets) {
            const double d = target_distance(t, y);
            chain += d * d;
            y = target_project(t, y);
        }
        tally.add(squared_distance(trace.next_iterate(k), z), squared_distance(xkN, z) - chain);
    }
    return tally.finish();
}

CheckReport check_inner_drift(const RunTrace &trace, double L, const Tolerance &tol) {
    if (is_pocs(trace.method)) throw Error("inner-drift does not apply to feasibility-only runs");
    require_inner(trace, "inner-drift");
    MarginTally tally("inner-drift", tol);
    for (const auto &rec : trace.records) {
        tally.add(distance_between(rec.inner.back(), rec.x), L * rec.lambda);
    }
    return tally.finish();
}

CheckReport check_cyclic_window(const RunTrace &trace, const std::vector<ConvexSet> &sets, double L,
                                const Tolerance &tol) {
    if (trace.method != Method::CPA || trace.ordering != Ordering::Kind::cyclic) {
        throw Error("cyclic-window applies to CPA traces with cyclic ordering");
    }
    const std::size_t m = sets.size();
    const std::size_t iters = trace.iterations();
    MarginTally tally("cyclic-window", tol);
    for (std::size_t k = 1; k + m <= iters; ++k) {
        const std::size_t q = cyclic_index(k - 1, m);
        const Vector pq = exact_cyclic_projection(iterate(trace, k), sets, q);
        double lambda_sum = 0.0;
        for (std::size_t t = k; t < k + m; ++t) lambda_sum += trace.records[t].lambda;
        tally.add(distance_between(pq, iterate(trace, k + m)), L * lambda_sum);
    }
    return tally.finish();
}

CheckReport check_constant_step_bound(const RunTrace &trace, double fstar, double L, double slack) {
    if (trace.iterations() == 0) throw Error("constant-step check needs at least one iteration");
    const double lam = trace.records.front().lambda;
    double min_f = trace.terminal.f;
    for (const auto &rec : trace.records) {
        if (rec.lambda != lam) throw Error("constant-step check needs a constant step-size schedule");
        min_f = std::min(min_f, rec.f);
    }
    const double bound = fstar + 0.5 * lam * L * L;
    CheckReport report;
    report.name = "constant-step";
    report.examined = trace.iterations() + 1;
    report.worst_margin = bound - min_f;
    report.violations = min_f <= bound + slack ? 0 : 1;
    report.status = report.violations == 0 ? CheckStatus::pass : CheckStatus::fail;
    report.note = "min f " + std::to_string(min_f) + " vs bound " + std::to_string(bound);
    return report;
}

CheckReport check_asymptotic_regularity(const RunTrace &trace, double L) {
    if (is_pocs(trace.method)) throw Error("asymptotic-regularity needs a step-size schedule");
    CheckReport report;
    report.name = "asymptotic-regularity";
    const std::size_t n = trace.iterations();
    if (n == 0) return report;
    for (std::size_t k = n - tenth(n); k < n; ++k) {
        const auto &rec = trace.records[k];
        const double bound = 10.0 * rec.lambda * (L + 1.0);
        const double step = distance_between(rec.x, iterate(trace, k + 1));
        ++report.examined;
        report.worst_margin = std::min(report.worst_margin, bound - step);
        if (!(step < bound)) ++report.violations;
    }
    report.status = report.violations == 0 ? CheckStatus::pass : CheckStatus::fail;
    return report;
}

// ---------------------------------------------------------------------------
// Counterexample sequences

namespace {

// Extended precision: near k = 1e7 the slack in alpha_{k+1} - alpha_k <= 1/k is about
// 1/(2k^2) = 5e-15, comparable to double rounding of |sin log k|.
long double alpha_at(std::uint64_t k, long double frequency) {
    return std::fabs(std::sin(frequency * std::log(static_cast<long double>(k))));
}

} // namespace

std::vector<CounterexampleRow> counterexample_sequences(std::uint64_t K,
                                                        const CounterexampleParams &params) {
    if (K < 2) throw Error("counterexample needs K >= 2");
    std::vector<CounterexampleRow> rows;
    rows.reserve(static_cast<std::size_t>(K));
    for (std::uint64_t k = 1; k <= K; ++k) {
        const double kd = static_cast<double>(k);
        rows.push_back({k, static_cast<double>(alpha_at(k, params.frequency)),
                        std::pow(kd, -params.exponent),
                        std::pow(kd, -params.exponent) - std::pow(kd, params.exponent - 1.0)});
    }
    return rows;
}

CounterexampleSummary counterexample_summary(std::uint64_t K, const CounterexampleParams &params) {
    if (K < 2) throw Error("counterexample needs K >= 2");
    CounterexampleSummary s;
    s.K = K;
    const long double e = params.exponent;
    const long double freq = params.frequency;
    const std::uint64_t tail_start = K - (K + 9) / 10 + 1;
    const auto upper_start = static_cast<std::uint64_t>(std::ceil(std::sqrt(static_cast<long double>(K))));

    long double alpha = alpha_at(1, freq);
    long double beta_sq_sum = 0.0L;
    long double beta_sq_tail = 0.0L;
    for (std::uint64_t k = 1; k <= K; ++k) {
        const long double kl = static_cast<long double>(k);
        const long double beta = std::pow(kl, -e);
        const long double mu = beta - std::pow(kl, e - 1.0L);
        beta_sq_sum += beta * beta;
        if (k >= tail_start) {
            beta_sq_tail += beta * beta;
            s.mu_final_max = std::max(s.mu_final_max, static_cast<double>(std::fabs(mu)));
        }
        if (k >= upper_start) {
            s.alpha_max_upper = std::max(s.alpha_max_upper, static_cast<double>(alpha));
            s.alpha_min_upper = std::min(s.alpha_min_upper, static_cast<double>(alpha));
        }
        if (k < K) {
            const long double next = alpha_at(k + 1, freq);
            const long double margin = 1.0L / kl - (next - alpha);
            s.worst_recurrence_margin = std::min(s.worst_recurrence_margin, static_cast<double>(margin));
            if (margin < 0.0L) ++s.recurrence_violations;
            if (next > alpha - 2.0L * beta * mu + beta * beta) ++s.display_violations;
            alpha = next;
        }
    }
    s.beta_sq_sum = static_cast<double>(beta_sq_sum);
    s.beta_sq_tail = static_cast<double>(beta_sq_tail);
    return s;
}

std::vector<CheckReport> counterexample_checks(const CounterexampleSummary &s,
                                               const CounterexampleThresholds &thr) {
    std::vector<CheckReport> out;
    auto make = [&](std::string name, std::size_t examined, double margin, bool ok, std::string note) {
        CheckReport r;
        r.name = std::move(name);
        r.examined = examined;
        r.worst_margin = margin;
        r.violations = ok ? 0 : 1;
        r.status = ok ? CheckStatus::pass : CheckStatus::fail;
        r.note = std::move(note);
        out.push_back(std::move(r));
    };
    const auto K = static_cast<std::size_t>(s.K);

    CheckReport rec;
    rec.name = "counterexample-recurrence";
    rec.examined = K - 1;
    rec.violations = s.recurrence_violations;
    rec.worst_margin = s.worst_recurrence_margin;
    rec.status = s.recurrence_violations == 0 ? CheckStatus::pass : CheckStatus::fail;
    rec.note = "alpha_{k+1} - alpha_k <= 1/k; the form alpha_{k+1} <= alpha_k - 2 beta_k mu_k + "
               "beta_k^2 uses a factor 2 that the defining relation 1/k = -beta_k mu_k + beta_k^2 "
               "lacks, and has " +
               std::to_string(s.display_violations) + " violations";
    out.push_back(std::move(rec));

    make("counterexample-beta-tail", K / 10, thr.beta_tail - s.beta_sq_tail,
         s.beta_sq_tail < thr.beta_tail,
         "sum of beta_k^2 over the final tenth = " + std::to_string(s.beta_sq_tail) +
             " (total " + std::to_string(s.beta_sq_sum) + ")");
    make("counterexample-mu-decay", K / 10, thr.mu_final - s.mu_final_max, s.mu_final_max < thr.mu_final,
         "max |mu_k| over the final tenth = " + std::to_string(s.mu_final_max));
    const double osc_margin =
        std::min(s.alpha_max_upper - thr.alpha_high, thr.alpha_low - s.alpha_min_upper);
    make("counterexample-oscillation", K, osc_margin,
         s.alpha_max_upper > thr.alpha_high && s.alpha_min_upper < thr.alpha_low,
         "alpha over sqrt(K) <= k <= K ranges in [" + std::to_string(s.alpha_min_upper) + ", " +
             std::to_string(s.alpha_max_upper) + "]");
    return out;
}

RunTrace perturb_iterate(RunTrace trace, std::size_t k, std::size_t coord, double delta) {
    Vector &target = k < trace.records.size() ? trace.records[k].x : trace.terminal.x;
    if (k > trace.records.size()) throw Error("perturb_iterate: index out of range");
    if (coord >= target.size()) throw Error("perturb_iterate: coordinate out of range");
    std::vector<double> c = target.coords();
    c[coord] += delta;
    target = Vector(std::move(c));
    return trace;
}

bool all_pass(const std::vector<CheckReport> &reports) {
    return std::all_of(reports.begin(), reports.end(), [](const auto &r) { return r.pass(); });
}

nlohmann::ordered_json export_report(const std::vector<CheckReport> &reports) {
    nlohmann::ordered_json doc;
    doc["overall_pass"] = all_pass(reports);
    doc["checks"] = nlohmann::ordered_json::array();
    for (const auto &r : reports) {
        nlohmann::ordered_json item;
        item["name"] = r.name;
        item["status"] = to_string(r.status);
        item["examined"] = r.examined;
        item["violations"] = r.violations;
        if (std::isfinite(r.worst_margin)) {
            item["worst_margin"] = r.worst_margin;
        } else {
            item["worst_margin"] = nullptr;
        }
        item["note"] = r.note;
        doc["checks"].push_back(std::move(item));
    }
    return doc;
}

std::vector<CheckReport> parse_report(const nlohmann::ordered_json &doc) {
    std::vector<CheckReport> out;
    for (const auto &item : doc.at("checks")) {
        CheckReport r;
        r.name = item.at("name").get<std::string>();
        const auto status = item.at("status").get<std::string>();
        if (status == "pass") {
            r.status = CheckStatus::pass;
        } else if (status == "fail") {
            r.status = CheckStatus::fail;
        } else if (status == "skipped") {
            r.status = CheckStatus::skipped;
        } else {
            throw Error("report: unknown status '" + status + "'");
        }
        r.examined = item.at("examined").get<std::size_t>();
        r.violations = item.at("violations").get<std::size_t>();
        const auto &margin = item.at("worst_margin");
        r.worst_margin = margin.is_null() ? std::numeric_limits<double>::infinity() : margin.get<double>();
        r.note = item.at("note").get<std::string>();
        out.push_back(std::move(r));
    }
    return out;
}

} // namespace projsub
