#include "projsub/diagnostics.hpp"
#include "projsub/problems.hpp"

#include <doctest.h>

#include <cmath>

using namespace projsub;

namespace {

RunTrace run(const Problem &p, Method m, StepSchedule s, std::uint64_t iters) {
    SolverConfig c(m, std::move(s));
    c.max_iters = iters;
    c.record_inner = !is_pocs(m);
    if (is_parallel(m)) c.weights = WeightVector::uniform(p.sets.size());
    return solve(p, c, p.start);
}

RunTrace corner_run(Method m, std::uint64_t iters = 1000) {
    return run(corner_problem(), m, StepSchedule::power(1.0, 1.0), iters);
}

DistanceOracle exact(const Problem &p) {
    return [p](const Vector &x) { return *p.intersection_distance(x); };
}

double L_of(const Problem &p) { return p.objective.lipschitz_bound(); }

} // namespace

TEST_SUITE("diagnostics") {

TEST_CASE("key estimate passes on clean runs and flags a displaced iterate") {
    for (const char *name : {"corner", "shifted-quadratic", "relaxed-ball"}) {
        const Problem p = builtin_problem(name);
        for (Method m : {Method::SPA, Method::CPA, Method::PPA, Method::RSPA, Method::RPPA}) {
            if (!is_relaxed(m) && !p.sets[1].has_exact_projection()) continue;
            INFO(name, " ", to_string(m));
            const RunTrace t = run(p, m, StepSchedule::power(1.0, 1.0), 2000);
            const CheckReport r = check_key_estimate(t, p.objective, p.sets, *p.feasible_point, L_of(p));
            CHECK(r.status == CheckStatus::pass);
            CHECK(r.examined == 2000);
            CHECK(r.violations == 0);
            const CheckReport bad = check_key_estimate(perturb_iterate(t, 700, 0, 10.0), p.objective, p.sets,
                                                       *p.feasible_point, L_of(p));
            CHECK(bad.status == CheckStatus::fail);
            CHECK(bad.violations >= 1);
            CHECK(bad.worst_margin < 0);
        }
    }
}

TEST_CASE("key estimate refuses an infeasible probe") {
    const Problem p = corner_problem();
    CHECK_THROWS_AS(check_key_estimate(corner_run(Method::SPA, 10), p.objective, p.sets, Vector{5, 5}, 2.0),
                    Error);
}

TEST_CASE("feasibility decay") {
    const Problem p = corner_problem();
    const RunTrace t = corner_run(Method::PPA);
    CHECK(check_feasibility_decay(t, p.sets, 1e-2, exact(p)).status == CheckStatus::pass);
    CHECK(check_feasibility_decay(t, p.sets, 1e-2).status == CheckStatus::pass);
    const RunTrace bad = perturb_iterate(t, t.iterations(), 0, 10.0);
    CHECK(check_feasibility_decay(bad, p.sets, 1e-2, exact(p)).status == CheckStatus::fail);
    // A trace that never gets closer fails even with a loose threshold.
    const RunTrace stuck = run(infeasible_pair_problem(), Method::SPA, StepSchedule::power(1.0, 1.0), 200);
    CHECK(check_feasibility_decay(stuck, infeasible_pair_problem().sets, 1e-2).status == CheckStatus::fail);
}

TEST_CASE("ppa lemma") {
    for (const char *name : {"corner", "shifted-quadratic", "relaxed-ball"}) {
        const Problem p = builtin_problem(name);
        const auto dC = p.intersection_projection ? exact(p) : DistanceOracle{};
        for (Method m : {Method::PPA, Method::RPPA}) {
            if (m == Method::PPA && !p.sets[1].has_exact_projection()) continue;
            INFO(name, " ", to_string(m));
            const RunTrace t = run(p, m, StepSchedule::power(1.0, 1.0), 2000);
            const auto beta = WeightVector::uniform(p.sets.size());
            const CheckReport r = check_ppa_lemma(t, p.sets, beta, *p.feasible_point, L_of(p), dC);
            CHECK(r.status == CheckStatus::pass);
            CHECK(r.examined > 0);
            const CheckReport bad =
                check_ppa_lemma(perturb_iterate(t, 400, 1, 10.0), p.sets, beta, *p.feasible_point, L_of(p), dC);
            CHECK(bad.status == CheckStatus::fail);
        }
    }
}

TEST_CASE("ppa lemma with non-uniform weights") {
    const Problem p = corner_problem();
    SolverConfig c(Method::PPA, StepSchedule::power(0.5, 0.75));
    c.max_iters = 1000;
    c.record_inner = true;
    c.weights = WeightVector({0.2, 0.8});
    const RunTrace t = solve(p, c, Vector{3, -2});
    CHECK(check_ppa_lemma(t, p.sets, *c.weights, *p.feasible_point, 2.0, exact(p)).pass());
}

TEST_CASE("spa lemma") {
    for (const char *name : {"corner", "shifted-quadratic", "relaxed-ball"}) {
        const Problem p = builtin_problem(name);
        for (Method m : {Method::SPA, Method::RSPA}) {
            if (m == Method::SPA && !p.sets[1].has_exact_projection()) continue;
            INFO(name, " ", to_string(m));
            const RunTrace t = run(p, m, StepSchedule::power(1.0, 1.0), 2000);
            CHECK(check_spa_lemma(t, p.sets, *p.feasible_point).status == CheckStatus::pass);
            CHECK(check_spa_lemma(perturb_iterate(t, 400, 0, 10.0), p.sets, *p.feasible_point).status ==
                  CheckStatus::fail);
        }
    }
}

TEST_CASE("method mismatch is an error") {
    const Problem p = corner_problem();
    const RunTrace spa = corner_run(Method::SPA, 20);
    const RunTrace ppa = corner_run(Method::PPA, 20);
    CHECK_THROWS_AS(check_ppa_lemma(spa, p.sets, WeightVector::uniform(2), Vector{0, 0}, 2.0), Error);
    CHECK_THROWS_AS(check_spa_lemma(ppa, p.sets, Vector{0, 0}), Error);
    CHECK_THROWS_AS(check_cyclic_window(spa, p.sets, 2.0), Error);
    const RunTrace pocs = run(two_halfspaces_problem(), Method::POCS_sequential, StepSchedule::constant(1), 10);
    CHECK_THROWS_AS(check_inner_drift(pocs, 2.0), Error);
    CHECK_THROWS_AS(check_asymptotic_regularity(pocs, 2.0), Error);
}

TEST_CASE("inner checks need inner iterates") {
    const Problem p = corner_problem();
    SolverConfig c(Method::SPA, StepSchedule::power(1, 1));
    c.max_iters = 20;
    const RunTrace t = solve(p, c, p.start);
    CHECK_THROWS_AS(check_inner_drift(t, 2.0), Error);
    CHECK_THROWS_AS(check_spa_lemma(t, p.sets, Vector{0, 0}), Error);
}

TEST_CASE("inner drift") {
    for (Method m : {Method::SPA, Method::CPA, Method::PPA, Method::RSPA, Method::RPPA}) {
        INFO(to_string(m));
        const RunTrace t = corner_run(m);
        CHECK(check_inner_drift(t, 2.0).status == CheckStatus::pass);
        CHECK(check_inner_drift(perturb_iterate(t, 10, 0, 10.0), 2.0).status == CheckStatus::fail);
        // An understated Lipschitz constant is caught.
        CHECK(check_inner_drift(t, 0.5).status == CheckStatus::fail);
    }
}

TEST_CASE("cyclic window") {
    for (const char *name : {"corner", "shifted-quadratic"}) {
        const Problem p = builtin_problem(name);
        const RunTrace t = run(p, Method::CPA, StepSchedule::power(1.0, 1.0), 2000);
        const CheckReport r = check_cyclic_window(t, p.sets, L_of(p));
        CHECK(r.status == CheckStatus::pass);
        CHECK(r.examined == 2000 - p.sets.size());
        CHECK(check_cyclic_window(perturb_iterate(t, 900, 0, 10.0), p.sets, L_of(p)).status ==
              CheckStatus::fail);
    }
}

TEST_CASE("constant step bound") {
    const Problem p = corner_problem();
    for (Method m : {Method::SPA, Method::CPA, Method::PPA}) {
        for (double lam : {0.05, 1e-4}) {
            INFO(to_string(m), " lambda=", lam);
            SolverConfig c(m, StepSchedule::constant(lam));
            c.max_iters = 20000;
            c.override_schedule_guard = true;
            if (is_parallel(m)) c.weights = WeightVector::uniform(2);
            const RunTrace t = solve(p, c, p.start);
            CHECK(check_constant_step_bound(t, 0.0, 2.0).status == CheckStatus::pass);
            CHECK(check_constant_step_bound(t, -1.0, 2.0).status == CheckStatus::fail);
        }
    }
    CHECK_THROWS_AS(check_constant_step_bound(corner_run(Method::SPA, 10), 0.0, 2.0), Error);
}

TEST_CASE("asymptotic regularity") {
    const RunTrace t = corner_run(Method::PPA);
    const CheckReport r = check_asymptotic_regularity(t, 2.0);
    CHECK(r.status == CheckStatus::pass);
    CHECK(r.examined == 100);
    CHECK(check_asymptotic_regularity(perturb_iterate(t, 950, 1, 10.0), 2.0).status == CheckStatus::fail);
}

TEST_CASE("single iteration traces") {
    const Problem p = corner_problem();
    const RunTrace t = corner_run(Method::PPA, 1);
    CHECK(t.iterations() == 1);
    CHECK(check_key_estimate(t, p.objective, p.sets, Vector{0, 0}, 2.0).examined == 1);
    CHECK(check_inner_drift(t, 2.0).pass());
    CHECK(check_asymptotic_regularity(t, 2.0).examined == 1);
    CHECK(check_ppa_lemma(t, p.sets, WeightVector::uniform(2), Vector{0, 0}, 2.0, exact(p)).pass());
    CHECK_NOTHROW(check_feasibility_decay(t, p.sets, 1e-2));
    CHECK(check_cyclic_window(corner_run(Method::CPA, 1), p.sets, 2.0).examined == 0);
}

TEST_CASE("checks do not modify their input") {
    const Problem p = corner_problem();
    const RunTrace t = corner_run(Method::PPA, 200);
    const RunTrace copy = t;
    const CheckReport a = check_ppa_lemma(t, p.sets, WeightVector::uniform(2), Vector{0, 0}, 2.0, exact(p));
    const CheckReport b = check_ppa_lemma(t, p.sets, WeightVector::uniform(2), Vector{0, 0}, 2.0, exact(p));
    CHECK(a == b);
    CHECK(t.terminal.x == copy.terminal.x);
    for (std::size_t k = 0; k < t.iterations(); ++k) CHECK(t.records[k].x == copy.records[k].x);
}

TEST_CASE("perturb_iterate") {
    const RunTrace t = corner_run(Method::SPA, 5);
    const RunTrace moved = perturb_iterate(t, 2, 1, 0.5);
    CHECK(moved.records[2].x[1] == t.records[2].x[1] + 0.5);
    CHECK(moved.records[2].x[0] == t.records[2].x[0]);
    CHECK(perturb_iterate(t, 5, 0, 1.0).terminal.x[0] == t.terminal.x[0] + 1.0);
    CHECK_THROWS_AS(perturb_iterate(t, 6, 0, 1.0), Error);
    CHECK_THROWS_AS(perturb_iterate(t, 0, 2, 1.0), Error);
}

TEST_CASE("counterexample sequences") {
    const auto rows = counterexample_sequences(1000);
    REQUIRE(rows.size() == 1000);
    CHECK(rows[0].k == 1);
    CHECK(rows[0].alpha == 0.0);
    CHECK(rows[0].beta == 1.0);
    for (const auto &r : rows) {
        const double k = static_cast<double>(r.k);
        CHECK(r.alpha == doctest::Approx(std::abs(std::sin(std::log(k)))).epsilon(1e-14));
        CHECK(r.beta == doctest::Approx(std::pow(k, -2.0 / 3.0)).epsilon(1e-14));
        // 1/k = -beta mu + beta^2
        CHECK(-r.beta * r.mu + r.beta * r.beta == doctest::Approx(1.0 / k).epsilon(1e-12));
    }
    CHECK_THROWS_AS(counterexample_summary(1), Error);
}

TEST_CASE("counterexample summary at 1e5") {
    const auto s = counterexample_summary(100000);
    CHECK(s.K == 100000);
    CHECK(s.recurrence_violations == 0);
    CHECK(s.display_violations == 0);
    CHECK(s.worst_recurrence_margin >= 0.0);
    CHECK(s.alpha_max_upper > 0.99);
    CHECK(s.alpha_min_upper < 0.01);
    // sum_{k > 0.9K} k^{-4/3} and max |k^{-2/3} - k^{-1/3}| over the same range
    double tail = 0.0;
    for (std::uint64_t k = 90001; k <= 100000; ++k) tail += std::pow(double(k), -4.0 / 3.0);
    CHECK(s.beta_sq_tail == doctest::Approx(tail).epsilon(1e-9));
    CHECK(s.mu_final_max == doctest::Approx(std::pow(90001.0, -1.0 / 3.0) - std::pow(90001.0, -2.0 / 3.0)).epsilon(1e-6));
}

TEST_CASE("counterexample mutations are caught") {
    // Thresholds scaled to K = 1e6: the defaults are sized for K = 1e7.
    const std::uint64_t K = 1'000'000;
    CounterexampleThresholds th;
    th.beta_tail = 2e-3;
    th.mu_final = 1.2e-2;
    auto failed = [&](CounterexampleParams p, const std::string &check) {
        for (const auto &r : counterexample_checks(counterexample_summary(K, p), th)) {
            if (r.name == check) return r.status == CheckStatus::fail;
        }
        FAIL("no check named ", check);
        return false;
    };
    for (const auto &r : counterexample_checks(counterexample_summary(K), th)) CHECK(r.pass());
    CHECK(failed({2.0 / 3.0, 2.0}, "counterexample-recurrence"));
    CHECK(failed({0.4, 1.0}, "counterexample-beta-tail"));
    CHECK(failed({0.9, 1.0}, "counterexample-mu-decay"));
    CHECK(failed({2.0 / 3.0, 0.01}, "counterexample-oscillation"));
}

TEST_CASE("report export round trip") {
    std::vector<CheckReport> reports{
        {"a", 10, 0, 0.25, CheckStatus::pass, ""},
        {"b", 7, 2, -1.5e-3, CheckStatus::fail, "something"},
        skipped_report("c", "not applicable"),
    };
    const auto doc = export_report(reports);
    CHECK(doc["overall_pass"] == false);
    CHECK(doc["checks"][2]["worst_margin"].is_null());
    CHECK(parse_report(doc) == reports);
    CHECK(parse_report(nlohmann::ordered_json::parse(doc.dump())) == reports);

    const auto empty = export_report({});
    CHECK(empty["overall_pass"] == true);
    CHECK(parse_report(empty).empty());
    CHECK(all_pass({}));
    CHECK(all_pass({skipped_report("x", "y")}));
}

}
