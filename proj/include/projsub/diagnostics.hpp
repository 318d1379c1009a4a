#pragma once

#include "projsub/core.hpp"
#include "projsub/functions.hpp"
#include "projsub/sets.hpp"
#include "projsub/solver.hpp"

#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace projsub {

enum class CheckStatus { pass, fail, skipped };

std::string to_string(CheckStatus s);

/// Outcome of one monitor. Margins are rhs - lhs of the monitored inequality, so a
/// negative worst margin means a violation.
struct CheckReport {
    std::string name;
    std::size_t examined = 0;
    std::size_t violations = 0;
    double worst_margin = std::numeric_limits<double>::infinity();
    CheckStatus status = CheckStatus::pass;
    std::string note;

    bool pass() const noexcept { return status != CheckStatus::fail; }
    bool operator==(const CheckReport &) const = default;
};

CheckReport skipped_report(std::string name, std::string reason);

/// Default slack for the inequality monitors: 1e-9 absolute, 1e-12 relative.
Tolerance inequality_tolerance();

using DistanceOracle = std::function<double(const Vector &)>;

/// ||x_{k+1} - z||^2 <= ||x_k - z||^2 - 2 lambda_k (f(x_k) - f(z)) + lambda_k^2 L^2 for each k.
/// Throws if z is not in every set.
CheckReport check_key_estimate(const RunTrace &trace, const CompositeObjective &objective,
                               const std::vector<ConvexSet> &sets, const Vector &z, double L,
                               const Tolerance &tol = inequality_tolerance());

/// Max residual over the final tenth of the iterates must be at most `threshold` and below the
/// first-tenth minimum. The residual is max_i d_{C_i}; when `exact_dC` is given, d_C is
/// checked as well.
CheckReport check_feasibility_decay(const RunTrace &trace, const std::vector<ConvexSet> &sets,
                                    double threshold, const DistanceOracle &exact_dC = {});

/// Per-iteration bounds for the parallel method (exact or relaxed):
///   (i)   ||x_{k,N} - x_k|| <= L lambda_k
///   (ii)  ||x_{k+1} - z||^2 <= ||x_{k,N} - z||^2 - sum_i beta_i d_i^2(x_{k,N})
///   (iii) d_C^2(x_{k+1}) <= d_C^2(x_{k,N}) - sum_i beta_i d_i^2(x_{k,N})
///   (iv)  d_C^2(x_{k+1}) <= d_C^2(x_k) - sum_i beta_i d_i^2(x_k) + 2 lambda_k L (2 d_C(x_k) + lambda_k L)
/// (iii) and (iv) need `exact_dC`. For RPPA, d_i is the distance to the cutter built at x_k.
CheckReport check_ppa_lemma(const RunTrace &trace, const std::vector<ConvexSet> &sets,
                            const WeightVector &beta, const Vector &z, double L,
                            const DistanceOracle &exact_dC = {},
                            const Tolerance &tol = inequality_tolerance());

/// ||x_{k+1} - z||^2 <= ||x_{k,N} - z||^2 - sum_i d_i^2(P_{i-1} ... P_1 x_{k,N}) for SPA/RSPA.
CheckReport check_spa_lemma(const RunTrace &trace, const std::vector<ConvexSet> &sets,
                            const Vector &z, const Tolerance &tol = inequality_tolerance());

/// ||x_{k,N} - x_k|| <= L lambda_k on every iteration.
CheckReport check_inner_drift(const RunTrace &trace, double L,
                              const Tolerance &tol = inequality_tolerance());

/// ||P_q(x_k) - x_{k+M}|| <= L sum_{t=k}^{k+M-1} lambda_t for cyclic runs, where q is the set
/// whose projection produced x_k.
CheckReport check_cyclic_window(const RunTrace &trace, const std::vector<ConvexSet> &sets, double L,
                                const Tolerance &tol = inequality_tolerance());

/// min_k f(x_k) <= fstar + lambda L^2 / 2 + slack for a constant step lambda.
/// Throws if the recorded step sizes are not constant.
CheckReport check_constant_step_bound(const RunTrace &trace, double fstar, double L,
                                      double slack = 1e-9);

/// ||x_{k+1} - x_k|| < 10 lambda_k (L + 1) over the final tenth of the run.
CheckReport check_asymptotic_regularity(const RunTrace &trace, double L);

/// Sequences alpha_k = |sin(frequency log k)|, beta_k = k^{-exponent}, and mu_k solving
/// 1/k = -beta_k mu_k + beta_k^2.
struct CounterexampleParams {
    double exponent = 2.0 / 3.0;
    double frequency = 1.0;
};

struct CounterexampleRow {
    std::uint64_t k;
    double alpha;
    double beta;
    double mu;
};

struct CounterexampleThresholds {
    double beta_tail = 1e-3;
    double mu_final = 5e-3;
    double alpha_high = 0.99;
    double alpha_low = 0.01;
};

struct CounterexampleSummary {
    std::uint64_t K = 0;
    /// Count of k < K with alpha_{k+1} - alpha_k > 1/k.
    std::size_t recurrence_violations = 0;
    double worst_recurrence_margin = std::numeric_limits<double>::infinity();
    /// Count of k < K with alpha_{k+1} > alpha_k - 2 beta_k mu_k + beta_k^2.
    std::size_t display_violations = 0;
    double beta_sq_sum = 0.0;
    /// sum of beta_k^2 over the final tenth of the range.
    double beta_sq_tail = 0.0;
    /// max |mu_k| over the final tenth.
    double mu_final_max = 0.0;
    /// Extremes of alpha over sqrt(K) <= k <= K (the upper half on a log scale).
    double alpha_max_upper = 0.0;
    double alpha_min_upper = 1.0;
};

std::vector<CounterexampleRow> counterexample_sequences(std::uint64_t K,
                                                        const CounterexampleParams &params = {});
CounterexampleSummary counterexample_summary(std::uint64_t K, const CounterexampleParams &params = {});
std::vector<CheckReport> counterexample_checks(const CounterexampleSummary &s,
                                               const CounterexampleThresholds &thresholds = {});

/// Moves x_k (or the terminal iterate when k == iterations()) by `delta` in coordinate `coord`.
RunTrace perturb_iterate(RunTrace trace, std::size_t k, std::size_t coord, double delta);

bool all_pass(const std::vector<CheckReport> &reports);
nlohmann::ordered_json export_report(const std::vector<CheckReport> &reports);
std::vector<CheckReport> parse_report(const nlohmann::ordered_json &doc);

} // namespace projsub
