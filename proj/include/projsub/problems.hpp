#pragma once

#include "projsub/core.hpp"
#include "projsub/functions.hpp"
#include "projsub/sets.hpp"
#include "projsub/solver.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace projsub {

/// Known optimum (x*, f*) with a note on where it came from.
struct Reference {
    Vector xstar;
    double fstar;
    std::string provenance;
};

/// min f(x) over the intersection of `sets`.
struct Problem {
    std::string name;
    CompositeObjective objective;
    std::vector<ConvexSet> sets;
    /// A certified member of every set, used as the probe point of the inequality monitors.
    /// Absent for infeasible instances.
    std::optional<Vector> feasible_point;
    std::optional<Reference> reference;
    /// Exact projection onto the whole intersection, for problems where it is computable.
    std::function<Vector(const Vector &)> intersection_projection;
    /// Suggested starting point.
    Vector start;

    std::size_t dimension() const { return start.size(); }
    /// d_C(x) when the intersection projection is known.
    std::optional<double> intersection_distance(const Vector &x) const;
    /// max_i residual(C_i, x)
    double max_residual(const Vector &x) const;
};

/// Throws if the feasible point or a closed-form reference is not in every set.
void validate_problem(const Problem &p, const Tolerance &tol = {});

/// Exact projection onto B ∩ H. The ball must meet the half-space.
Vector project_ball_halfspace(const Ball &ball, const Halfspace &h, const Vector &x);

Problem corner_problem();
Problem shifted_quadratic_problem();
Problem abs_regression_problem(std::uint64_t seed);
Problem relaxed_ball_problem();
Problem infeasible_pair_problem();
/// Two half-spaces meeting in a narrow wedge; a feasibility-only instance.
Problem two_halfspaces_problem();
/// The hyperplanes x_1 = 0 and x_1 = 2 (disjoint).
Problem parallel_hyperplanes_problem();

/// Same objective and feasible set, with balls and half-spaces given as sublevel sets.
Problem relaxed_form(const Problem &p);

/// Catalog lookup. Accepts "abs-regression:<seed>"; plain "abs-regression" uses seed 7.
Problem builtin_problem(const std::string &name);
std::vector<std::string> builtin_problem_names();

struct GridOracle {
    Vector lower;
    Vector upper;
    double h;
    /// Membership slack for grid points; defaults to h.
    std::optional<double> membership_tol;
};

struct GridResult {
    Vector xhat;
    double fhat;
    /// fhat >= f* - gap_bound, gap_bound = Lip(f) h sqrt(n).
    double gap_bound;
    std::size_t points_scanned;
    std::size_t feasible_points;
};

/// Exhaustive scan of the grid lower + h * index inside the box; returns the feasible grid
/// point of least objective value, ties going to the lowest lexicographic index.
GridResult grid_reference(const Problem &p, const GridOracle &g);

/// Solves the problem with the given configuration.
RunTrace solve(const Problem &p, const SolverConfig &config, const Vector &x0);

} // namespace projsub
