#include "projsub/problems.hpp"

#include <charconv>
#include <cmath>
#include <limits>

namespace projsub {

std::optional<double> Problem::intersection_distance(const Vector &x) const {
    if (!intersection_projection) return std::nullopt;
    return distance_between(x, intersection_projection(x));
}

double Problem::max_residual(const Vector &x) const {
    double r = 0.0;
    for (const auto &s : sets) r = std::max(r, residual(s, x));
    return r;
}

void validate_problem(const Problem &p, const Tolerance &tol) {
    if (p.sets.empty()) throw Error(p.name + ": no constraint sets");
    if (p.objective.dimension() != p.dimension()) throw DimensionMismatch(p.name + ": objective dimension");
    for (const auto &s : p.sets) {
        if (s.dimension() != p.dimension()) throw DimensionMismatch(p.name + ": set dimension");
    }
    if (p.feasible_point) {
        for (const auto &s : p.sets) {
            if (!contains(s, *p.feasible_point, tol)) {
                throw Error(p.name + ": feasible point " + to_string(*p.feasible_point) +
                            " is not in a " + s.kind() + " set");
            }
        }
    }
    if (p.reference && p.reference->provenance == "closed-form") {
        for (const auto &s : p.sets) {
            if (!contains(s, p.reference->xstar, tol)) {
                throw Error(p.name + ": reference point is infeasible");
            }
        }
    }
}

Vector project_ball_halfspace(const Ball &ball, const Halfspace &h, const Vector &x) {
    Vector pb = project(ball, x);
    if (dot(h.a, pb) <= h.b) return pb;
    Vector ph = project(h, x);
    if (distance_between(ph, ball.center) <= ball.radius) return ph;

    // Both constraints active: nearest point of the (n-2)-sphere where the boundary
    // hyperplane cuts the ball.
    const double a2 = squared_norm(h.a);
    const Vector p = axpy(-(dot(h.a, x) - h.b) / a2, h.a, x);
    const double offset = (dot(h.a, ball.center) - h.b) / std::sqrt(a2);
    const double rho2 = ball.radius * ball.radius - offset * offset;
    if (rho2 < 0.0) throw Error("ball and half-space do not intersect");
    const Vector c0 = axpy(-(dot(h.a, ball.center) - h.b) / a2, h.a, ball.center);
    Vector dir = p - c0;
    double len = norm(dir);
    if (len == 0.0) {
        // Every point of the sphere is nearest; pick one orthogonal to the normal.
        for (std::size_t i = 0; i < x.size() && len == 0.0; ++i) {
            std::vector<double> e(x.size(), 0.0);
            e[i] = 1.0;
            dir = axpy(-dot(h.a, Vector(e)) / a2, h.a, Vector(e));
            len = norm(dir);
        }
    }
    return axpy(std::sqrt(rho2) / len, dir, c0);
}

namespace {

Problem ball_halfspace_problem(std::string name, CompositeObjective objective, Ball ball,
                               Halfspace h, bool halfspace_first) {
    auto projection = [ball, h](const Vector &x) { return project_ball_halfspace(ball, h, x); };
    std::vector<ConvexSet> sets;
    if (halfspace_first) {
        sets = {ConvexSet(h), ConvexSet(ball)};
    } else {
        sets = {ConvexSet(ball), ConvexSet(h)};
    }
    return Problem{std::move(name), std::move(objective), std::move(sets), Vector{0.0, 0.0},
                   std::nullopt, projection, Vector{5.0, 5.0}};
}

} // namespace

Problem corner_problem() {
    CompositeObjective f({AbsDeviation{Vector{1.0, 0.0}, 0.0}, AbsDeviation{Vector{0.0, 1.0}, 0.0}});
    Problem p = ball_halfspace_problem("corner", std::move(f), Ball(Vector{0.0, 0.0}, 1.0),
                                       Halfspace(Vector{1.0, 1.0}, 1.0), true);
    p.reference = Reference{Vector{0.0, 0.0}, 0.0, "closed-form"};
    return p;
}

Problem shifted_quadratic_problem() {
    CompositeObjective f({QuadraticDistance(Vector{2.0, 0.0}, 10.0)});
    Problem p = ball_halfspace_problem("shifted-quadratic", std::move(f), Ball(Vector{0.0, 0.0}, 1.0),
                                       Halfspace(Vector{1.0, 0.0}, 0.0), true);
    p.reference = Reference{Vector{0.0, 0.0}, 4.0, "closed-form"};
    return p;
}

Problem relaxed_ball_problem() {
    Problem p = shifted_quadratic_problem();
    p.name = "relaxed-ball";
    p.sets[1] = SublevelSet{QuadraticBallConstraint{Vector{0.0, 0.0}, 1.0}};
    return p;
}

Problem abs_regression_problem(std::uint64_t seed) {
    Rng rng(seed);
    const Vector truth = rng.uniform_vector(2, -0.5, 0.5);
    std::vector<ComponentFunction> parts;
    for (int j = 0; j < 4; ++j) {
        Vector a = rng.uniform_vector(2, -1.0, 1.0);
        const double b = dot(a, truth) + rng.uniform(-0.25, 0.25);
        parts.emplace_back(AbsDeviation{std::move(a), b});
    }
    Problem p{"abs-regression:" + std::to_string(seed),
              CompositeObjective(std::move(parts)),
              {ConvexSet(Box(Vector{-1.0, -1.0}, Vector{1.0, 1.0})),
               ConvexSet(Ball(Vector{0.0, 0.0}, 1.2))},
              Vector{0.0, 0.0},
              std::nullopt,
              {},
              Vector{1.0, 1.0}};
    const GridResult g = grid_reference(p, GridOracle{Vector{-1.0, -1.0}, Vector{1.0, 1.0}, 0.01, {}});
    p.reference = Reference{g.xhat, g.fhat, "grid(h=0.01)"};
    return p;
}

Problem infeasible_pair_problem() {
    CompositeObjective f({L1Norm{2}});
    return Problem{"infeasible-pair",
                   std::move(f),
                   {ConvexSet(Ball(Vector{-2.0, 0.0}, 1.0)), ConvexSet(Ball(Vector{2.0, 0.0}, 1.0))},
                   std::nullopt,
                   std::nullopt,
                   {},
                   Vector{0.0, 3.0}};
}

Problem two_halfspaces_problem() {
    CompositeObjective f({AffineFunction{Vector{0.0, 0.0}, 0.0}});
    const Halfspace h1(Vector{0.2, 1.0}, 0.0);
    const Halfspace h2(Vector{0.2, -1.0}, 0.0);
    return Problem{"two-halfspaces",
                   std::move(f),
                   {ConvexSet(h1), ConvexSet(h2)},
                   Vector{-1.0, 0.0},
                   std::nullopt,
                   {},
                   Vector{5.0, 0.5}};
}

Problem parallel_hyperplanes_problem() {
    CompositeObjective f({AffineFunction{Vector{0.0, 0.0}, 0.0}});
    return Problem{"parallel-hyperplanes",
                   std::move(f),
                   {ConvexSet(Hyperplane(Vector{1.0, 0.0}, 0.0)),
                    ConvexSet(Hyperplane(Vector{1.0, 0.0}, 2.0))},
                   std::nullopt,
                   std::nullopt,
                   {},
                   Vector{0.0, 0.0}};
}

Problem relaxed_form(const Problem &p) {
    Problem out = p;
    out.name = p.name + "/relaxed";
    for (auto &s : out.sets) s = as_sublevel(s);
    return out;
}

std::vector<std::string> builtin_problem_names() {
    return {"corner",          "shifted-quadratic", "abs-regression",      "relaxed-ball",
            "infeasible-pair", "two-halfspaces",    "parallel-hyperplanes"};
}

Problem builtin_problem(const std::string &name) {
    if (name == "corner") return corner_problem();
    if (name == "shifted-quadratic") return shifted_quadratic_problem();
    if (name == "relaxed-ball") return relaxed_ball_problem();
    if (name == "infeasible-pair") return infeasible_pair_problem();
    if (name == "two-halfspaces") return two_halfspaces_problem();
    if (name == "parallel-hyperplanes") return parallel_hyperplanes_problem();
    if (name == "abs-regression") return abs_regression_problem(7);
    const std::string prefix = "abs-regression:";
    if (name.rfind(prefix, 0) == 0) {
        std::uint64_t seed = 0;
        const char *first = name.data() + prefix.size();
        const char *last = name.data() + name.size();
        const auto [ptr, ec] = std::from_chars(first, last, seed);
        if (ec != std::errc() || ptr != last || first == last) {
            throw Error("bad abs-regression seed in '" + name + "'");
        }
        return abs_regression_problem(seed);
    }
    const std::string suffix = "/relaxed";
    if (name.size() > suffix.size() && name.compare(name.size() - suffix.size(), suffix.size(), suffix) == 0) {
        return relaxed_form(builtin_problem(name.substr(0, name.size() - suffix.size())));
    }
    throw Error("unknown problem '" + name + "'");
}

GridResult grid_reference(const Problem &p, const GridOracle &g) {
    const std::size_t n = p.dimension();
    if (n > 3) throw Error("grid reference supports at most 3 dimensions");
    require_same_size(g.lower, g.upper, "grid box");
    if (g.lower.size() != n) throw DimensionMismatch("grid box dimension differs from problem");
    if (!(std::isfinite(g.h) && g.h > 0.0)) throw Error("grid resolution must be positive");

    std::vector<std::size_t> counts(n);
    double total = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (g.lower[i] > g.upper[i]) throw Error("grid box has lower > upper");
        counts[i] = static_cast<std::size_t>(std::floor((g.upper[i] - g.lower[i]) / g.h + 1e-9)) + 1;
        total *= static_cast<double>(counts[i]);
    }
    if (total > 5e7) throw Error("grid too large: " + std::to_string(total) + " points");

    const Tolerance member(g.membership_tol.value_or(g.h), 0.0);
    std::vector<std::size_t> index(n, 0);
    std::vector<double> coords(n);
    GridResult best{Vector::zeros(n), std::numeric_limits<double>::infinity(), 0.0, 0, 0};
    bool found = false;
    while (true) {
        for (std::size_t i = 0; i < n; ++i) coords[i] = g.lower[i] + static_cast<double>(index[i]) * g.h;
        const Vector x(coords);
        ++best.points_scanned;
        bool feasible = true;
        for (const auto &s : p.sets) {
            if (!contains(s, x, member)) {
                feasible = false;
                break;
            }
        }
        if (feasible) {
            ++best.feasible_points;
            const double f = p.objective.value(x);
            if (!found || f < best.fhat) {
                best.fhat = f;
                best.xhat = x;
                found = true;
            }
        }
        // Odometer with the last coordinate fastest, so scan order is lexicographic.
        std::size_t i = n;
        while (i > 0) {
            --i;
            if (++index[i] < counts[i]) break;
            index[i] = 0;
            if (i == 0) {
                i = n + 1;
                break;
            }
        }
        if (i == n + 1) break;
    }
    if (!found) throw Error("no feasible grid point");
    best.gap_bound = p.objective.lipschitz_bound() * g.h * std::sqrt(static_cast<double>(n));
    return best;
}

RunTrace solve(const Problem &p, const SolverConfig &config, const Vector &x0) {
    return solve(p.objective, p.sets, config, x0);
}

} // namespace projsub
