#include "projsub/sets.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

namespace projsub {

namespace {

template <class... Ts> struct overloaded : Ts... {
    using Ts::operator()...;
};

void require_dim(std::size_t expected, const Vector &x, const char *what) {
    if (x.size() != expected) {
        throw DimensionMismatch(std::string(what) + ": expected length " +
                                std::to_string(expected) + ", got " + std::to_string(x.size()));
    }
}

void require_nonzero_normal(const Vector &a, const char *what) {
    if (!(norm(a) > 0.0)) {
        throw Error(std::string(what) + ": normal vector must be nonzero");
    }
}

} // namespace

Halfspace::Halfspace(Vector normal, double offset) : a(std::move(normal)), b(offset) {
    require_nonzero_normal(a, "halfspace");
    if (!std::isfinite(b)) throw NonFiniteError("halfspace: offset must be finite");
}

Hyperplane::Hyperplane(Vector normal, double offset) : a(std::move(normal)), b(offset) {
    require_nonzero_normal(a, "hyperplane");
    if (!std::isfinite(b)) throw NonFiniteError("hyperplane: offset must be finite");
}

Ball::Ball(Vector c, double r) : center(std::move(c)), radius(r) {
    if (!(std::isfinite(radius) && radius >= 0.0)) {
        throw Error("ball: radius must be finite and nonnegative");
    }
}

Box::Box(Vector lo, Vector hi) : lower(std::move(lo)), upper(std::move(hi)) {
    require_same_size(lower, upper, "box");
    for (std::size_t i = 0; i < lower.size(); ++i) {
        if (lower[i] > upper[i]) {
            throw Error("box: lower bound exceeds upper bound at index " + std::to_string(i));
        }
    }
}

Simplex::Simplex(std::size_t dim) : n(dim) {
    if (n == 0) throw Error("simplex: dimension must be at least 1");
}

// ---------------------------------------------------------------------------
// Constraint functions

ConstraintFunction::ConstraintFunction(QuadraticBallConstraint c) : impl_(std::move(c)) {
    const auto &q = std::get<QuadraticBallConstraint>(impl_);
    if (!(std::isfinite(q.radius) && q.radius >= 0.0)) {
        throw Error("quadratic-ball constraint: radius must be finite and nonnegative");
    }
}

ConstraintFunction::ConstraintFunction(AffineConstraint c) : impl_(std::move(c)) {
    if (!std::isfinite(std::get<AffineConstraint>(impl_).b)) {
        throw NonFiniteError("affine constraint: offset must be finite");
    }
}

ConstraintFunction::ConstraintFunction(MaxAffineConstraint c) : impl_(std::move(c)) {
    const auto &m = std::get<MaxAffineConstraint>(impl_);
    if (m.a.empty() || m.a.size() != m.b.size()) {
        throw Error("max-affine constraint: needs matching, nonempty rows and offsets");
    }
    for (const auto &row : m.a) require_same_size(row, m.a.front(), "max-affine constraint");
}

double ConstraintFunction::value(const Vector &x) const {
    return std::visit(
        overloaded{
            [&](const QuadraticBallConstraint &q) {
                return squared_distance(x, q.center) - q.radius * q.radius;
            },
            [&](const AffineConstraint &c) { return dot(c.a, x) + c.b; },
            [&](const MaxAffineConstraint &m) {
                double best = dot(m.a[0], x) + m.b[0];
                for (std::size_t i = 1; i < m.a.size(); ++i) {
                    best = std::max(best, dot(m.a[i], x) + m.b[i]);
                }
                return best;
            },
        },
        impl_);
}

Vector ConstraintFunction::subgradient(const Vector &x) const {
    return std::visit(overloaded{
                          [&](const QuadraticBallConstraint &q) { return 2.0 * (x - q.center); },
                          [&](const AffineConstraint &c) {
                              require_same_size(c.a, x, "affine constraint");
                              return c.a;
                          },
                          [&](const MaxAffineConstraint &m) {
                              std::size_t arg = 0;
                              double best = dot(m.a[0], x) + m.b[0];
                              for (std::size_t i = 1; i < m.a.size(); ++i) {
                                  const double v = dot(m.a[i], x) + m.b[i];
                                  if (v > best) {
                                      best = v;
                                      arg = i;
                                  }
                              }
                              return m.a[arg];
                          },
                      },
                      impl_);
}

std::size_t ConstraintFunction::dimension() const {
    return std::visit(overloaded{
                          [](const QuadraticBallConstraint &q) { return q.center.size(); },
                          [](const AffineConstraint &c) { return c.a.size(); },
                          [](const MaxAffineConstraint &m) { return m.a.front().size(); },
                      },
                      impl_);
}

std::string ConstraintFunction::kind() const {
    return std::visit(overloaded{
                          [](const QuadraticBallConstraint &) { return std::string("quadratic-ball"); },
                          [](const AffineConstraint &) { return std::string("affine"); },
                          [](const MaxAffineConstraint &) { return std::string("max-affine"); },
                      },
                      impl_);
}

// ---------------------------------------------------------------------------
// ConvexSet

std::string ConvexSet::kind() const {
    return std::visit(overloaded{
                          [](const Halfspace &) { return std::string("halfspace"); },
                          [](const Hyperplane &) { return std::string("hyperplane"); },
                          [](const Ball &) { return std::string("ball"); },
                          [](const Box &) { return std::string("box"); },
                          [](const Simplex &) { return std::string("simplex"); },
                          [](const SublevelSet &) { return std::string("sublevel"); },
                      },
                      impl_);
}

std::size_t ConvexSet::dimension() const {
    return std::visit(overloaded{
                          [](const Halfspace &s) { return s.a.size(); },
                          [](const Hyperplane &s) { return s.a.size(); },
                          [](const Ball &s) { return s.center.size(); },
                          [](const Box &s) { return s.lower.size(); },
                          [](const Simplex &s) { return s.n; },
                          [](const SublevelSet &s) { return s.constraint.dimension(); },
                      },
                      impl_);
}

bool ConvexSet::has_exact_projection() const noexcept {
    return !std::holds_alternative<SublevelSet>(impl_);
}

// ---------------------------------------------------------------------------
// Projections

Vector project(const Halfspace &s, const Vector &x) {
    const double excess = dot(s.a, x) - s.b;
    if (excess <= 0.0) return x;
    return axpy(-excess / squared_norm(s.a), s.a, x);
}

Vector project(const Hyperplane &s, const Vector &x) {
    const double excess = dot(s.a, x) - s.b;
    if (excess == 0.0) return x;
    return axpy(-excess / squared_norm(s.a), s.a, x);
}

Vector project(const Ball &s, const Vector &x) {
    const double d = distance_between(x, s.center);
    if (d <= s.radius) return x;
    return axpy(s.radius / d, x - s.center, s.center);
}

Vector project(const Box &s, const Vector &x) {
    require_same_size(s.lower, x, "box projection");
    std::vector<double> out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        out[i] = std::clamp(x[i], s.lower[i], s.upper[i]);
    }
    return Vector(std::move(out));
}

Vector project(const Simplex &s, const Vector &x) {
    require_dim(s.n, x, "simplex projection");
    std::vector<double> u(x.begin(), x.end());
    std::sort(u.begin(), u.end(), std::greater<>());
    // Largest support size rho with u_rho - (sum_{i<=rho} u_i - 1)/rho > 0.
    double cumulative = 0.0;
    double theta = 0.0;
    for (std::size_t j = 0; j < u.size(); ++j) {
        cumulative += u[j];
        const double t = (cumulative - 1.0) / static_cast<double>(j + 1);
        if (u[j] - t > 0.0) theta = t;
    }
    std::vector<double> out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        out[i] = std::max(x[i] - theta, 0.0);
    }
    return Vector(std::move(out));
}

Vector project(const ConvexSet &s, const Vector &x) {
    return std::visit(overloaded{
                          [&](const SublevelSet &) -> Vector {
                              throw NoExactProjection(
                                  "sublevel sets have no exact projection; use cutter_halfspace");
                          },
                          [&](const auto &set) -> Vector { return project(set, x); },
                      },
                      s.variant());
}

Vector project(const Cutter &c, const Vector &x) { return c ? project(*c, x) : x; }

double distance(const ConvexSet &s, const Vector &x) {
    return distance_between(x, project(s, x));
}

double distance(const Cutter &c, const Vector &x) {
    return c ? distance_between(x, project(*c, x)) : 0.0;
}

bool contains(const ConvexSet &s, const Vector &x, const Tolerance &tol) {
    if (s.dimension() != x.size()) {
        throw DimensionMismatch("contains: set and point dimensions differ");
    }
    return std::visit(
        overloaded{
            [&](const Halfspace &h) { return dot(h.a, x) - h.b <= tol.slack(h.b); },
            [&](const Hyperplane &h) { return std::abs(dot(h.a, x) - h.b) <= tol.slack(h.b); },
            [&](const Ball &b) {
                return distance_between(x, b.center) - b.radius <= tol.slack(b.radius);
            },
            [&](const Box &b) {
                for (std::size_t i = 0; i < x.size(); ++i) {
                    const double scale = std::max(std::abs(b.lower[i]), std::abs(b.upper[i]));
                    if (b.lower[i] - x[i] > tol.slack(scale) || x[i] - b.upper[i] > tol.slack(scale)) {
                        return false;
                    }
                }
                return true;
            },
            [&](const Simplex &) {
                double sum = 0.0;
                for (double v : x) {
                    if (v < -tol.abs) return false;
                    sum += v;
                }
                return std::abs(sum - 1.0) <= tol.slack(1.0);
            },
            [&](const SublevelSet &s) { return s.constraint.value(x) <= tol.abs; },
        },
        s.variant());
}

bool contains(const Cutter &c, const Vector &x, const Tolerance &tol) {
    return !c || contains(ConvexSet(*c), x, tol);
}

double residual(const ConvexSet &s, const Vector &x) {
    if (const auto *sub = s.as_sublevel()) {
        return std::max(sub->constraint.value(x), 0.0);
    }
    return distance(s, x);
}

Cutter cutter_halfspace(const SublevelSet &s, const Vector &xk) {
    const auto &c = s.constraint;
    if (c.dimension() != xk.size()) {
        throw DimensionMismatch("cutter: constraint and anchor dimensions differ");
    }
    // Affine constraints are their own linearisation; build the cut from the data directly.
    if (const auto *affine = std::get_if<AffineConstraint>(&c.variant())) {
        if (norm(affine->a) > 0.0) return Halfspace(affine->a, -affine->b);
        if (affine->b <= 0.0) return std::nullopt;
        throw InfeasibleCut("affine constraint with zero normal is violated everywhere");
    }
    const double value = c.value(xk);
    Vector xi = c.subgradient(xk);
    if (!(norm(xi) > 0.0)) {
        if (value <= 0.0) return std::nullopt;
        throw InfeasibleCut("zero subgradient at a point with c(x) = " + std::to_string(value) +
                            " > 0: the constraint set is empty");
    }
    const double offset = dot(xi, xk) - value;
    return Halfspace(std::move(xi), offset);
}

ConvexSet as_sublevel(const ConvexSet &s) {
    if (const auto *ball = std::get_if<Ball>(&s.variant())) {
        return SublevelSet{QuadraticBallConstraint{ball->center, ball->radius}};
    }
    if (const auto *h = std::get_if<Halfspace>(&s.variant())) {
        return SublevelSet{AffineConstraint{h->a, -h->b}};
    }
    return s;
}

} // namespace projsub
