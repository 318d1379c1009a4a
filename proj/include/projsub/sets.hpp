#pragma once

#include "projsub/core.hpp"

#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace projsub {

/// Raised when an exact projection is requested from a set that only offers cutters.
class NoExactProjection : public Error {
  public:
    using Error::Error;
};

/// Raised when a constraint has a zero subgradient at a point where it is violated.
class InfeasibleCut : public Error {
  public:
    using Error::Error;
};

/// {x : <a,x> <= b}
struct Halfspace {
    Vector a;
    double b;

    Halfspace(Vector normal, double offset);
};

/// {x : <a,x> = b}
struct Hyperplane {
    Vector a;
    double b;

    Hyperplane(Vector normal, double offset);
};

struct Ball {
    Vector center;
    double radius;

    Ball(Vector c, double r);
};

struct Box {
    Vector lower;
    Vector upper;

    Box(Vector lo, Vector hi);
};

/// Probability simplex {x : x_i >= 0, sum x_i = 1}.
struct Simplex {
    std::size_t n;

    explicit Simplex(std::size_t dim);
};

// Constraint functions c for sublevel sets {x : c(x) <= 0}.

/// c(x) = ||x - center||^2 - radius^2
struct QuadraticBallConstraint {
    Vector center;
    double radius;
};

/// c(x) = <a,x> + b
struct AffineConstraint {
    Vector a;
    double b;
};

/// c(x) = max_i (<a_i,x> + b_i)
struct MaxAffineConstraint {
    std::vector<Vector> a;
    std::vector<double> b;
};

class ConstraintFunction {
  public:
    using Variant = std::variant<QuadraticBallConstraint, AffineConstraint, MaxAffineConstraint>;

    ConstraintFunction(QuadraticBallConstraint c);
    ConstraintFunction(AffineConstraint c);
    ConstraintFunction(MaxAffineConstraint c);

    double value(const Vector &x) const;
    /// Deterministic element of the subdifferential; lowest active index for max-affine.
    Vector subgradient(const Vector &x) const;
    std::size_t dimension() const;
    std::string kind() const;
    const Variant &variant() const noexcept { return impl_; }

  private:
    Variant impl_;
};

struct SublevelSet {
    ConstraintFunction constraint;
};

/// Result of a subgradient cut. An empty optional is the whole space.
using Cutter = std::optional<Halfspace>;

class ConvexSet {
  public:
    using Variant = std::variant<Halfspace, Hyperplane, Ball, Box, Simplex, SublevelSet>;

    ConvexSet(Halfspace s) : impl_(std::move(s)) {}
    ConvexSet(Hyperplane s) : impl_(std::move(s)) {}
    ConvexSet(Ball s) : impl_(std::move(s)) {}
    ConvexSet(Box s) : impl_(std::move(s)) {}
    ConvexSet(Simplex s) : impl_(std::move(s)) {}
    ConvexSet(SublevelSet s) : impl_(std::move(s)) {}

    std::string kind() const;
    std::size_t dimension() const;
    bool has_exact_projection() const noexcept;
    const Variant &variant() const noexcept { return impl_; }
    const SublevelSet *as_sublevel() const noexcept { return std::get_if<SublevelSet>(&impl_); }

  private:
    Variant impl_;
};

Vector project(const Halfspace &s, const Vector &x);
Vector project(const Hyperplane &s, const Vector &x);
Vector project(const Ball &s, const Vector &x);
Vector project(const Box &s, const Vector &x);
Vector project(const Simplex &s, const Vector &x);
/// Nearest point of the set. Throws NoExactProjection for sublevel sets.
Vector project(const ConvexSet &s, const Vector &x);
/// Identity for the whole-space cutter.
Vector project(const Cutter &c, const Vector &x);

double distance(const ConvexSet &s, const Vector &x);
double distance(const Cutter &c, const Vector &x);

/// Membership with absolute slack on the defining functional (c(x) <= tol.abs for sublevel sets).
bool contains(const ConvexSet &s, const Vector &x, const Tolerance &tol = {});
bool contains(const Cutter &c, const Vector &x, const Tolerance &tol = {});

/// Distance for exact sets, positive part of c(x) for sublevel sets.
double residual(const ConvexSet &s, const Vector &x);

/// {y : c(xk) + <xi, y - xk> <= 0} with xi the selected subgradient at xk.
Cutter cutter_halfspace(const SublevelSet &s, const Vector &xk);

/// The sublevel form used by relaxed methods: balls become quadratic-ball constraints and
/// half-spaces become affine constraints. Other sets are returned unchanged.
ConvexSet as_sublevel(const ConvexSet &s);

} // namespace projsub
