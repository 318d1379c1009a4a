#pragma once

// Random set instances and samplers shared by the unit and acceptance tests.

#include "projsub/sets.hpp"

#include <cmath>
#include <functional>
#include <string>
#include <vector>

namespace fixtures {

using namespace projsub;

struct SetCase {
    std::string kind;
    ConvexSet set;
    /// Draws a point of the set.
    std::function<Vector(Rng &)> sample_inside;
};

inline Vector sample_simplex(Rng &rng, std::size_t n) {
    std::vector<double> e(n);
    double s = 0.0;
    for (auto &v : e) {
        v = -std::log(rng.uniform(1e-12, 1.0));
        s += v;
    }
    for (auto &v : e) v /= s;
    return Vector(e);
}

/// A random instance of the given kind in dimension n.
inline SetCase random_set(const std::string &kind, std::size_t n, Rng &rng) {
    if (kind == "halfspace") {
        Vector a = rng.uniform_vector(n, -1, 1);
        while (norm(a) < 0.1) a = rng.uniform_vector(n, -1, 1);
        const double b = rng.uniform(-1, 1);
        const Halfspace h(a, b);
        return {kind, h, [h, n](Rng &r) {
                    Vector y = r.uniform_vector(n, -3, 3);
                    const double over = dot(h.a, y) - h.b;
                    if (over > 0) y = axpy(-(over + r.uniform(0, 1)) / squared_norm(h.a), h.a, y);
                    return y;
                }};
    }
    if (kind == "hyperplane") {
        Vector a = rng.uniform_vector(n, -1, 1);
        while (norm(a) < 0.1) a = rng.uniform_vector(n, -1, 1);
        const Hyperplane h(a, rng.uniform(-1, 1));
        return {kind, h, [h](Rng &r) { return project(h, r.uniform_vector(h.a.size(), -3, 3)); }};
    }
    if (kind == "ball") {
        const Ball b(rng.uniform_vector(n, -1, 1), rng.uniform(0.1, 2.0));
        return {kind, b, [b](Rng &r) { return r.in_ball(b.center, b.radius); }};
    }
    if (kind == "box") {
        std::vector<double> lo(n), hi(n);
        for (std::size_t i = 0; i < n; ++i) {
            lo[i] = rng.uniform(-2, 0.5);
            hi[i] = lo[i] + rng.uniform(0, 2);
        }
        const Box b{Vector(lo), Vector(hi)};
        return {kind, b, [b](Rng &r) {
                    std::vector<double> y(b.lower.size());
                    for (std::size_t i = 0; i < y.size(); ++i) y[i] = r.uniform(b.lower[i], b.upper[i]);
                    return Vector(y);
                }};
    }
    if (kind == "simplex") {
        return {kind, Simplex(n), [n](Rng &r) { return sample_simplex(r, n); }};
    }
    throw Error("no fixture for " + kind);
}

inline const std::vector<std::string> &exact_kinds() {
    static const std::vector<std::string> k{"halfspace", "hyperplane", "ball", "box", "simplex"};
    return k;
}

/// Random sublevel constraints with a known interior sampler.
struct SublevelCase {
    std::string kind;
    SublevelSet set;
};

inline SublevelCase random_sublevel(const std::string &kind, std::size_t n, Rng &rng) {
    if (kind == "quadratic-ball") {
        return {kind, SublevelSet{QuadraticBallConstraint{rng.uniform_vector(n, -1, 1), rng.uniform(0.2, 2)}}};
    }
    if (kind == "affine") {
        return {kind, SublevelSet{AffineConstraint{rng.uniform_vector(n, -1, 1), rng.uniform(-1, 1)}}};
    }
    std::vector<Vector> a;
    std::vector<double> b;
    for (int i = 0; i < 3; ++i) {
        a.push_back(rng.uniform_vector(n, -1, 1));
        b.push_back(rng.uniform(-1, 0));
    }
    return {kind, SublevelSet{MaxAffineConstraint{a, b}}};
}

} // namespace fixtures
