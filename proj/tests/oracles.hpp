#pragma once

// Reference computations written independently of the library code paths they check.

#include "projsub/core.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <vector>

namespace oracle {

using projsub::Vector;

inline double sq(double v) { return v * v; }

inline double dist(const Vector &a, const Vector &b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += sq(a[i] - b[i]);
    return std::sqrt(s);
}

/// Simplex projection by bisection on the threshold t solving sum max(x_i - t, 0) = 1.
inline Vector simplex_projection(const Vector &x) {
    double lo = *std::min_element(x.begin(), x.end()) - 1.0;
    double hi = *std::max_element(x.begin(), x.end());
    for (int it = 0; it < 200; ++it) {
        const double t = 0.5 * (lo + hi);
        double s = 0.0;
        for (double v : x) s += std::max(v - t, 0.0);
        (s > 1.0 ? lo : hi) = t;
    }
    const double t = 0.5 * (lo + hi);
    std::vector<double> out;
    for (double v : x) out.push_back(std::max(v - t, 0.0));
    return Vector(out);
}

/// Nearest point of {||y - c|| <= r, <a,y> <= b} in the plane by a dense sweep of the
/// boundary arc and chord, refined by golden-section search near the best sample.
inline Vector ball_halfspace_projection_2d(const Vector &c, double r, const Vector &a, double b,
                                           const Vector &x) {
    const double an = std::hypot(a[0], a[1]);
    auto inside = [&](const Vector &y) {
        return dist(y, c) <= r + 1e-12 && a[0] * y[0] + a[1] * y[1] <= b + 1e-12 * an;
    };
    if (inside(x)) return x;
    // Candidates: points on the circle (inside H) and points on the line (inside B).
    const Vector u{a[0] / an, a[1] / an};
    const Vector t{-u[1], u[0]};
    const Vector base{u[0] * b / an, u[1] * b / an};
    auto circle = [&](double th) { return Vector{c[0] + r * std::cos(th), c[1] + r * std::sin(th)}; };
    auto line = [&](double s) { return Vector{base[0] + s * t[0], base[1] + s * t[1]}; };

    Vector best = x;
    double best_d = INFINITY;
    auto consider = [&](const Vector &y) {
        if (!inside(y)) return;
        const double d = dist(x, y);
        if (d < best_d) {
            best_d = d;
            best = y;
        }
    };
    auto refine = [&](const std::function<Vector(double)> &g, double lo, double hi) {
        const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
        for (int i = 0; i < 200; ++i) {
            const double m1 = hi - phi * (hi - lo);
            const double m2 = lo + phi * (hi - lo);
            auto pen = [&](double s) {
                const Vector y = g(s);
                return dist(x, y) + (inside(y) ? 0.0 : 1e6);
            };
            (pen(m1) < pen(m2) ? hi : lo) = (pen(m1) < pen(m2) ? m2 : m1);
        }
        consider(g(0.5 * (lo + hi)));
    };
    const int n = 20000;
    const double span = 4.0 * (r + dist(x, c) + std::abs(b) / an + 1.0);
    for (int i = 0; i < n; ++i) {
        const double th = 2.0 * M_PI * i / n;
        consider(circle(th));
        consider(line(-span + 2.0 * span * i / n));
    }
    // Corners where the chord meets the circle: |base + s t - c|^2 = r^2.
    {
        const double bx = base[0] - c[0], by = base[1] - c[1];
        const double half_b = bx * t[0] + by * t[1];
        const double disc = half_b * half_b - (bx * bx + by * by - r * r);
        if (disc >= 0) {
            consider(line(-half_b + std::sqrt(disc)));
            consider(line(-half_b - std::sqrt(disc)));
        }
    }
    const Vector coarse = best;
    // Refine along whichever boundary piece the coarse optimum sits on.
    if (std::abs(dist(coarse, c) - r) < 1e-6) {
        const double th = std::atan2(coarse[1] - c[1], coarse[0] - c[0]);
        refine(circle, th - 4.0 * M_PI / n, th + 4.0 * M_PI / n);
    }
    if (std::abs(a[0] * coarse[0] + a[1] * coarse[1] - b) < 1e-6 * an) {
        const double s = (coarse[0] - base[0]) * t[0] + (coarse[1] - base[1]) * t[1];
        refine(line, s - 4.0 * span / n, s + 4.0 * span / n);
    }
    return best;
}

/// Central-difference gradient.
inline Vector numeric_gradient(const std::function<double(const Vector &)> &f, const Vector &x,
                               double h = 1e-6) {
    std::vector<double> g(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        std::vector<double> p(x.begin(), x.end()), m(x.begin(), x.end());
        p[i] += h;
        m[i] -= h;
        g[i] = (f(Vector(p)) - f(Vector(m))) / (2.0 * h);
    }
    return Vector(g);
}

/// alpha_k = |sin log k| in plain double precision.
inline double alpha(std::uint64_t k) { return std::abs(std::sin(std::log(static_cast<double>(k)))); }

} // namespace oracle
