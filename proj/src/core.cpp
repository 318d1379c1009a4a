#include "projsub/core.hpp"

#include <cmath>
#include <sstream>

namespace projsub {

namespace {

void check_finite(const std::vector<double> &coords) {
    for (std::size_t i = 0; i < coords.size(); ++i) {
        if (!std::isfinite(coords[i])) {
            throw NonFiniteError("non-finite coordinate at index " + std::to_string(i));
        }
    }
}

} // namespace

Vector::Vector(std::vector<double> coords) : coords_(std::move(coords)) {
    if (coords_.empty()) {
        throw DimensionMismatch("vector must have at least one coordinate");
    }
    check_finite(coords_);
}

Vector::Vector(std::initializer_list<double> coords) : Vector(std::vector<double>(coords)) {}

Vector Vector::zeros(std::size_t n) { return filled(n, 0.0); }

Vector Vector::filled(std::size_t n, double value) {
    return Vector(std::vector<double>(n, value));
}

Tolerance::Tolerance(double abs_tol, double rel_tol) : abs(abs_tol), rel(rel_tol) {
    if (!(std::isfinite(abs) && std::isfinite(rel)) || abs < 0 || rel < 0) {
        throw Error("tolerance components must be finite and nonnegative");
    }
}

double Tolerance::slack(double magnitude) const noexcept {
    return abs + rel * std::abs(magnitude);
}

void require_same_size(const Vector &a, const Vector &b, const char *op) {
    if (a.size() != b.size()) {
        throw DimensionMismatch(std::string(op) + ": length " + std::to_string(a.size()) +
                                " vs " + std::to_string(b.size()));
    }
}

double dot(const Vector &a, const Vector &b) {
    require_same_size(a, b, "dot");
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        sum += a[i] * b[i];
    }
    return sum;
}

double squared_norm(const Vector &a) {
    double sum = 0.0;
    for (double v : a) {
        sum += v * v;
    }
    return sum;
}

double norm(const Vector &a) { return std::sqrt(squared_norm(a)); }

Vector axpy(double alpha, const Vector &a, const Vector &b) {
    require_same_size(a, b, "axpy");
    std::vector<double> out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        out[i] = alpha * a[i] + b[i];
    }
    return Vector(std::move(out));
}

Vector operator+(const Vector &a, const Vector &b) {
    require_same_size(a, b, "add");
    std::vector<double> out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        out[i] = a[i] + b[i];
    }
    return Vector(std::move(out));
}

Vector operator-(const Vector &a, const Vector &b) {
    require_same_size(a, b, "subtract");
    std::vector<double> out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        out[i] = a[i] - b[i];
    }
    return Vector(std::move(out));
}

Vector operator*(double alpha, const Vector &a) {
    std::vector<double> out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        out[i] = alpha * a[i];
    }
    return Vector(std::move(out));
}

double squared_distance(const Vector &a, const Vector &b) {
    require_same_size(a, b, "distance");
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        sum += d * d;
    }
    return sum;
}

double distance_between(const Vector &a, const Vector &b) {
    return std::sqrt(squared_distance(a, b));
}

std::string to_string(const Vector &a) {
    std::ostringstream os;
    os.precision(17);
    os << '(';
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (i) os << ", ";
        os << a[i];
    }
    os << ')';
    return os.str();
}

double Rng::uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(engine_);
}

double Rng::normal() { return std::normal_distribution<double>(0.0, 1.0)(engine_); }

std::size_t Rng::index(std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(engine_);
}

Vector Rng::uniform_vector(std::size_t n, double lo, double hi) {
    std::vector<double> out(n);
    for (auto &v : out) {
        v = uniform(lo, hi);
    }
    return Vector(std::move(out));
}

Vector Rng::in_ball(const Vector &center, double radius) {
    const std::size_t n = center.size();
    std::vector<double> dir(n);
    double len2 = 0.0;
    do {
        len2 = 0.0;
        for (auto &v : dir) {
            v = normal();
            len2 += v * v;
        }
    } while (len2 == 0.0);
    const double scale =
        radius * std::pow(uniform(0.0, 1.0), 1.0 / static_cast<double>(n)) / std::sqrt(len2);
    for (std::size_t i = 0; i < n; ++i) {
        dir[i] = center[i] + scale * dir[i];
    }
    return Vector(std::move(dir));
}

} // namespace projsub
