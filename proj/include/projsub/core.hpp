#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace projsub {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
  public:
    using Error::Error;
};

/// A coordinate became NaN or infinite.
class NonFiniteError : public Error {
  public:
    using Error::Error;
};

/// Dense point in R^n. Every coordinate is finite and the length is at least one.
class Vector {
  public:
    Vector() = default;
    explicit Vector(std::vector<double> coords);
    Vector(std::initializer_list<double> coords);

    static Vector zeros(std::size_t n);
    static Vector filled(std::size_t n, double value);

    std::size_t size() const noexcept { return coords_.size(); }
    bool empty() const noexcept { return coords_.empty(); }
    double operator[](std::size_t i) const { return coords_[i]; }

    std::span<const double> view() const noexcept { return coords_; }
    const std::vector<double> &coords() const noexcept { return coords_; }

    auto begin() const noexcept { return coords_.begin(); }
    auto end() const noexcept { return coords_.end(); }

    bool operator==(const Vector &) const = default;

  private:
    std::vector<double> coords_;
};

struct Tolerance {
    double abs = 1e-9;
    double rel = 1e-9;

    Tolerance() = default;
    Tolerance(double abs_tol, double rel_tol);

    /// Allowed slack for a comparison against a quantity of the given magnitude.
    double slack(double magnitude) const noexcept;
};

void require_same_size(const Vector &a, const Vector &b, const char *op);

/// Sum of a_i b_i in ascending index order.
double dot(const Vector &a, const Vector &b);
double norm(const Vector &a);
double squared_norm(const Vector &a);

/// alpha * a + b
Vector axpy(double alpha, const Vector &a, const Vector &b);
Vector operator+(const Vector &a, const Vector &b);
Vector operator-(const Vector &a, const Vector &b);
Vector operator*(double alpha, const Vector &a);

double distance_between(const Vector &a, const Vector &b);
double squared_distance(const Vector &a, const Vector &b);

std::string to_string(const Vector &a);

/// Seeded pseudo-random source. Every stochastic component draws from one of these.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double uniform(double lo, double hi);
    double normal();
    std::size_t index(std::size_t n);
    Vector uniform_vector(std::size_t n, double lo, double hi);
    /// Uniform draw from the ball of the given radius around center.
    Vector in_ball(const Vector &center, double radius);

    std::mt19937_64 &engine() noexcept { return engine_; }

  private:
    std::mt19937_64 engine_;
};

} // namespace projsub
