#include "projsub/functions.hpp"

#include <algorithm>
#include <cmath>

namespace projsub {

namespace {

template <class... Ts> struct overloaded : Ts... {
    using Ts::operator()...;
};

double sign_or_zero(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

} // namespace

QuadraticDistance::QuadraticDistance(Vector c, std::optional<double> radius)
    : center(std::move(c)), region_radius(0.0) {
    if (!radius) {
        throw Error("quadratic-distance needs an operating region radius: its gradient is "
                    "unbounded on the whole space");
    }
    if (!(std::isfinite(*radius) && *radius > 0.0)) {
        throw Error("quadratic-distance: region radius must be finite and positive");
    }
    region_radius = *radius;
}

ComponentFunction::ComponentFunction(AbsDeviation f) : impl_(std::move(f)) { init(); }
ComponentFunction::ComponentFunction(AffineFunction f) : impl_(std::move(f)) { init(); }
ComponentFunction::ComponentFunction(QuadraticDistance f) : impl_(std::move(f)) { init(); }
ComponentFunction::ComponentFunction(L1Norm f) : impl_(std::move(f)) { init(); }
ComponentFunction::ComponentFunction(MaxAffine f) : impl_(std::move(f)) { init(); }

void ComponentFunction::init() {
    lipschitz_ = std::visit(
        overloaded{
            [](const AbsDeviation &f) {
                if (!std::isfinite(f.b)) throw NonFiniteError("abs-deviation: offset must be finite");
                return norm(f.a);
            },
            [](const AffineFunction &f) {
                if (!std::isfinite(f.b)) throw NonFiniteError("affine: offset must be finite");
                return norm(f.a);
            },
            [](const QuadraticDistance &f) { return 2.0 * (f.region_radius + norm(f.center)); },
            [](const L1Norm &f) {
                if (f.n == 0) throw Error("l1-norm: dimension must be at least 1");
                return std::sqrt(static_cast<double>(f.n));
            },
            [](const MaxAffine &f) {
                if (f.a.empty() || f.a.size() != f.b.size()) {
                    throw Error("max-affine: needs matching, nonempty rows and offsets");
                }
                double best = 0.0;
                for (const auto &row : f.a) {
                    require_same_size(row, f.a.front(), "max-affine");
                    best = std::max(best, norm(row));
                }
                return best;
            },
        },
        impl_);
}

double ComponentFunction::value(const Vector &x) const {
    return std::visit(overloaded{
                          [&](const AbsDeviation &f) { return std::abs(dot(f.a, x) - f.b); },
                          [&](const AffineFunction &f) { return dot(f.a, x) + f.b; },
                          [&](const QuadraticDistance &f) { return squared_distance(x, f.center); },
                          [&](const L1Norm &f) {
                              if (x.size() != f.n) throw DimensionMismatch("l1-norm: wrong length");
                              double sum = 0.0;
                              for (double v : x) sum += std::abs(v);
                              return sum;
                          },
                          [&](const MaxAffine &f) {
                              double best = dot(f.a[0], x) + f.b[0];
                              for (std::size_t i = 1; i < f.a.size(); ++i) {
                                  best = std::max(best, dot(f.a[i], x) + f.b[i]);
                              }
                              return best;
                          },
                      },
                      impl_);
}

Vector ComponentFunction::subgradient(const Vector &x) const {
    return std::visit(overloaded{
                          [&](const AbsDeviation &f) {
                              return sign_or_zero(dot(f.a, x) - f.b) * f.a;
                          },
                          [&](const AffineFunction &f) {
                              require_same_size(f.a, x, "affine");
                              return f.a;
                          },
                          [&](const QuadraticDistance &f) { return 2.0 * (x - f.center); },
                          [&](const L1Norm &f) {
                              if (x.size() != f.n) throw DimensionMismatch("l1-norm: wrong length");
                              std::vector<double> out(x.size());
                              for (std::size_t i = 0; i < x.size(); ++i) out[i] = sign_or_zero(x[i]);
                              return Vector(std::move(out));
                          },
                          [&](const MaxAffine &f) {
                              std::size_t arg = 0;
                              double best = dot(f.a[0], x) + f.b[0];
                              for (std::size_t i = 1; i < f.a.size(); ++i) {
                                  const double v = dot(f.a[i], x) + f.b[i];
                                  if (v > best) {
                                      best = v;
                                      arg = i;
                                  }
                              }
                              return f.a[arg];
                          },
                      },
                      impl_);
}

std::optional<double> ComponentFunction::gradient_lipschitz() const {
    if (std::holds_alternative<QuadraticDistance>(impl_)) return 2.0;
    if (std::holds_alternative<AffineFunction>(impl_)) return 0.0;
    return std::nullopt;
}

std::optional<double> ComponentFunction::region_radius() const {
    if (const auto *q = std::get_if<QuadraticDistance>(&impl_)) return q->region_radius;
    return std::nullopt;
}

bool ComponentFunction::in_region(const Vector &x) const {
    const auto radius = region_radius();
    return !radius || norm(x) <= *radius;
}

std::size_t ComponentFunction::dimension() const {
    return std::visit(overloaded{
                          [](const AbsDeviation &f) { return f.a.size(); },
                          [](const AffineFunction &f) { return f.a.size(); },
                          [](const QuadraticDistance &f) { return f.center.size(); },
                          [](const L1Norm &f) { return f.n; },
                          [](const MaxAffine &f) { return f.a.front().size(); },
                      },
                      impl_);
}

std::string ComponentFunction::kind() const {
    return std::visit(overloaded{
                          [](const AbsDeviation &) { return std::string("abs-deviation"); },
                          [](const AffineFunction &) { return std::string("affine"); },
                          [](const QuadraticDistance &) { return std::string("quadratic-distance"); },
                          [](const L1Norm &) { return std::string("l1-norm"); },
                          [](const MaxAffine &) { return std::string("max-affine"); },
                      },
                      impl_);
}

CompositeObjective::CompositeObjective(std::vector<ComponentFunction> components)
    : components_(std::move(components)) {
    if (components_.empty()) throw Error("objective needs at least one component");
    const std::size_t n = components_.front().dimension();
    for (const auto &f : components_) {
        if (f.dimension() != n) throw DimensionMismatch("objective components differ in dimension");
        lipschitz_ += f.lipschitz_bound();
    }
}

double CompositeObjective::value(const Vector &x) const {
    double sum = 0.0;
    for (const auto &f : components_) sum += f.value(x);
    return sum;
}

} // namespace projsub
