#pragma once

#include "projsub/core.hpp"

#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace projsub {

/// An iterate left the region on which a component's Lipschitz bound was declared.
class RegionEscape : public Error {
  public:
    using Error::Error;
};

/// |<a,x> - b|, L = ||a||. Selects 0 at the kink.
struct AbsDeviation {
    Vector a;
    double b;
};

/// <a,x> + b, L = ||a||.
struct AffineFunction {
    Vector a;
    double b;
};

/// ||x - center||^2. The gradient is unbounded globally, so the bound
/// L = 2 (R + ||center||) is declared on the ball ||x|| <= R.
struct QuadraticDistance {
    Vector center;
    double region_radius;

    QuadraticDistance(Vector c, std::optional<double> radius);
};

/// ||x||_1 on R^n, L = sqrt(n). Selects 0 in coordinates that are exactly zero.
struct L1Norm {
    std::size_t n;
};

/// max_i (<a_i,x> + b_i), L = max_i ||a_i||. Ties go to the lowest active index.
struct MaxAffine {
    std::vector<Vector> a;
    std::vector<double> b;
};

class ComponentFunction {
  public:
    using Variant = std::variant<AbsDeviation, AffineFunction, QuadraticDistance, L1Norm, MaxAffine>;

    ComponentFunction(AbsDeviation f);
    ComponentFunction(AffineFunction f);
    ComponentFunction(QuadraticDistance f);
    ComponentFunction(L1Norm f);
    ComponentFunction(MaxAffine f);

    double value(const Vector &x) const;
    Vector subgradient(const Vector &x) const;

    /// Bound on ||v|| for v in the subdifferential, valid on the operating region.
    double lipschitz_bound() const noexcept { return lipschitz_; }
    /// Lipschitz constant of the gradient for smooth components.
    std::optional<double> gradient_lipschitz() const;
    /// Radius of the ball around the origin the iterates must stay in, if any.
    std::optional<double> region_radius() const;
    bool in_region(const Vector &x) const;

    std::size_t dimension() const;
    std::string kind() const;
    const Variant &variant() const noexcept { return impl_; }

  private:
    void init();

    Variant impl_;
    double lipschitz_ = 0.0;
};

/// f = sum_j f_j with L = sum_j L_j.
class CompositeObjective {
  public:
    explicit CompositeObjective(std::vector<ComponentFunction> components);

    /// Sum in ascending component order.
    double value(const Vector &x) const;
    double lipschitz_bound() const noexcept { return lipschitz_; }
    std::size_t size() const noexcept { return components_.size(); }
    std::size_t dimension() const { return components_.front().dimension(); }
    const ComponentFunction &operator[](std::size_t j) const { return components_[j]; }
    const std::vector<ComponentFunction> &components() const noexcept { return components_; }

  private:
    std::vector<ComponentFunction> components_;
    double lipschitz_ = 0.0;
};

} // namespace projsub
