#pragma once

#include "projsub/core.hpp"

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace projsub {

enum class ScheduleKind { power, constant, table };

std::string to_string(ScheduleKind kind);

struct ScheduleFlags {
    bool diminishing = false;
    bool divergent_sum = false;
    bool square_summable = false;
    /// False for tables, whose flags are asserted by the user and not checked.
    bool verified = true;

    /// lambda_k -> 0 and sum lambda_k = infinity.
    bool standard_condition() const noexcept { return diminishing && divergent_sum; }
    bool operator==(const ScheduleFlags &) const = default;
};

/// Predetermined step sizes lambda_k, k = 0, 1, ...
class StepSchedule {
  public:
    /// lambda_k = lambda0 / (k+1)^p
    static StepSchedule power(double lambda0, double p);
    static StepSchedule constant(double lambda0);
    /// lambda_k = values[min(k, size-1)] with user-asserted flags.
    static StepSchedule table(std::vector<double> values, ScheduleFlags asserted);

    double lambda(std::uint64_t k) const;
    ScheduleFlags classify() const;

    /// liminf and limsup of the sequence.
    std::pair<double, double> tail_bounds() const;

    ScheduleKind kind() const noexcept { return kind_; }
    double lambda0() const noexcept { return lambda0_; }
    double exponent() const noexcept { return exponent_; }
    const std::vector<double> &values() const noexcept { return values_; }
    std::string describe() const;

  private:
    StepSchedule() = default;

    ScheduleKind kind_ = ScheduleKind::constant;
    double lambda0_ = 0.0;
    double exponent_ = 0.0;
    std::vector<double> values_;
    ScheduleFlags table_flags_;
};

/// Positive convex weights beta_i. Normalised to sum to one on construction.
class WeightVector {
  public:
    explicit WeightVector(std::vector<double> beta);
    static WeightVector uniform(std::size_t m);

    std::size_t size() const noexcept { return beta_.size(); }
    double operator[](std::size_t i) const { return beta_[i]; }
    const std::vector<double> &values() const noexcept { return beta_; }

  private:
    std::vector<double> beta_;
};

} // namespace projsub
