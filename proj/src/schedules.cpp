#include "projsub/schedules.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace projsub {

std::string to_string(ScheduleKind kind) {
    switch (kind) {
    case ScheduleKind::power: return "power";
    case ScheduleKind::constant: return "constant";
    case ScheduleKind::table: return "table";
    }
    return "unknown";
}

namespace {

void require_positive(double v, const char *what) {
    if (!(std::isfinite(v) && v > 0.0)) {
        throw Error(std::string(what) + " must be finite and positive");
    }
}

} // namespace

StepSchedule StepSchedule::power(double lambda0, double p) {
    require_positive(lambda0, "schedule lambda0");
    if (!std::isfinite(p)) throw Error("schedule exponent must be finite");
    StepSchedule s;
    s.kind_ = ScheduleKind::power;
    s.lambda0_ = lambda0;
    s.exponent_ = p;
    return s;
}

StepSchedule StepSchedule::constant(double lambda0) {
    require_positive(lambda0, "schedule lambda0");
    StepSchedule s;
    s.kind_ = ScheduleKind::constant;
    s.lambda0_ = lambda0;
    return s;
}

StepSchedule StepSchedule::table(std::vector<double> values, ScheduleFlags asserted) {
    if (values.empty()) throw Error("table schedule needs at least one value");
    for (double v : values) require_positive(v, "table schedule entry");
    StepSchedule s;
    s.kind_ = ScheduleKind::table;
    s.lambda0_ = values.front();
    s.values_ = std::move(values);
    s.table_flags_ = asserted;
    s.table_flags_.verified = false;
    return s;
}

double StepSchedule::lambda(std::uint64_t k) const {
    switch (kind_) {
    case ScheduleKind::power:
        return lambda0_ / std::pow(static_cast<double>(k) + 1.0, exponent_);
    case ScheduleKind::constant: return lambda0_;
    case ScheduleKind::table:
        return values_[k < values_.size() ? static_cast<std::size_t>(k) : values_.size() - 1];
    }
    return lambda0_;
}

ScheduleFlags StepSchedule::classify() const {
    switch (kind_) {
    case ScheduleKind::power:
        return {exponent_ > 0.0, exponent_ <= 1.0, exponent_ > 0.5, true};
    case ScheduleKind::constant: return {false, true, false, true};
    case ScheduleKind::table: return table_flags_;
    }
    return {};
}

std::pair<double, double> StepSchedule::tail_bounds() const {
    switch (kind_) {
    case ScheduleKind::power:
        if (exponent_ > 0.0) return {0.0, 0.0};
        if (exponent_ == 0.0) return {lambda0_, lambda0_};
        return {std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
    case ScheduleKind::constant: return {lambda0_, lambda0_};
    case ScheduleKind::table: return {values_.back(), values_.back()};
    }
    return {lambda0_, lambda0_};
}

std::string StepSchedule::describe() const {
    std::ostringstream os;
    os.precision(17);
    switch (kind_) {
    case ScheduleKind::power: os << "power(lambda0=" << lambda0_ << ", p=" << exponent_ << ")"; break;
    case ScheduleKind::constant: os << "constant(lambda0=" << lambda0_ << ")"; break;
    case ScheduleKind::table: os << "table(" << values_.size() << " values, unverified flags)"; break;
    }
    return os.str();
}

WeightVector::WeightVector(std::vector<double> beta) : beta_(std::move(beta)) {
    if (beta_.empty()) throw Error("weights must be nonempty");
    double total = 0.0;
    for (double b : beta_) {
        if (!(std::isfinite(b) && b > 0.0)) throw Error("weights must be finite and positive");
        total += b;
    }
    for (double &b : beta_) b /= total;
    // The last weight absorbs the rounding so that the ascending-order sum is exactly one.
    double head = 0.0;
    for (std::size_t i = 0; i + 1 < beta_.size(); ++i) head += beta_[i];
    double &last = beta_.back();
    last = 1.0 - head;
    for (int guard = 0; head + last != 1.0 && guard < 64; ++guard) {
        last = std::nextafter(last, head + last < 1.0 ? 2.0 : 0.0);
    }
    if (!(last > 0.0)) throw Error("weights too unbalanced to normalise");
}

WeightVector WeightVector::uniform(std::size_t m) {
    return WeightVector(std::vector<double>(m, 1.0));
}

} // namespace projsub
