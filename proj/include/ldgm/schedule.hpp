#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace ldgm {

enum class ScheduleKind { constant, linear, exponential };

std::string_view to_string(ScheduleKind kind);
ScheduleKind parse_schedule_kind(std::string_view name);  // throws std::invalid_argument

/// Softness schedule in the auxiliary variable xi. Pure value type: the
/// round -> xi map depends on nothing but these fields.
struct Schedule {
    ScheduleKind kind = ScheduleKind::constant;
    double xi_start = 0.05;
    double xi_end = 0.05;
    std::size_t rounds = 1;  // nu

    static Schedule constant(double xi, std::size_t rounds = 1) { return {ScheduleKind::constant, xi, xi, rounds}; }
    static Schedule linear(double start, double end, std::size_t rounds = 1) { return {ScheduleKind::linear, start, end, rounds}; }
    static Schedule exponential(double start, double end, std::size_t rounds = 1) {
        return {ScheduleKind::exponential, start, end, rounds};
    }

    /// Same schedule stretched over a different number of rounds.
    Schedule with_rounds(std::size_t nu) const {
        Schedule s = *this;
        s.rounds = nu;
        return s;
    }

    /// Throws std::invalid_argument unless 0 < xi_start < xi_end < 1 (linear,
    /// exponential) or xi_start == xi_end in (0, 1) (constant), and rounds >= 1.
    void validate() const;

    friend bool operator==(const Schedule&, const Schedule&) = default;
};

struct SoftnessParams {
    double beta;
    double mu;
};

/// xi at round r: t_r = r / (nu - 1) (0 when nu == 1), then linear or
/// geometric interpolation between the endpoints.
double xi_at(const Schedule& sched, std::size_t r);

/// beta = (1 - xi) / (1 + xi), mu = 1 / xi.
SoftnessParams params_from_xi(double xi);

/// Endpoint presets taken from the published rate-1/2 soft-hard results,
/// keyed "n<length>_<kind>", e.g. "n1000_exponential".
Schedule schedule_preset(std::string_view name);
std::vector<std::string> schedule_preset_names();

}  // namespace ldgm
