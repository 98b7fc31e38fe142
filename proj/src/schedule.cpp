#include "ldgm/schedule.hpp"

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

namespace ldgm {

std::string_view to_string(ScheduleKind kind) {
    switch (kind) {
        case ScheduleKind::constant: return "constant";
        case ScheduleKind::linear: return "linear";
        case ScheduleKind::exponential: return "exponential";
    }
    return "unknown";
}

ScheduleKind parse_schedule_kind(std::string_view name) {
    if (name == "constant") return ScheduleKind::constant;
    if (name == "linear") return ScheduleKind::linear;
    if (name == "exponential" || name == "geometric") return ScheduleKind::exponential;
    throw std::invalid_argument("unknown schedule kind '" + std::string(name) + "'");
}

void Schedule::validate() const {
    if (rounds < 1) throw std::invalid_argument("schedule: rounds must be >= 1");
    if (!(xi_start > 0.0 && xi_start < 1.0) || !(xi_end > 0.0 && xi_end < 1.0))
        throw std::invalid_argument("schedule: xi endpoints must lie in (0, 1)");
    if (kind == ScheduleKind::constant) {
        if (xi_start != xi_end) throw std::invalid_argument("schedule: constant schedule needs xi_start == xi_end");
    } else if (!(xi_start < xi_end)) {
        throw std::invalid_argument("schedule: scheduled xi must increase (xi_start < xi_end)");
    }
}

double xi_at(const Schedule& sched, std::size_t r) {
    if (r >= sched.rounds) throw std::out_of_range("xi_at: round index out of range");
    if (r == 0) return sched.xi_start;
    if (r + 1 == sched.rounds) return sched.xi_end;
    const double t = static_cast<double>(r) / static_cast<double>(sched.rounds - 1);
    switch (sched.kind) {
        case ScheduleKind::constant: return sched.xi_start;
        case ScheduleKind::linear: return sched.xi_start + t * (sched.xi_end - sched.xi_start);
        case ScheduleKind::exponential: return sched.xi_start * std::pow(sched.xi_end / sched.xi_start, t);
    }
    return sched.xi_start;
}

SoftnessParams params_from_xi(double xi) {
    if (!(xi > 0.0 && xi < 1.0)) throw std::invalid_argument("params_from_xi: xi must lie in (0, 1)");
    return {(1.0 - xi) / (1.0 + xi), 1.0 / xi};
}

namespace {

struct Preset {
    const char* name;
    ScheduleKind kind;
    double start;
    double end;
};

constexpr std::array kPresets{
    Preset{"n100_constant", ScheduleKind::constant, 0.050, 0.050},
    Preset{"n100_linear", ScheduleKind::linear, 0.025, 0.052},
    Preset{"n100_exponential", ScheduleKind::exponential, 0.025, 0.052},
    Preset{"n1000_constant", ScheduleKind::constant, 0.040, 0.040},
    Preset{"n1000_linear", ScheduleKind::linear, 0.022, 0.048},
    Preset{"n1000_exponential", ScheduleKind::exponential, 0.022, 0.048},
    Preset{"n10000_constant", ScheduleKind::constant, 0.030, 0.030},
    Preset{"n10000_linear", ScheduleKind::linear, 0.012, 0.032},
    Preset{"n10000_exponential", ScheduleKind::exponential, 0.012, 0.032},
};

}  // namespace

Schedule schedule_preset(std::string_view name) {
    for (const auto& p : kPresets)
        if (name == p.name) return Schedule{p.kind, p.start, p.end, 1};
    throw std::invalid_argument("unknown schedule preset '" + std::string(name) + "'");
}

std::vector<std::string> schedule_preset_names() {
    std::vector<std::string> out;
    for (const auto& p : kPresets) out.emplace_back(p.name);
    return out;
}

}  // namespace ldgm
