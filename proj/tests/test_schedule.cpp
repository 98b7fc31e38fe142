#include "doctest.h"

#include "ldgm/schedule.hpp"

#include <cmath>
#include <stdexcept>

using namespace ldgm;

TEST_CASE("endpoints are exact for every kind") {
    for (auto s : {Schedule::constant(0.04, 100), Schedule::linear(0.022, 0.048, 100), Schedule::exponential(0.022, 0.048, 100)}) {
        CHECK(xi_at(s, 0) == s.xi_start);
        CHECK(xi_at(s, 99) == s.xi_end);
        CHECK_THROWS_AS(xi_at(s, 100), std::out_of_range);
    }
}

TEST_CASE("midpoints") {
    CHECK(xi_at(Schedule::linear(0.025, 0.052, 3), 1) == doctest::Approx(0.0385).epsilon(1e-14));
    CHECK(xi_at(Schedule::exponential(0.025, 0.052, 3), 1) == doctest::Approx(std::sqrt(0.025 * 0.052)).epsilon(1e-14));
    CHECK(xi_at(Schedule::exponential(0.025, 0.052, 3), 1) == doctest::Approx(0.036056).epsilon(1e-5));
}

TEST_CASE("single-round schedules return the start value") {
    CHECK(xi_at(Schedule::linear(0.1, 0.2, 1), 0) == 0.1);
    CHECK(xi_at(Schedule::exponential(0.1, 0.2, 1), 0) == 0.1);
}

TEST_CASE("params_from_xi") {
    auto p = params_from_xi(0.05);
    CHECK(p.beta == doctest::Approx(0.904762).epsilon(1e-6));
    CHECK(p.mu == doctest::Approx(20.0));
    p = params_from_xi(0.5);
    CHECK(p.beta == doctest::Approx(1.0 / 3.0));
    CHECK(p.mu == doctest::Approx(2.0));
    p = params_from_xi(1e-9);
    CHECK(p.beta > 0.999999);
    CHECK(p.mu > 1e8);
    CHECK_THROWS_AS(params_from_xi(0.0), std::invalid_argument);
    CHECK_THROWS_AS(params_from_xi(1.0), std::invalid_argument);
}

TEST_CASE("validation") {
    CHECK_THROWS_AS(Schedule::linear(0.05, 0.04, 10).validate(), std::invalid_argument);
    CHECK_THROWS_AS(Schedule::linear(0.05, 0.05, 10).validate(), std::invalid_argument);
    CHECK_THROWS_AS(Schedule::constant(1.0, 10).validate(), std::invalid_argument);
    CHECK_THROWS_AS(Schedule::constant(0.1, 0).validate(), std::invalid_argument);
    Schedule odd{ScheduleKind::constant, 0.1, 0.2, 3};
    CHECK_THROWS_AS(odd.validate(), std::invalid_argument);
    CHECK_NOTHROW(Schedule::exponential(0.012, 0.032, 100).validate());
}

TEST_CASE("names and presets") {
    CHECK(parse_schedule_kind("exponential") == ScheduleKind::exponential);
    CHECK(parse_schedule_kind("geometric") == ScheduleKind::exponential);
    CHECK(to_string(ScheduleKind::linear) == "linear");
    CHECK_THROWS(parse_schedule_kind("cosine"));
    const auto s = schedule_preset("n1000_exponential");
    CHECK(s.kind == ScheduleKind::exponential);
    CHECK(s.xi_start == 0.022);
    CHECK(s.xi_end == 0.048);
    CHECK(schedule_preset("n100_constant").xi_start == 0.05);
    CHECK(schedule_preset("n10000_linear").xi_end == 0.032);
    CHECK(schedule_preset_names().size() == 9);
    CHECK_THROWS(schedule_preset("n5_linear"));
}
