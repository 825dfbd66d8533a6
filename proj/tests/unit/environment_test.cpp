#include "dynpress/environment.hpp"
#include "dynpress/error.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>

using namespace dynpress;

TEST(Environment, RejectsNonPhysicalParameters) {
    EXPECT_THROW(Environment(0.0, 1.0), Error);
    EXPECT_THROW(Environment(9.81, -1.0), Error);
    EXPECT_THROW(Environment(std::numeric_limits<double>::infinity(), 1.0), Error);
    EXPECT_THROW(Environment(9.81, std::nan("")), Error);
    try {
        (void)Environment(-1.0, 1.0);
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::InvalidInput);
    }
}

TEST(Environment, ScalesRoundTrip) {
    const Environment env(9.81, 2.5, 101325.0);
    const ScaledEnvironment s = nondimensionalize(env);
    EXPECT_DOUBLE_EQ(s.length_scale, 2.5);
    EXPECT_DOUBLE_EQ(s.velocity_scale, std::sqrt(9.81 * 2.5));
    EXPECT_DOUBLE_EQ(s.time_scale, std::sqrt(2.5 / 9.81));
    EXPECT_DOUBLE_EQ(s.pressure_scale, 9.81 * 2.5);
    EXPECT_DOUBLE_EQ(s.to_velocity(s.from_velocity(3.7)), 3.7);
    EXPECT_DOUBLE_EQ(s.to_pressure(s.from_pressure(12.0)), 12.0);
    EXPECT_EQ(redimensionalize(s), env);

    const Environment unit = scaled_environment(env);
    EXPECT_DOUBLE_EQ(unit.gravity(), 1.0);
    EXPECT_DOUBLE_EQ(unit.depth(), 1.0);
    EXPECT_DOUBLE_EQ(unit.p_atm(), 101325.0 / (9.81 * 2.5));
}

TEST(Environment, CriticalSpeed) {
    EXPECT_DOUBLE_EQ(critical_speed(Environment(9.81, 1.0)), std::sqrt(9.81));
    EXPECT_DOUBLE_EQ(critical_speed(Environment(1.0, 4.0)), 2.0);
}

TEST(Environment, BrokenLineRunsDownThenAlongBed) {
    DomainGeometry geo;
    geo.truncation_x = 30.0;
    const auto segs = geo.broken_line(0.3, 1.0);
    EXPECT_EQ(segs[0].start[0], 0.0);
    EXPECT_EQ(segs[0].start[1], 0.3);
    EXPECT_EQ(segs[0].end[1], -1.0);
    EXPECT_EQ(segs[1].start[1], -1.0);
    EXPECT_EQ(segs[1].end[0], 30.0);
    EXPECT_EQ(segs[1].end[1], -1.0);
}

TEST(Environment, JsonRoundTrip) {
    const Environment env(3.0, 0.5, 7.0);
    const nlohmann::json j = env;
    EXPECT_EQ(j.get<Environment>(), env);
}
