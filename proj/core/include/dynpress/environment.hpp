#pragma once

// Physical parameters, scaling and fluid-domain geometry shared by every
// other part of the library.
//
// Internally all computations run in units where g = d = 1. Lengths scale
// with d, times with sqrt(d/g), velocities with sqrt(g d) and pressures per
// unit density with g d. The atmospheric pressure only ever enters
// additively.

#include <nlohmann/json.hpp>

#include <array>
#include <cmath>

namespace dynpress {

class Environment {
public:
    /// Throws Error(InvalidInput) unless gravity > 0 and depth > 0 (both finite).
    Environment(double gravity = 9.81, double depth = 1.0, double p_atm = 0.0);

    [[nodiscard]] double gravity() const noexcept { return gravity_; }
    [[nodiscard]] double depth() const noexcept { return depth_; }
    [[nodiscard]] double p_atm() const noexcept { return p_atm_; }
    [[nodiscard]] static constexpr double density() noexcept { return 1.0; }

    friend bool operator==(const Environment&, const Environment&) = default;

private:
    double gravity_;
    double depth_;
    double p_atm_;
};

/// Factors mapping nondimensional (g = d = 1) quantities back to SI.
struct ScaledEnvironment {
    double length_scale;   // d
    double time_scale;     // sqrt(d / g)
    double velocity_scale; // sqrt(g d)
    double pressure_scale; // g d (per unit density)
    double p_atm;          // carried additively, dimensional

    [[nodiscard]] double to_length(double x) const { return x * length_scale; }
    [[nodiscard]] double from_length(double x) const { return x / length_scale; }
    [[nodiscard]] double to_velocity(double u) const { return u * velocity_scale; }
    [[nodiscard]] double from_velocity(double u) const { return u / velocity_scale; }
    [[nodiscard]] double to_pressure(double p) const { return p * pressure_scale; }
    [[nodiscard]] double from_pressure(double p) const { return p / pressure_scale; }
    [[nodiscard]] double to_time(double t) const { return t * time_scale; }
    /// Stream function has units of area / time.
    [[nodiscard]] double to_stream(double psi) const { return psi * length_scale * velocity_scale; }
};

[[nodiscard]] ScaledEnvironment nondimensionalize(const Environment& env);

/// Environment with g = d = 1 and the same P_atm expressed in units of g d.
[[nodiscard]] Environment scaled_environment(const Environment& env);

/// Inverse of nondimensionalize: rebuilds the dimensional environment.
[[nodiscard]] Environment redimensionalize(const ScaledEnvironment& scales);

/// sqrt(g d): solitary waves only exist strictly above this speed.
[[nodiscard]] double critical_speed(const Environment& env);

/// Horizontal and vertical extent of the right half of the fluid domain,
/// and the broken line running down the crest line and out along the bed.
struct DomainGeometry {
    bool half_domain = true;
    double truncation_x = 40.0; // Λ, dimensional length

    struct Segment {
        std::array<double, 2> start;
        std::array<double, 2> end;
    };

    /// Crest line (0, crest_elevation) -> (0, -d), then bed (0, -d) -> (Λ, -d).
    [[nodiscard]] std::array<Segment, 2> broken_line(double crest_elevation, double depth) const;
};

/// Point in the moving frame, x = X - c t, y = Y.
struct PhysicalPoint {
    double x = 0.0;
    double y = 0.0;
};

void to_json(nlohmann::json& j, const Environment& env);
void from_json(const nlohmann::json& j, Environment& env);

} // namespace dynpress
