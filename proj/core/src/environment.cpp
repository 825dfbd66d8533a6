#include "dynpress/environment.hpp"

#include "dynpress/error.hpp"

#include <string>

namespace dynpress {

Environment::Environment(double gravity, double depth, double p_atm)
    : gravity_(gravity), depth_(depth), p_atm_(p_atm) {
    if (!(std::isfinite(gravity) && gravity > 0.0))
        throw Error(ErrorCode::InvalidInput, "gravity must be positive, got " + std::to_string(gravity));
    if (!(std::isfinite(depth) && depth > 0.0))
        throw Error(ErrorCode::InvalidInput, "depth must be positive, got " + std::to_string(depth));
    if (!std::isfinite(p_atm))
        throw Error(ErrorCode::InvalidInput, "atmospheric pressure must be finite");
}

ScaledEnvironment nondimensionalize(const Environment& env) {
    const double g = env.gravity();
    const double d = env.depth();
    return ScaledEnvironment{d, std::sqrt(d / g), std::sqrt(g * d), g * d, env.p_atm()};
}

Environment scaled_environment(const Environment& env) {
    return Environment(1.0, 1.0, env.p_atm() / (env.gravity() * env.depth()));
}

Environment redimensionalize(const ScaledEnvironment& s) {
    // g = L / T^2
    const double g = s.length_scale / (s.time_scale * s.time_scale);
    return Environment(g, s.length_scale, s.p_atm);
}

double critical_speed(const Environment& env) {
    return std::sqrt(env.gravity() * env.depth());
}

std::array<DomainGeometry::Segment, 2> DomainGeometry::broken_line(double crest_elevation,
                                                                  double depth) const {
    return {Segment{{0.0, crest_elevation}, {0.0, -depth}},
            Segment{{0.0, -depth}, {truncation_x, -depth}}};
}

void to_json(nlohmann::json& j, const Environment& env) {
    j = nlohmann::json{{"gravity", env.gravity()}, {"depth", env.depth()}, {"p_atm", env.p_atm()}};
}

void from_json(const nlohmann::json& j, Environment& env) {
    try {
        const double g = j.value("gravity", 9.81);
        const double d = j.value("depth", 1.0);
        const double p = j.value("p_atm", 0.0);
        env = Environment(g, d, p);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::InputFormat, std::string("environment: ") + e.what());
    }
}

} // namespace dynpress
