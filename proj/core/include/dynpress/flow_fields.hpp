#pragma once

// Velocity, stream function and pressure anywhere in the fluid, evaluated
// through the conformal map at the preimage of the physical point. All
// inputs and outputs are dimensional; pressures are per unit density.
//
// In the frame moving with the wave the complex velocity is
//
//     (u - c) - i v = -(m / h) / z'(w),
//
// so p = c²/2 - |∇ψ|²/2 and its gradient follow from z' and z'' alone.

#include "dynpress/conformal_map.hpp"
#include "dynpress/environment.hpp"
#include "dynpress/wave_solver.hpp"

#include <nlohmann/json.hpp>

#include <iosfwd>
#include <optional>
#include <vector>

namespace dynpress {

enum class SampleKind { Interior, Surface, Bed };

struct FieldSample {
    PhysicalPoint point{};
    double psi = 0.0;
    double u = 0.0;
    double v = 0.0;
    double u_rel = 0.0; // u - c
    double P = 0.0;     // total pressure
    double p = 0.0;     // dynamic pressure c²/2 - (v² + (u-c)²)/2
    SampleKind kind = SampleKind::Interior;
};

struct Velocity {
    double u = 0.0;
    double v = 0.0;
    double u_rel = 0.0;
};

struct VelocityGradient {
    double u_x = 0.0, u_y = 0.0, v_x = 0.0, v_y = 0.0;
};

struct PressureGradient {
    double p_x = 0.0, p_y = 0.0;
};

struct LocalFlow {
    Velocity velocity;
    VelocityGradient velocity_gradient;
    PressureGradient pressure_gradient;
    double p = 0.0;
};

class FlowField {
public:
    explicit FlowField(WaveSolution sol);

    [[nodiscard]] const WaveSolution& solution() const noexcept { return sol_; }
    [[nodiscard]] double depth() const noexcept { return sol_.env.depth(); }
    [[nodiscard]] double truncation_length() const noexcept { return sol_.truncation_length(); }

    /// η(x) for |x| <= Λ.
    [[nodiscard]] double surface_elevation(double x) const;
    /// η'(x).
    [[nodiscard]] double surface_slope(double x) const;

    [[nodiscard]] double stream_function(PhysicalPoint pt) const;
    [[nodiscard]] Velocity velocity(PhysicalPoint pt) const;
    [[nodiscard]] VelocityGradient velocity_gradient(PhysicalPoint pt) const;

    /// P = C - g y - |∇ψ|²/2.
    [[nodiscard]] double total_pressure(PhysicalPoint pt) const;
    /// p = c²/2 - (v² + (u-c)²)/2, from the velocity.
    [[nodiscard]] double dynamic_pressure(PhysicalPoint pt) const;
    /// p = P - (P_atm - g y), from the total pressure.
    [[nodiscard]] double dynamic_pressure_from_total(PhysicalPoint pt) const;
    /// Same as dynamic_pressure, evaluated in extended precision.
    [[nodiscard]] long double dynamic_pressure_extended(long double x, long double y) const;
    [[nodiscard]] PressureGradient pressure_gradient(PhysicalPoint pt) const;
    /// Velocity, dynamic pressure and their gradients from one inversion.
    [[nodiscard]] LocalFlow local_flow(PhysicalPoint pt) const;

    /// P obtained by integrating the vertical momentum balance
    /// P_y = -g - (u-c) v_x - v v_y down from the surface, where P = P_atm.
    /// Independent of Bernoulli's law; used to test it.
    [[nodiscard]] double total_pressure_from_momentum(PhysicalPoint pt) const;

    /// ∫_{-d}^{η(x)} (u - c) dy. Negative: equals -m for every x.
    [[nodiscard]] double mass_flux(double x) const;

    [[nodiscard]] FieldSample sample(PhysicalPoint pt) const;

    /// True when (x, y) lies in the closed domain |x| <= Λ, -d <= y <= η(x).
    [[nodiscard]] bool contains(PhysicalPoint pt) const;

    [[nodiscard]] const ConformalMap<double>& map() const noexcept { return map_; }

private:
    struct Local;
    [[nodiscard]] std::complex<double> preimage(PhysicalPoint pt) const;
    [[nodiscard]] Local local(PhysicalPoint pt) const;
    void require_station(double x) const;

    WaveSolution sol_;
    ConformalMap<double> map_;
    ConformalMap<long double> map_ext_;
    double velocity_scale_;
};

/// Boundary-fitted grid: node j of station i sits at
/// y = -d + (η(x_i) + d) j / (n_i - 1), bottom to top.
struct GridSpec {
    std::vector<double> stations; // x positions
    std::vector<int> levels;      // nodes per station; a single entry applies to all

    [[nodiscard]] int levels_at(std::size_t station) const;
    /// n stations evenly spaced over [x0, x1].
    [[nodiscard]] static GridSpec uniform(double x0, double x1, int n_stations, int levels);
};

struct FieldGrid {
    GridSpec spec;
    std::vector<FieldSample> samples; // station-major, bottom to top
    std::optional<std::size_t> crest_index;
    double truncation_x = 0.0;
    double pressure_scale = 1.0; // g d
};

[[nodiscard]] FieldGrid sample_grid(const FlowField& field, const GridSpec& spec);

/// CSV with header x,y,psi,u,v,P,p and 17 significant digits.
void write_csv(std::ostream& os, const FieldGrid& grid);

void to_json(nlohmann::json& j, const GridSpec& spec);
void to_json(nlohmann::json& j, const FieldSample& s);
void to_json(nlohmann::json& j, const FieldGrid& grid);

} // namespace dynpress
