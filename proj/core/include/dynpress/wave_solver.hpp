#pragma once

// Steady solitary waves of the irrotational free-boundary problem.
//
// The fluid domain is mapped conformally onto a strip (see conformal_map.hpp),
// which makes the stream function ψ = -m ζ / h exactly harmonic and constant
// on both boundaries. What remains is Bernoulli's law on the free surface,
//
//     c² / (2 h² |z'(ξ)|²) + Y(ξ) - c² / 2 = 0,      (g = d = 1, m = c d)
//
// solved for the even surface spectrum Y and the speed c at a prescribed
// crest elevation Y(0) = a. The solitary wave is approximated by a long
// periodic wave of half period Λ.

#include "dynpress/environment.hpp"

#include <nlohmann/json.hpp>

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace dynpress {

enum class IterationMethod { Automatic, Petviashvili, Newton };

/// Inputs of solve_wave. Lengths are dimensional; the cap is relative (a/d).
struct WaveRequest {
    Environment env{};
    std::optional<double> amplitude;   // crest elevation a above the still level
    std::optional<double> froude;      // c / sqrt(g d)
    int modes = 1024;                  // power of two >= 64
    std::optional<double> half_length; // Λ; chosen from the decay rate when absent
    double tol = 1e-12;
    double amplitude_cap = 0.79;
    bool extend_domain = true;         // grow Λ until |η(Λ)| < 1e-10 a
    bool refine_modes = true;          // double N while the spectrum tail is above 1e-13
    IterationMethod method = IterationMethod::Automatic;
};

struct SolverDiagnostics {
    int iterations = 0;
    int continuation_steps = 0;
    double residual = 0.0;          // max nodal Bernoulli residual (nondimensional)
    double tail_ratio = 0.0;        // max |a_k| over the last 5% of modes / max |a_k|
    double tail_elevation = 0.0;    // |η(Λ)| / a
    std::string method;
    bool converged = false;
    bool truncation_warning = false;
    std::vector<std::string> warnings;
};

/// A converged (or still-water) solitary wave.
///
/// The spectrum and half length are nondimensional (units of d); speed,
/// amplitude, Bernoulli constant and mass flux are dimensional.
struct WaveSolution {
    Environment env{};
    double speed = 0.0;
    double froude = 0.0;
    double amplitude = 0.0;
    double bernoulli_constant = 0.0; // c²/2 + P_atm
    double mass_flux = 0.0;          // m = ψ(x, -d) > 0
    double half_length = 0.0;        // Λ / d
    std::vector<double> surface_spectrum; // cosine coefficients of Y(ξ) / d
    std::vector<double> odd_spectrum;     // sine coefficients, empty for solver output
    SolverDiagnostics diagnostics{};

    [[nodiscard]] int modes() const noexcept { return static_cast<int>(surface_spectrum.size()); }
    /// Conformal depth h = 1 + a_0 (units of d).
    [[nodiscard]] double conformal_depth() const;
    /// Dimensional truncation length Λ.
    [[nodiscard]] double truncation_length() const { return half_length * env.depth(); }
    [[nodiscard]] bool is_still_water() const noexcept { return amplitude == 0.0; }
};

/// Uniform stream u = v = 0, η ≡ 0 travelling at the given Froude number.
[[nodiscard]] WaveSolution still_water(const Environment& env, double froude, int modes = 64,
                                       double half_length = 40.0);

/// First-order (KdV) solitary wave a sech²(x sqrt(3a / 4d³)), c = sqrt(g(d + a)).
struct KdvProfile {
    double amplitude;
    double depth;
    double speed;
    [[nodiscard]] double operator()(double x) const;
};

/// Throws AmplitudeOutOfRange unless 0 < a <= 0.2 d.
[[nodiscard]] KdvProfile kdv_profile(double amplitude, const Environment& env);

/// Spatial decay rate μ of the tail, e^{-μ|x|}: the root in (0, π/2d) of
/// c² μ = g tan(μ d). Throws FroudeSubcritical for c <= sqrt(g d).
[[nodiscard]] double tail_decay_rate(const Environment& env, double speed);

/// Truncation length for which a wave of this amplitude has decayed to about
/// 1e-11 a at x = Λ (nondimensional).
[[nodiscard]] double default_half_length(double relative_amplitude);

[[nodiscard]] WaveSolution solve_wave(const WaveRequest& request);

/// Warm-started sequence of solves; solution k seeds solution k + 1.
/// Errors from individual solves are rethrown naming the failing amplitude.
[[nodiscard]] std::vector<WaveSolution> continue_amplitude(const WaveRequest& base,
                                                           const std::vector<double>& amplitudes);

/// Elevation η(ξ = Λ) at the end of the truncated domain (dimensional).
[[nodiscard]] double trough_elevation(const WaveSolution& sol);

struct ProbeSpec {
    int surface_points = 0; // 0: four times the mode count
    int stations = 64;      // interior columns over [0, Λ]
    int levels = 16;        // interior points per column
};

/// Residuals of the governing equations, nondimensional (units of g, d).
struct ResidualReport {
    double laplace_residual = 0.0;
    double bernoulli_surface_residual = 0.0;
    double kinematic_surface_residual = 0.0;
    double bed_residual = 0.0;
    double decay_residual = 0.0;
};

/// Evaluates the residuals on points offset from the collocation nodes.
[[nodiscard]] ResidualReport residuals(const WaveSolution& sol, const ProbeSpec& probe = {});

/// Header "k,coefficient", one row per even mode.
void write_spectrum_csv(std::ostream& os, const WaveSolution& sol);

void to_json(nlohmann::json& j, const SolverDiagnostics& d);
void from_json(const nlohmann::json& j, SolverDiagnostics& d);
void to_json(nlohmann::json& j, const WaveSolution& sol);
void from_json(const nlohmann::json& j, WaveSolution& sol);
void to_json(nlohmann::json& j, const ResidualReport& r);

} // namespace dynpress
