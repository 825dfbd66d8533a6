#pragma once

// Numerical checks of the qualitative pressure properties of a solitary
// wave: the dynamic pressure p peaks at the crest, is positive everywhere,
// decreases along the crest line, the bed and the surface, and decays
// away from the crest, together with the auxiliary identities used to
// establish these facts.
//
// Strict inequalities are only ever reported as "pass" when the margin is
// above round-off; below the noise floor the status is "indeterminate".

#include "dynpress/flow_fields.hpp"
#include "dynpress/wave_solver.hpp"

#include <nlohmann/json.hpp>

#include <array>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace dynpress {

enum class PropertyId {
    CrestMax,
    Positivity,
    MonoBrokenLine,
    MonoSurface,
    Decay,
    Superharmonic,
    HopfBed,
    HopfCrestLine,
    Symmetry,
    BernoulliConst,
    MassFluxConst,
};

inline constexpr std::array<PropertyId, 11> kAllProperties = {
    PropertyId::CrestMax,      PropertyId::Positivity, PropertyId::MonoBrokenLine, PropertyId::MonoSurface,
    PropertyId::Decay,         PropertyId::Superharmonic, PropertyId::HopfBed,     PropertyId::HopfCrestLine,
    PropertyId::Symmetry,      PropertyId::BernoulliConst, PropertyId::MassFluxConst,
};

/// CREST_MAX, POSITIVITY, ...
[[nodiscard]] std::string_view to_string(PropertyId id);

enum class Status { Pass, Fail, Indeterminate };
[[nodiscard]] std::string_view to_string(Status s);

struct Finding {
    PropertyId id = PropertyId::CrestMax;
    Status status = Status::Indeterminate;
    double margin = 0.0;                  // property-specific extremal quantity
    std::optional<PhysicalPoint> witness; // worst sample; always set on failure
    double tolerance = 0.0;               // dimensionless
    std::string diagnostic;
    bool tail_only = false;               // indeterminate only for x >= 0.8 Λ
};

struct VerifierConfig {
    int stations = 201;              // grid over [0, Λ]
    int levels = 41;
    int line_points = 400;           // samples along the broken line and the surface
    double noise_floor = 1e-9;       // in units of g d
    double tail_start = 0.8;         // fraction of Λ
    double fd_step = 1e-3;           // in units of d
    int superharmonic_probes = 50;
    double min_order = 1.9;
    double symmetry_tol = 1e-12;     // in units of c
    double decay_tol = 1e-6;         // |p(0.95 Λ, y)| in units of g d
    double decay_rate_tol = 0.05;    // relative
    double bernoulli_tol = 1e-9;     // in units of g d
    int bernoulli_samples = 1000;
    double mass_flux_tol = 1e-8;     // relative spread
    int mass_flux_stations = 16;
};

struct VerificationReport {
    double amplitude = 0.0;
    double froude = 0.0;
    int modes = 0;
    double truncation_length = 0.0;
    std::vector<Finding> findings; // one per PropertyId, in enum order
    Status overall = Status::Indeterminate;
    std::vector<std::string> warnings;

    [[nodiscard]] const Finding& find(PropertyId id) const;
};

/// Default verification grid over the right half of the fluid.
[[nodiscard]] GridSpec default_grid(const FlowField& field, const VerifierConfig& cfg = {});

[[nodiscard]] Finding check_crest_max(const FieldGrid& grid, const VerifierConfig& cfg = {});
[[nodiscard]] Finding check_positivity(const FieldGrid& grid, const VerifierConfig& cfg = {});
/// Along the crest line and bed (first) and along the surface (second).
[[nodiscard]] std::pair<Finding, Finding> check_boundary_monotonicity(const FlowField& field,
                                                                      const VerifierConfig& cfg = {});
/// Signs of p_x on the bed (first) and p_y on the crest line (second).
[[nodiscard]] std::pair<Finding, Finding> check_hopf_signs(const FlowField& field, const VerifierConfig& cfg = {});

/// Residual of Δp = -2 |∇p|² / |∇ψ|² with a five-point Laplacian of step h.
struct SuperharmonicProbe {
    PhysicalPoint point;
    long double laplacian = 0;   // Δ_h p
    long double rhs = 0;         // -2 |∇p|² / |∇ψ|²
    long double residual = 0;    // Δ_h p - rhs
};
/// Throws StepTooLarge when h exceeds 1/8 of the local column height or the
/// point is closer than 2h to the boundary.
[[nodiscard]] SuperharmonicProbe superharmonic_probe(const FlowField& field, PhysicalPoint pt, double h);
[[nodiscard]] Finding check_superharmonic(const FlowField& field, const VerifierConfig& cfg = {});

/// A = 2 p_x / |∇ψ|², B = 2 p_y / |∇ψ|².
struct QuasilinearCoefficients {
    double a = 0.0;
    double b = 0.0;
};
[[nodiscard]] QuasilinearCoefficients quasilinear_coefficients(const FlowField& field, PhysicalPoint pt);
/// Same from raw values; throws DenominatorVanishing if v² + (u-c)² < 1e-14 c².
[[nodiscard]] QuasilinearCoefficients quasilinear_coefficients(double p_x, double p_y, double u_rel, double v,
                                                               double speed);

[[nodiscard]] Finding check_symmetry(const FlowField& field, const VerifierConfig& cfg = {});

[[nodiscard]] Finding check_decay(const FlowField& field, const VerifierConfig& cfg = {});
/// Decay check on an explicit field p(x, y), so that a perturbed tail can be
/// examined.
[[nodiscard]] Finding evaluate_decay(const FlowField& field, const std::function<double(double, double)>& pressure,
                                     const VerifierConfig& cfg = {});

[[nodiscard]] Finding check_bernoulli(const FlowField& field, const VerifierConfig& cfg = {});
[[nodiscard]] Finding check_mass_flux(const FlowField& field, const VerifierConfig& cfg = {});

/// Runs every check; errors inside a check become indeterminate findings.
/// Throws Precondition for an unconverged solution.
[[nodiscard]] VerificationReport verify_all(const WaveSolution& sol, const VerifierConfig& cfg = {});

/// Plain-text table, one line per finding.
void write_table(std::ostream& os, const VerificationReport& report);

void to_json(nlohmann::ordered_json& j, const Finding& f);
void to_json(nlohmann::ordered_json& j, const VerificationReport& r);

} // namespace dynpress
