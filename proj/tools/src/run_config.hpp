#pragma once

// Everything a command-line run depends on. A run is reproducible from its
// RunConfig alone; every artifact carries a copy under "config".

#include "dynpress/environment.hpp"
#include "dynpress/verifier.hpp"
#include "dynpress/wave_solver.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace dynpress::cli {

struct SolverConfig {
    std::optional<double> amplitude;
    std::optional<double> froude;
    int modes = 1024;
    std::optional<double> half_length;
    double tol = 1e-12;
    double amplitude_cap = 0.79;
};

struct GridConfig {
    std::vector<double> stations; // explicit x positions; overrides n_stations
    int n_stations = 101;         // evenly spaced over [0, Λ]
    int levels = 41;
};

struct GaugeConfig {
    double tail_fraction = 0.1;
    std::optional<double> speed; // converts t traces to positions
    int stations = 401;          // synthetic traces over [-Λ, Λ]
    double noise = 0.0;
};

struct OutputConfig {
    std::string dir = ".";
    std::string format = "csv"; // fields: csv | json
    bool plot_script = false;
};

struct RunConfig {
    double gravity = 9.81;
    double depth = 1.0;
    double p_atm = 0.0;
    SolverConfig solver;
    GridConfig grid;
    VerifierConfig verifier;
    GaugeConfig gauge;
    OutputConfig output;
    std::vector<double> amplitudes; // sweep
    std::uint64_t seed = 0;

    [[nodiscard]] Environment environment() const { return Environment(gravity, depth, p_atm); }
    [[nodiscard]] WaveRequest request() const;
};

void to_json(nlohmann::ordered_json& j, const RunConfig& c);
/// Missing keys keep their defaults; malformed values throw InputFormat.
void from_json(const nlohmann::ordered_json& j, RunConfig& c);

} // namespace dynpress::cli
