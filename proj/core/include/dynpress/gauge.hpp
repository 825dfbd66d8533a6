#pragma once

// Lower bound on the crest elevation from bed-pressure records.
//
// Since the dynamic pressure attains its maximum over the fluid only at the
// crest, where it equals g η(0), and decreases along the bed, the peak bed
// pressure P(0, -d) exceeds the far-field hydrostatic value P_∞ = P_atm + g d
// by less than g η(0). A pressure gauge on the bed therefore bounds the wave
// height from below: h > (max P - P_∞) / g.

#include "dynpress/environment.hpp"
#include "dynpress/wave_solver.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace dynpress {

enum class Abscissa { Position, Time };
enum class TraceSource { Synthetic, File };

struct GaugeTrace {
    Abscissa abscissa = Abscissa::Position;
    std::vector<double> at;       // x along the bed, or t
    std::vector<double> pressure; // total bed pressure per unit density
    Environment env{};
    TraceSource source = TraceSource::File;
    std::optional<double> noise;  // standard deviation, when known

    [[nodiscard]] std::size_t size() const noexcept { return at.size(); }
    /// TraceTooShort below 8 samples; InvalidInput unless strictly increasing.
    void validate() const;
};

inline constexpr double kDefaultTailFraction = 0.1;

struct HeightBound {
    double h_lb = 0.0;      // lower bound on the crest elevation
    double p_max_bed = 0.0; // peak recorded bed pressure
    double p_inf = 0.0;     // asymptotic bed pressure estimate
    double tail_fraction = kDefaultTailFraction;
    bool negative_bound = false; // noise pushed the peak below P_∞; h_lb clamped to 0
    bool peak_uncaptured = false;
    std::vector<std::string> flags;
};

/// Median of the first and last tail_fraction of the samples.
[[nodiscard]] double p_infinity_estimate(const GaugeTrace& trace, double tail_fraction = kDefaultTailFraction);

[[nodiscard]] HeightBound height_lower_bound(const GaugeTrace& trace, const Environment& env,
                                             double tail_fraction = kDefaultTailFraction);

/// P(x, -d) at the stations plus independent N(0, sigma²) noise from a
/// generator seeded with `seed`.
[[nodiscard]] GaugeTrace synth_trace(const WaveSolution& sol, const std::vector<double>& stations, double sigma,
                                     std::uint64_t seed);

/// Converts a time series recorded at bed position X into positions
/// x = X - c t in the wave frame, reordered to increase.
[[nodiscard]] GaugeTrace positions_from_times(const GaugeTrace& trace, double speed, double gauge_x = 0.0);

/// CSV with header `x,pressure` or `t,pressure`; lines starting with `#`
/// are comments. Any other header is an InputFormat error.
[[nodiscard]] GaugeTrace read_trace_csv(std::istream& is, const Environment& env);
void write_trace_csv(std::ostream& os, const GaugeTrace& trace);

void to_json(nlohmann::ordered_json& j, const HeightBound& b);

} // namespace dynpress
