#include "dynpress/gauge.hpp"

#include "dynpress/error.hpp"
#include "dynpress/flow_fields.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <istream>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>

namespace dynpress {

namespace {

double median(std::vector<double> v) {
    const std::size_t mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
    const double upper = v[mid];
    if (v.size() % 2 == 1) return upper;
    const double lower = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
    return 0.5 * (lower + upper);
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_number(const std::string& field, std::size_t line) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(field, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || trim(field.substr(used)).size() != 0)
        throw Error(ErrorCode::InputFormat, fmt::format("line {}: '{}' is not a number", line, field));
    return v;
}

} // namespace

void GaugeTrace::validate() const {
    if (at.size() != pressure.size())
        throw Error(ErrorCode::InvalidInput, "trace abscissae and pressures differ in length");
    if (at.size() < 8)
        throw Error(ErrorCode::TraceTooShort, fmt::format("{} samples; at least 8 are needed", at.size()));
    for (std::size_t i = 1; i < at.size(); ++i) {
        if (!(at[i] > at[i - 1]))
            throw Error(ErrorCode::InvalidInput,
                        fmt::format("abscissae must increase strictly (sample {}: {} after {})", i, at[i], at[i - 1]));
    }
}

double p_infinity_estimate(const GaugeTrace& trace, double tail_fraction) {
    trace.validate();
    if (!(tail_fraction > 0.0 && tail_fraction <= 0.5))
        throw Error(ErrorCode::InvalidInput, fmt::format("tail fraction {} outside (0, 0.5]", tail_fraction));
    const std::size_t n = trace.size();
    const std::size_t k = std::max<std::size_t>(1, static_cast<std::size_t>(tail_fraction * static_cast<double>(n)));
    std::vector<double> tails(trace.pressure.begin(), trace.pressure.begin() + static_cast<std::ptrdiff_t>(k));
    tails.insert(tails.end(), trace.pressure.end() - static_cast<std::ptrdiff_t>(k), trace.pressure.end());
    return median(std::move(tails));
}

HeightBound height_lower_bound(const GaugeTrace& trace, const Environment& env, double tail_fraction) {
    HeightBound b;
    b.tail_fraction = tail_fraction;
    b.p_inf = p_infinity_estimate(trace, tail_fraction);
    const auto peak = std::max_element(trace.pressure.begin(), trace.pressure.end());
    b.p_max_bed = *peak;
    const double bound = (b.p_max_bed - b.p_inf) / env.gravity();
    if (bound < 0.0) {
        b.negative_bound = true;
        b.flags.emplace_back("NegativeBound");
        b.h_lb = 0.0;
    } else {
        b.h_lb = bound;
    }
    const auto index = static_cast<std::size_t>(peak - trace.pressure.begin());
    if ((index == 0 || index + 1 == trace.size()) && bound > 0.0) {
        b.peak_uncaptured = true;
        b.flags.emplace_back("peak may be uncaptured");
    }
    return b;
}

GaugeTrace synth_trace(const WaveSolution& sol, const std::vector<double>& stations, double sigma,
                       std::uint64_t seed) {
    if (!(sigma >= 0.0)) throw Error(ErrorCode::InvalidInput, "noise level must be non-negative");
    const FlowField field(sol);
    GaugeTrace trace;
    trace.abscissa = Abscissa::Position;
    trace.env = sol.env;
    trace.source = TraceSource::Synthetic;
    trace.noise = sigma;
    trace.at = stations;
    trace.pressure.reserve(stations.size());
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, 1.0);
    const double d = sol.env.depth();
    for (double x : stations) {
        const double p = field.total_pressure({x, -d});
        trace.pressure.push_back(sigma > 0.0 ? p + sigma * noise(rng) : p);
    }
    return trace;
}

GaugeTrace positions_from_times(const GaugeTrace& trace, double speed, double gauge_x) {
    if (trace.abscissa != Abscissa::Time) throw Error(ErrorCode::InvalidInput, "trace is not a time series");
    if (!(speed > 0.0)) throw Error(ErrorCode::InvalidInput, "wave speed must be positive");
    GaugeTrace out = trace;
    out.abscissa = Abscissa::Position;
    const std::size_t n = trace.size();
    for (std::size_t i = 0; i < n; ++i) {
        out.at[i] = gauge_x - speed * trace.at[n - 1 - i];
        out.pressure[i] = trace.pressure[n - 1 - i];
    }
    return out;
}

GaugeTrace read_trace_csv(std::istream& is, const Environment& env) {
    GaugeTrace trace;
    trace.env = env;
    trace.source = TraceSource::File;
    std::string line;
    std::size_t number = 0;
    bool header = false;
    while (std::getline(is, line)) {
        ++number;
        const std::string t = trim(line);
        if (t.empty() || t.front() == '#') continue;
        const auto comma = t.find(',');
        if (comma == std::string::npos || t.find(',', comma + 1) != std::string::npos)
            throw Error(ErrorCode::InputFormat, fmt::format("line {}: expected two comma-separated columns", number));
        const std::string first = trim(t.substr(0, comma));
        const std::string second = trim(t.substr(comma + 1));
        if (!header) {
            if (second != "pressure" || (first != "x" && first != "t"))
                throw Error(ErrorCode::InputFormat,
                            fmt::format("unknown header '{}'; expected 'x,pressure' or 't,pressure'", t));
            trace.abscissa = first == "x" ? Abscissa::Position : Abscissa::Time;
            header = true;
            continue;
        }
        trace.at.push_back(parse_number(first, number));
        trace.pressure.push_back(parse_number(second, number));
    }
    if (!header) throw Error(ErrorCode::InputFormat, "missing header 'x,pressure' or 't,pressure'");
    return trace;
}

void write_trace_csv(std::ostream& os, const GaugeTrace& trace) {
    os << (trace.abscissa == Abscissa::Position ? "x" : "t") << ",pressure\n";
    for (std::size_t i = 0; i < trace.size(); ++i) os << fmt::format("{:.17g},{:.17g}\n", trace.at[i], trace.pressure[i]);
}

void to_json(nlohmann::ordered_json& j, const HeightBound& b) {
    j = nlohmann::ordered_json{{"h_lb", b.h_lb},
                               {"p_max_bed", b.p_max_bed},
                               {"p_inf", b.p_inf},
                               {"tail_fraction", b.tail_fraction},
                               {"flags", b.flags}};
}

} // namespace dynpress
