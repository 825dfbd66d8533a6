#include "run_config.hpp"

#include "dynpress/error.hpp"

namespace dynpress::cli {

namespace {

using ojson = nlohmann::ordered_json;

template <class T>
void read(const ojson& j, const char* key, T& into) {
    if (j.contains(key) && !j.at(key).is_null()) into = j.at(key).get<T>();
}

template <class T>
void read(const ojson& j, const char* key, std::optional<T>& into) {
    if (j.contains(key) && !j.at(key).is_null()) into = j.at(key).get<T>();
}

template <class T>
ojson optional_value(const std::optional<T>& v) {
    return v ? ojson(*v) : ojson(nullptr);
}

} // namespace

WaveRequest RunConfig::request() const {
    WaveRequest r;
    r.env = environment();
    r.amplitude = solver.amplitude;
    r.froude = solver.froude;
    r.modes = solver.modes;
    r.half_length = solver.half_length;
    r.tol = solver.tol;
    r.amplitude_cap = solver.amplitude_cap;
    return r;
}

void to_json(ojson& j, const RunConfig& c) {
    const auto& v = c.verifier;
    j = ojson{
        {"environment", {{"gravity", c.gravity}, {"depth", c.depth}, {"p_atm", c.p_atm}}},
        {"solver",
         {{"amplitude", optional_value(c.solver.amplitude)},
          {"froude", optional_value(c.solver.froude)},
          {"modes", c.solver.modes},
          {"half_length", optional_value(c.solver.half_length)},
          {"tol", c.solver.tol},
          {"amplitude_cap", c.solver.amplitude_cap}}},
        {"grid", {{"stations", c.grid.stations}, {"n_stations", c.grid.n_stations}, {"levels", c.grid.levels}}},
        {"verifier",
         {{"stations", v.stations},
          {"levels", v.levels},
          {"line_points", v.line_points},
          {"noise_floor", v.noise_floor},
          {"tail_start", v.tail_start},
          {"fd_step", v.fd_step},
          {"superharmonic_probes", v.superharmonic_probes},
          {"min_order", v.min_order},
          {"symmetry_tol", v.symmetry_tol},
          {"decay_tol", v.decay_tol},
          {"decay_rate_tol", v.decay_rate_tol},
          {"bernoulli_tol", v.bernoulli_tol},
          {"bernoulli_samples", v.bernoulli_samples},
          {"mass_flux_tol", v.mass_flux_tol},
          {"mass_flux_stations", v.mass_flux_stations}}},
        {"gauge",
         {{"tail_fraction", c.gauge.tail_fraction},
          {"speed", optional_value(c.gauge.speed)},
          {"stations", c.gauge.stations},
          {"noise", c.gauge.noise}}},
        {"output", {{"dir", c.output.dir}, {"format", c.output.format}, {"plot_script", c.output.plot_script}}},
        {"amplitudes", c.amplitudes},
        {"seed", c.seed},
    };
}

void from_json(const ojson& j, RunConfig& c) {
    try {
        if (!j.is_object()) throw Error(ErrorCode::InputFormat, "configuration must be a JSON object");
        if (j.contains("environment")) {
            const auto& e = j.at("environment");
            read(e, "gravity", c.gravity);
            read(e, "depth", c.depth);
            read(e, "p_atm", c.p_atm);
        }
        if (j.contains("solver")) {
            const auto& s = j.at("solver");
            read(s, "amplitude", c.solver.amplitude);
            read(s, "froude", c.solver.froude);
            read(s, "modes", c.solver.modes);
            read(s, "half_length", c.solver.half_length);
            read(s, "tol", c.solver.tol);
            read(s, "amplitude_cap", c.solver.amplitude_cap);
        }
        if (j.contains("grid")) {
            const auto& g = j.at("grid");
            read(g, "stations", c.grid.stations);
            read(g, "n_stations", c.grid.n_stations);
            read(g, "levels", c.grid.levels);
        }
        if (j.contains("verifier")) {
            const auto& v = j.at("verifier");
            auto& t = c.verifier;
            read(v, "stations", t.stations);
            read(v, "levels", t.levels);
            read(v, "line_points", t.line_points);
            read(v, "noise_floor", t.noise_floor);
            read(v, "tail_start", t.tail_start);
            read(v, "fd_step", t.fd_step);
            read(v, "superharmonic_probes", t.superharmonic_probes);
            read(v, "min_order", t.min_order);
            read(v, "symmetry_tol", t.symmetry_tol);
            read(v, "decay_tol", t.decay_tol);
            read(v, "decay_rate_tol", t.decay_rate_tol);
            read(v, "bernoulli_tol", t.bernoulli_tol);
            read(v, "bernoulli_samples", t.bernoulli_samples);
            read(v, "mass_flux_tol", t.mass_flux_tol);
            read(v, "mass_flux_stations", t.mass_flux_stations);
        }
        if (j.contains("gauge")) {
            const auto& g = j.at("gauge");
            read(g, "tail_fraction", c.gauge.tail_fraction);
            read(g, "speed", c.gauge.speed);
            read(g, "stations", c.gauge.stations);
            read(g, "noise", c.gauge.noise);
        }
        if (j.contains("output")) {
            const auto& o = j.at("output");
            read(o, "dir", c.output.dir);
            read(o, "format", c.output.format);
            read(o, "plot_script", c.output.plot_script);
        }
        read(j, "amplitudes", c.amplitudes);
        read(j, "seed", c.seed);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::InputFormat, std::string("configuration: ") + e.what());
    }
}

} // namespace dynpress::cli
