#include "commands.hpp"

#include "run_config.hpp"

#include "dynpress/error.hpp"
#include "dynpress/flow_fields.hpp"
#include "dynpress/gauge.hpp"
#include "dynpress/verifier.hpp"
#include "dynpress/wave_solver.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

namespace dynpress::cli {

namespace {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

constexpr const char* kOutputDirVariable = "DYNPRESS_OUTPUT_DIR";

/// Values given on the command line; unset ones leave the config alone.
struct Overrides {
    std::string config_path;
    std::optional<std::string> output_dir;
    std::optional<double> gravity, depth, p_atm;
    std::optional<double> amplitude, froude, half_length, tol, cap;
    std::optional<int> modes;
    std::optional<std::vector<double>> stations;
    std::optional<int> n_stations, levels;
    std::optional<std::string> format;
    bool plot_script = false;
    std::optional<double> noise_floor, symmetry_tol, fd_step, bernoulli_tol, mass_flux_tol;
    std::optional<double> tail_fraction, speed;
    std::optional<std::vector<double>> amplitudes;
    std::optional<std::uint64_t> seed;
    std::string solution_path;
    std::string trace_path;
    std::optional<std::string> output;
};

void add_environment(CLI::App* app, Overrides& o) {
    app->add_option("--config", o.config_path, "JSON run configuration; flags take precedence");
    app->add_option("--output-dir", o.output_dir, "directory for artifacts (else $DYNPRESS_OUTPUT_DIR, else config)");
    app->add_option("--gravity", o.gravity, "g [m/s^2]");
    app->add_option("--depth", o.depth, "undisturbed depth d [m]");
    app->add_option("--p-atm", o.p_atm, "atmospheric pressure per unit density");
}

void add_verifier(CLI::App* app, Overrides& o) {
    app->add_option("--noise-floor", o.noise_floor, "strictness floor in units of g d");
    app->add_option("--symmetry-tol", o.symmetry_tol, "mirrored-pair tolerance in units of c");
    app->add_option("--fd-step", o.fd_step, "finite-difference step in units of d");
    app->add_option("--bernoulli-tol", o.bernoulli_tol, "Bernoulli constant tolerance in units of g d");
    app->add_option("--mass-flux-tol", o.mass_flux_tol, "relative mass-flux spread tolerance");
}

ojson read_json_file(const std::string& path, const char* what) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::InputFormat, fmt::format("cannot open {} '{}'", what, path));
    try {
        return ojson::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::InputFormat, fmt::format("{} '{}': {}", what, path, e.what()));
    }
}

RunConfig effective_config(const Overrides& o) {
    RunConfig c;
    if (!o.config_path.empty()) from_json(read_json_file(o.config_path, "config"), c);
    if (const char* env = std::getenv(kOutputDirVariable); env != nullptr && *env != '\0') c.output.dir = env;
    if (o.output_dir) c.output.dir = *o.output_dir;
    if (o.gravity) c.gravity = *o.gravity;
    if (o.depth) c.depth = *o.depth;
    if (o.p_atm) c.p_atm = *o.p_atm;
    if (o.amplitude) c.solver.amplitude = *o.amplitude;
    if (o.froude) c.solver.froude = *o.froude;
    if (o.half_length) c.solver.half_length = *o.half_length;
    if (o.tol) c.solver.tol = *o.tol;
    if (o.cap) c.solver.amplitude_cap = *o.cap;
    if (o.modes) c.solver.modes = *o.modes;
    if (o.stations) c.grid.stations = *o.stations;
    if (o.n_stations) c.grid.n_stations = *o.n_stations;
    if (o.levels) c.grid.levels = *o.levels;
    if (o.format) c.output.format = *o.format;
    if (o.plot_script) c.output.plot_script = true;
    if (o.noise_floor) c.verifier.noise_floor = *o.noise_floor;
    if (o.symmetry_tol) c.verifier.symmetry_tol = *o.symmetry_tol;
    if (o.fd_step) c.verifier.fd_step = *o.fd_step;
    if (o.bernoulli_tol) c.verifier.bernoulli_tol = *o.bernoulli_tol;
    if (o.mass_flux_tol) c.verifier.mass_flux_tol = *o.mass_flux_tol;
    if (o.tail_fraction) c.gauge.tail_fraction = *o.tail_fraction;
    if (o.speed) c.gauge.speed = *o.speed;
    if (o.amplitudes) c.amplitudes = *o.amplitudes;
    if (o.seed) c.seed = *o.seed;
    return c;
}

fs::path artifact_path(const RunConfig& c, const std::optional<std::string>& explicit_path, const std::string& name) {
    if (explicit_path) return fs::path(*explicit_path);
    return fs::path(c.output.dir) / name;
}

void write_text(const fs::path& path, const std::string& text) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::InvalidInput, fmt::format("cannot write '{}'", path.string()));
    out << text;
}

ojson to_ordered(const nlohmann::json& j) { return ojson::parse(j.dump()); }

WaveSolution load_solution(const std::string& path) {
    if (path.empty()) throw Error(ErrorCode::InvalidInput, "--solution is required");
    const ojson doc = read_json_file(path, "solution");
    const ojson& body = doc.contains("solution") ? doc.at("solution") : doc;
    const nlohmann::json plain = nlohmann::json::parse(body.dump());
    return plain.get<WaveSolution>();
}

ojson with_config(const RunConfig& c, const char* key, ojson payload) {
    ojson doc;
    doc["config"] = c;
    doc[key] = std::move(payload);
    return doc;
}

int cmd_solve(const RunConfig& c, const Overrides& o, std::ostream& out) {
    const WaveSolution sol = solve_wave(c.request());
    const fs::path path = artifact_path(c, o.output, "solution.json");
    write_text(path, with_config(c, "solution", to_ordered(nlohmann::json(sol))).dump(2) + "\n");
    out << fmt::format("a = {:.10g} m, c = {:.12g} m/s, F = {:.12g}, N = {}, L = {:.6g} m -> {}\n", sol.amplitude,
                       sol.speed, sol.froude, sol.modes(), sol.truncation_length(), path.string());
    for (const auto& w : sol.diagnostics.warnings) out << "warning: " << w << '\n';
    return kOk;
}

std::string plot_script(const std::string& csv_name) {
    std::ostringstream s;
    s << "# gnuplot: dynamic pressure and stream function from " << csv_name << "\n"
      << "set datafile separator ','\n"
      << "set key autotitle columnhead\n"
      << "set xlabel 'x [m]'\nset ylabel 'y [m]'\n"
      << "set palette rgbformulae 33,13,10\n"
      << "set term pngcairo size 1200,500\n"
      << "set output 'pressure.png'\n"
      << "plot '" << csv_name << "' using 1:2:7 with points pt 7 ps 0.5 palette title 'p'\n"
      << "set output 'stream.png'\n"
      << "plot '" << csv_name << "' using 1:2:3 with points pt 7 ps 0.5 palette title 'psi'\n";
    return s.str();
}

int cmd_fields(const RunConfig& c, const Overrides& o, std::ostream& out) {
    const WaveSolution sol = load_solution(o.solution_path);
    const FlowField field(sol);
    GridSpec spec;
    if (!c.grid.stations.empty()) {
        spec.stations = c.grid.stations;
        spec.levels = {c.grid.levels};
    } else {
        spec = GridSpec::uniform(0.0, field.truncation_length(), c.grid.n_stations, c.grid.levels);
    }
    const FieldGrid grid = sample_grid(field, spec);
    if (c.output.format != "csv" && c.output.format != "json")
        throw Error(ErrorCode::InvalidInput, fmt::format("unknown format '{}'; use csv or json", c.output.format));

    const std::string name = c.output.format == "csv" ? "fields.csv" : "fields.json";
    const fs::path path = artifact_path(c, o.output, name);
    if (c.output.format == "csv") {
        std::ostringstream csv;
        write_csv(csv, grid);
        write_text(path, csv.str());
        // CSV has no room for metadata; the configuration goes next to it.
        fs::path meta = path;
        meta.replace_extension(".config.json");
        write_text(meta, ojson{{"config", c}, {"data", path.filename().string()}}.dump(2) + "\n");
    } else {
        write_text(path, with_config(c, "fields", to_ordered(nlohmann::json(grid))).dump(2) + "\n");
    }
    if (c.output.plot_script) {
        fs::path script = path;
        script.replace_extension(".gp");
        write_text(script, plot_script(path.filename().string()));
    }
    out << fmt::format("{} samples on {} stations -> {}\n", grid.samples.size(), spec.stations.size(), path.string());
    return kOk;
}

int cmd_verify(const RunConfig& c, const Overrides& o, std::ostream& out, std::ostream& err) {
    const WaveSolution sol = load_solution(o.solution_path);
    const VerificationReport report = verify_all(sol, c.verifier);
    const fs::path path = artifact_path(c, o.output, "verification.json");
    write_text(path, with_config(c, "report", ojson(report)).dump(2) + "\n");
    write_table(out, report);
    if (report.overall == Status::Fail) return kVerificationFailed;
    if (report.overall == Status::Indeterminate) err << "warning: flat state, strict properties are indeterminate\n";
    return kOk;
}

int cmd_estimate_height(const RunConfig& c, const Overrides& o, std::ostream& out) {
    if (o.trace_path.empty()) throw Error(ErrorCode::InvalidInput, "--trace is required");
    std::ifstream in(o.trace_path);
    if (!in) throw Error(ErrorCode::InputFormat, fmt::format("cannot open trace '{}'", o.trace_path));
    const Environment env = c.environment();
    GaugeTrace trace = read_trace_csv(in, env);
    if (trace.abscissa == Abscissa::Time && c.gauge.speed) trace = positions_from_times(trace, *c.gauge.speed);
    const HeightBound bound = height_lower_bound(trace, env, c.gauge.tail_fraction);
    ojson doc = bound;
    doc["config"] = c;
    const fs::path path = artifact_path(c, o.output, "height_bound.json");
    write_text(path, doc.dump(2) + "\n");
    out << ojson(bound).dump(2) << '\n';
    return kOk;
}

int cmd_sweep(const RunConfig& c, const Overrides& o, std::ostream& out) {
    WaveRequest base = c.request();
    base.froude.reset();
    // Reject out-of-range amplitudes before spending time on the others.
    for (double a : c.amplitudes) {
        if (!(a > 0.0)) throw Error(ErrorCode::AmplitudeOutOfRange, fmt::format("amplitude {} must be positive", a));
        if (a / c.depth > c.solver.amplitude_cap)
            throw Error(ErrorCode::AmplitudeCapExceeded,
                        fmt::format("a/d = {} exceeds the amplitude cap {}", a / c.depth, c.solver.amplitude_cap));
    }
    const std::vector<WaveSolution> solutions =
        c.amplitudes.empty() ? std::vector<WaveSolution>{} : continue_amplitude(base, c.amplitudes);

    std::ostringstream csv;
    csv << "a,F,c,m,C,p_crest,h_lb,status\n";
    ojson rows = ojson::array();
    bool failed = false;
    for (const WaveSolution& sol : solutions) {
        const FlowField field(sol);
        const double p_crest = field.dynamic_pressure({0.0, field.surface_elevation(0.0)});
        std::vector<double> stations;
        const int n = std::max(c.gauge.stations, 8);
        for (int i = 0; i < n; ++i)
            stations.push_back(-sol.truncation_length() + 2.0 * sol.truncation_length() * i / (n - 1));
        const GaugeTrace trace = synth_trace(sol, stations, c.gauge.noise, c.seed);
        const HeightBound bound = height_lower_bound(trace, sol.env, c.gauge.tail_fraction);
        const VerificationReport report = verify_all(sol, c.verifier);
        if (report.overall == Status::Fail) failed = true;
        const std::string status(to_string(report.overall));
        csv << fmt::format("{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{}\n", sol.amplitude, sol.froude,
                           sol.speed, sol.mass_flux, sol.bernoulli_constant, p_crest, bound.h_lb, status);
        rows.push_back(ojson{{"a", sol.amplitude},
                             {"F", sol.froude},
                             {"c", sol.speed},
                             {"m", sol.mass_flux},
                             {"C", sol.bernoulli_constant},
                             {"p_crest", p_crest},
                             {"h_lb", bound.h_lb},
                             {"status", status},
                             {"report", report}});
    }
    const fs::path csv_path = artifact_path(c, o.output, "sweep.csv");
    fs::path json_path = csv_path;
    json_path.replace_extension(".json");
    write_text(csv_path, csv.str());
    write_text(json_path, with_config(c, "rows", rows).dump(2) + "\n");
    out << csv.str();
    return failed ? kVerificationFailed : kOk;
}

int exit_code_for(ErrorCode code) { return code == ErrorCode::NoConvergence ? kNoConvergence : kInvalidInput; }

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Pressure beneath steady solitary water waves: solve, sample, verify, estimate"};
    app.name(args.empty() ? "dynpress" : args.front());
    app.require_subcommand(1);
    Overrides o;

    CLI::App* solve = app.add_subcommand("solve", "compute a solitary wave");
    add_environment(solve, o);
    solve->add_option("--amplitude", o.amplitude, "crest elevation a [m]");
    solve->add_option("--froude", o.froude, "Froude number c / sqrt(g d)");
    solve->add_option("--modes", o.modes, "cosine modes N (power of two >= 64)");
    solve->add_option("--half-length", o.half_length, "truncation length L [m]");
    solve->add_option("--tol", o.tol, "nondimensional residual tolerance");
    solve->add_option("--cap", o.cap, "largest admissible a/d");
    solve->add_option("-o,--output", o.output, "solution file");

    CLI::App* fields = app.add_subcommand("fields", "sample the flow on a boundary-fitted grid");
    add_environment(fields, o);
    fields->add_option("--solution", o.solution_path, "solution JSON")->required();
    fields->add_option("--stations", o.stations, "x positions [m]")->delimiter(',');
    fields->add_option("--n-stations", o.n_stations, "evenly spaced stations over [0, L]");
    fields->add_option("--levels", o.levels, "nodes per station");
    fields->add_option("--format", o.format, "csv or json");
    fields->add_flag("--plot-script", o.plot_script, "also write a gnuplot script");
    fields->add_option("-o,--output", o.output, "output file");

    CLI::App* verify = app.add_subcommand("verify", "check the pressure properties of a solution");
    add_environment(verify, o);
    add_verifier(verify, o);
    verify->add_option("--solution", o.solution_path, "solution JSON")->required();
    verify->add_option("-o,--output", o.output, "report file");

    CLI::App* estimate = app.add_subcommand("estimate-height", "lower bound on wave height from a bed pressure trace");
    add_environment(estimate, o);
    estimate->add_option("--trace", o.trace_path, "CSV with header x,pressure or t,pressure")->required();
    estimate->add_option("--tail-fraction", o.tail_fraction, "fraction of samples at each end used for P_inf");
    estimate->add_option("--speed", o.speed, "wave speed, converts t to x = -c t");
    estimate->add_option("-o,--output", o.output, "bound file");

    CLI::App* sweep = app.add_subcommand("sweep", "continuation over amplitudes with verification");
    add_environment(sweep, o);
    add_verifier(sweep, o);
    sweep->add_option("--amplitudes", o.amplitudes, "comma-separated crest elevations [m]")->delimiter(',');
    sweep->add_option("--modes", o.modes, "cosine modes N");
    sweep->add_option("--tol", o.tol, "nondimensional residual tolerance");
    sweep->add_option("--cap", o.cap, "largest admissible a/d");
    sweep->add_option("--seed", o.seed, "noise seed for the synthetic gauge traces");
    sweep->add_option("-o,--output", o.output, "CSV file; the JSON goes next to it");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    if (!reversed.empty()) reversed.pop_back();
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << e.what() << '\n';
        return kInvalidInput;
    }

    try {
        const RunConfig c = effective_config(o);
        if (solve->parsed()) return cmd_solve(c, o, out);
        if (fields->parsed()) return cmd_fields(c, o, out);
        if (verify->parsed()) return cmd_verify(c, o, out, err);
        if (estimate->parsed()) return cmd_estimate_height(c, o, out);
        if (sweep->parsed()) return cmd_sweep(c, o, out);
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return exit_code_for(e.code());
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kInvalidInput;
    }
    return kInvalidInput;
}

} // namespace dynpress::cli
