// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit status
// when any criterion fails.

#include "commands.hpp"

#include "dynpress/cosine_series.hpp"
#include "dynpress/error.hpp"
#include "dynpress/flow_fields.hpp"
#include "dynpress/gauge.hpp"
#include "dynpress/verifier.hpp"
#include "dynpress/wave_solver.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

using namespace dynpress;

namespace {

namespace fs = std::filesystem;

struct Outcome {
    bool pass = true;
    std::vector<std::string> notes;

    void require(bool ok, const std::string& note) {
        if (!ok) pass = false;
        notes.push_back(fmt::format("{} {}", ok ? "ok  " : "FAIL", note));
    }
    void info(const std::string& note) { notes.push_back("info " + note); }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

const Environment kUnit(1.0, 1.0, 0.0);
const Environment kEarth(9.81, 1.0, 0.0);

/// Solutions shared between criteria, g = 9.81, d = 1.
std::map<double, WaveSolution>& earth_cache() {
    static std::map<double, WaveSolution> cache;
    return cache;
}

const WaveSolution& earth_solution(double a) {
    auto& cache = earth_cache();
    if (auto it = cache.find(a); it != cache.end()) return it->second;
    WaveRequest r;
    r.env = kEarth;
    r.amplitude = a;
    return cache.emplace(a, solve_wave(r)).first->second;
}

bool holds_outside_tail(const Finding& f) {
    return f.status == Status::Pass || (f.status == Status::Indeterminate && f.tail_only);
}

// Solver consistency with the first-order long-wave profile.
Outcome ac1() {
    Outcome o;
    std::vector<double> errors;
    for (double a : {0.05, 0.025}) {
        WaveRequest r;
        r.env = kUnit;
        r.amplitude = a;
        r.modes = 512;
        r.tol = 1e-12;
        const auto t0 = std::chrono::steady_clock::now();
        const WaveSolution sol = solve_wave(r);
        const double elapsed = seconds_since(t0);
        const FlowField field(sol);
        const KdvProfile kdv = kdv_profile(a, kUnit);
        const double lam = field.truncation_length();
        double worst = 0.0;
        const int n = 4000;
        for (int i = 0; i <= n; ++i) {
            const double x = lam * i / n;
            worst = std::max(worst, std::abs(field.surface_elevation(x) - kdv(x)));
        }
        errors.push_back(worst / a);
        o.require(elapsed < 10.0, fmt::format("a = {}: solve {:.2f} s < 10 s (N = {})", a, elapsed, sol.modes()));
        o.info(fmt::format("a = {}: max|eta - eta_KdV| / a = {:.6e}", a, worst / a));
    }
    const double ratio = errors[0] / errors[1];
    o.require(ratio >= 3.0, fmt::format("error ratio under amplitude halving {:.4f} >= 3", ratio));
    return o;
}

Outcome ac2() {
    Outcome o;
    for (double a : {0.1, 0.3, 0.5}) {
        WaveRequest r;
        r.env = kUnit;
        r.amplitude = a;
        const WaveSolution sol = solve_wave(r);
        const ResidualReport rep = residuals(sol, ProbeSpec{});
        const double tail = std::abs(trough_elevation(sol));
        o.require(rep.bernoulli_surface_residual <= 1e-10,
                  fmt::format("a = {}: Bernoulli residual {:.3e} <= 1e-10", a, rep.bernoulli_surface_residual));
        o.require(rep.kinematic_surface_residual <= 1e-10,
                  fmt::format("a = {}: kinematic residual {:.3e} <= 1e-10", a, rep.kinematic_surface_residual));
        o.require(rep.bed_residual <= 1e-10, fmt::format("a = {}: bed residual {:.3e} <= 1e-10", a, rep.bed_residual));
        o.require(tail <= 1e-10 * a, fmt::format("a = {}: |eta(L)| = {:.3e} <= 1e-10 a", a, tail));
    }
    return o;
}

Outcome ac3() {
    Outcome o;
    for (double a : {0.1, 0.3, 0.5, 0.7}) {
        const auto t0 = std::chrono::steady_clock::now();
        const WaveSolution& sol = earth_solution(a);
        const FlowField field(sol);
        const VerifierConfig cfg;
        const FieldGrid grid = sample_grid(field, GridSpec::uniform(0.0, field.truncation_length(), 201, 41));
        const Finding crest = check_crest_max(grid, cfg);
        const Finding positive = check_positivity(grid, cfg);
        const auto [line, surface] = check_boundary_monotonicity(field, cfg);
        const auto [bed, crest_line] = check_hopf_signs(field, cfg);
        const double elapsed = seconds_since(t0);

        const auto top = std::max_element(grid.samples.begin(), grid.samples.end(),
                                          [](const FieldSample& l, const FieldSample& r) { return l.p < r.p; });
        const bool at_crest = grid.crest_index && static_cast<std::size_t>(top - grid.samples.begin()) == *grid.crest_index;
        o.require(crest.status == Status::Pass && at_crest,
                  fmt::format("a = {}: CREST_MAX {} at crest node", a, to_string(crest.status)));
        o.require(positive.status == Status::Pass,
                  fmt::format("a = {}: POSITIVITY {} (min p = {:.3e})", a, to_string(positive.status), positive.margin));
        for (const Finding* f : {&line, &surface, &bed, &crest_line}) {
            o.require(holds_outside_tail(*f), fmt::format("a = {}: {} {}{}", a, to_string(f->id), to_string(f->status),
                                                          f->tail_only ? " (tail only, x >= 0.8 L)" : ""));
        }
        o.require(elapsed < 120.0, fmt::format("a = {}: {:.1f} s < 120 s", a, elapsed));
    }
    return o;
}

// Own probe set and order estimate; only the stencil evaluation is shared.
Outcome ac4() {
    Outcome o;
    const WaveSolution& sol = earth_solution(0.3);
    const FlowField field(sol);
    const double d = field.depth();
    const double h = 1e-3 * d;
    const double mu = tail_decay_rate(sol.env, sol.speed);
    const double span = std::min(0.5 * field.truncation_length(), std::log(400.0) / mu);
    double coarse = 0.0, fine = 0.0, worst_lap = -INFINITY;
    int probes = 0;
    for (int i = 0; i < 10; ++i) {
        const double x = span * (i + 0.5) / 10.0;
        const double eta = field.surface_elevation(x);
        for (double level : {0.15, 0.3, 0.5, 0.7, 0.85}) {
            const PhysicalPoint pt{x, -d + level * (eta + d)};
            const SuperharmonicProbe ph = superharmonic_probe(field, pt, h);
            const SuperharmonicProbe ph2 = superharmonic_probe(field, pt, h / 2);
            coarse = std::max(coarse, static_cast<double>(std::abs(ph.residual)));
            fine = std::max(fine, static_cast<double>(std::abs(ph2.residual)));
            worst_lap = std::max(worst_lap, static_cast<double>(ph.laplacian));
            ++probes;
        }
    }
    const double order = std::log2(coarse / fine);
    o.require(probes == 50, fmt::format("{} probes", probes));
    o.require(order >= 1.9, fmt::format("order {:.4f} >= 1.9 (max residual {:.3e} -> {:.3e})", order, coarse, fine));
    o.require(worst_lap <= coarse,
              fmt::format("max Delta_h p = {:.3e} <= discretization tolerance {:.3e}", worst_lap, coarse));
    const Finding f = check_superharmonic(field, VerifierConfig{});
    o.require(f.status == Status::Pass, fmt::format("SUPERHARMONIC {}: {}", to_string(f.status), f.diagnostic));
    return o;
}

Outcome ac5() {
    Outcome o;
    for (double a : {0.1, 0.3, 0.5}) {
        const WaveSolution& sol = earth_solution(a);
        const FlowField field(sol);
        const double g = sol.env.gravity(), d = sol.env.depth();
        const Finding bern = check_bernoulli(field, VerifierConfig{});
        const Finding flux = check_mass_flux(field, VerifierConfig{});
        o.require(bern.status == Status::Pass && bern.margin <= 1e-9,
                  fmt::format("a = {}: Bernoulli deviation {:.3e} g d <= 1e-9", a, bern.margin));
        o.require(flux.status == Status::Pass && flux.margin <= 1e-8,
                  fmt::format("a = {}: mass-flux spread {:.3e} <= 1e-8", a, flux.margin));

        double worst = 0.0;
        for (double xi : cosine_nodes(static_cast<std::size_t>(sol.modes()), sol.half_length)) {
            const double x = field.map().surface_x(xi).first * d;
            const double eta = field.map().surface_y(xi) * d;
            worst = std::max(worst, std::abs(field.dynamic_pressure({x, eta}) - g * eta));
        }
        o.require(worst <= 1e-10 * g * d,
                  fmt::format("a = {}: max |p(x, eta) - g eta| = {:.3e} g d over {} surface nodes", a, worst / (g * d),
                              sol.modes()));
    }
    return o;
}

/// Scans for a sign change and bisects; nullopt when there is none.
std::optional<double> scalar_root(const std::function<double(double)>& f, double lo, double hi, int scan) {
    double a = lo, fa = f(lo);
    for (int i = 1; i <= scan; ++i) {
        const double b = lo + (hi - lo) * i / scan;
        const double fb = f(b);
        if (fa == 0.0) return a;
        if ((fa < 0.0) != (fb < 0.0)) {
            double l = a, r = b, fl = fa;
            for (int k = 0; k < 200; ++k) {
                const double m = 0.5 * (l + r);
                const double fm = f(m);
                if ((fm < 0.0) == (fl < 0.0)) {
                    l = m;
                    fl = fm;
                } else {
                    r = m;
                }
            }
            return 0.5 * (l + r);
        }
        a = b;
        fa = fb;
    }
    return std::nullopt;
}

Outcome ac6() {
    Outcome o;
    for (double a : {0.1, 0.3}) {
        const WaveSolution& sol = earth_solution(a);
        const FlowField field(sol);
        const double g = sol.env.gravity(), d = sol.env.depth(), c = sol.speed;
        const double lam = field.truncation_length();

        // Least-squares slope of log p(x, -d) over the middle of the domain.
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        const int n = 200;
        for (int i = 0; i <= n; ++i) {
            const double x = lam * (0.35 + 0.3 * i / n);
            const double y = std::log(field.dynamic_pressure({x, -d}));
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
        }
        const double m = n + 1;
        const double fitted = -(m * sxy - sx * sy) / (m * sxx - sx * sx);

        const auto tanh_relation = [&](double mu) { return c * c * mu - g * std::tanh(mu * d); };
        const std::optional<double> mu_tanh = scalar_root(tanh_relation, 1e-9 / d, 50.0 / d, 20000);
        if (mu_tanh) {
            const double rel = std::abs(fitted - *mu_tanh) / *mu_tanh;
            o.require(rel <= 0.05, fmt::format("a = {}: fitted rate {:.6f} vs tanh root {:.6f} ({:.3f}%)", a, fitted,
                                               *mu_tanh, 100 * rel));
        } else {
            o.require(false, fmt::format("a = {}: c^2 mu = g tanh(mu d) has no positive root for F = {:.6f} > 1; "
                                         "fitted rate {:.6f} cannot be matched",
                                         a, sol.froude, fitted));
        }
        const auto tan_relation = [&](double mu) { return c * c * mu - g * std::tan(mu * d); };
        const std::optional<double> mu_tan =
            scalar_root(tan_relation, 1e-9 / d, (std::numbers::pi / 2 - 1e-9) / d, 20000);
        if (mu_tan) {
            o.info(fmt::format("a = {}: root of c^2 mu = g tan(mu d) is {:.6f}; fitted rate differs by {:.4f}%", a,
                               *mu_tan, 100 * std::abs(fitted - *mu_tan) / *mu_tan));
        }
    }
    return o;
}

Outcome ac7() {
    Outcome o;
    WaveRequest base;
    base.env = kEarth;
    const std::vector<double> amplitudes{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7};
    const std::vector<WaveSolution> sols = continue_amplitude(base, amplitudes);
    for (const WaveSolution& sol : sols) {
        const FlowField field(sol);
        const double lam = field.truncation_length();
        const double crest = field.surface_elevation(0.0);
        const double g = sol.env.gravity(), d = sol.env.depth();
        std::vector<double> stations;
        for (int i = 0; i < 401; ++i) stations.push_back(-lam + 2.0 * lam * i / 400);

        const HeightBound clean = height_lower_bound(synth_trace(sol, stations, 0.0, 0), sol.env);
        o.require(clean.h_lb > 0.0 && clean.h_lb < crest,
                  fmt::format("a = {:.6g}: noiseless 0 < h_lb = {:.6f} < eta(0) = {:.6f}", sol.amplitude, clean.h_lb, crest));

        int below = 0, negative = 0;
        for (std::uint64_t seed = 0; seed < 100; ++seed) {
            const HeightBound b = height_lower_bound(synth_trace(sol, stations, 1e-3 * g * d, seed), sol.env);
            if (b.h_lb < crest) ++below;
            if (b.negative_bound) ++negative;
        }
        o.require(below >= 99 && negative == 0,
                  fmt::format("a = {:.6g}: noisy h_lb < eta(0) in {}/100 trials, NegativeBound {} times", sol.amplitude,
                              below, negative));
    }
    return o;
}

Outcome ac8() {
    Outcome o;
    const WaveSolution& sol = earth_solution(0.3);
    {
        WaveSolution corrupted = sol;
        double largest = 0.0;
        for (std::size_t k = 1; k < corrupted.surface_spectrum.size(); ++k)
            largest = std::max(largest, std::abs(corrupted.surface_spectrum[k]));
        corrupted.odd_spectrum.assign(corrupted.surface_spectrum.size(), 0.0);
        corrupted.odd_spectrum[1] = 1e-3 * largest;
        const Finding clean = check_symmetry(FlowField(sol));
        const Finding bad = check_symmetry(FlowField(corrupted));
        o.require(clean.status == Status::Pass && bad.status == Status::Fail,
                  fmt::format("SYMMETRY {} -> {} after spectrum corruption", to_string(clean.status),
                              to_string(bad.status)));
    }
    {
        const FlowField field(sol);
        const double offset = 1e-3 * sol.env.gravity() * sol.env.depth();
        const double half = 0.5 * field.truncation_length();
        const auto exact = [&](double x, double y) { return field.dynamic_pressure({x, y}); };
        const auto shifted = [&](double x, double y) { return exact(x, y) + (x > half ? offset : 0.0); };
        const Finding clean = evaluate_decay(field, exact);
        const Finding bad = evaluate_decay(field, shifted);
        o.require(clean.status == Status::Pass && bad.status == Status::Fail,
                  fmt::format("DECAY {} -> {} after tail offset", to_string(clean.status), to_string(bad.status)));
    }
    {
        std::ostringstream out, err;
        const int code = cli::run({"dynpress", "solve", "--froude", "0.9", "--output-dir",
                                   (fs::temp_directory_path() / "dynpress-ac8").string()},
                                  out, err);
        const bool cites = err.str().find("supercritical") != std::string::npos;
        o.require(code == 3 && cites, fmt::format("F = 0.9 exits {} ({})", code, cites ? "cites supercriticality"
                                                                                        : "message: " + err.str()));
    }
    return o;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Outcome ac9() {
    Outcome o;
    const fs::path dir = fs::temp_directory_path() / "dynpress-ac9";
    fs::remove_all(dir);
    fs::create_directories(dir);
    const fs::path config = dir / "config.json";
    std::ofstream(config) << R"({"environment": {"gravity": 9.81, "depth": 1.0},
 "amplitudes": [0.1, 0.2], "seed": 7, "gauge": {"noise": 0.001},
 "output": {"dir": ")" << (dir / "out").string() << R"("}})";

    std::vector<std::pair<std::string, std::string>> runs;
    for (int i = 0; i < 2; ++i) {
        std::ostringstream out, err;
        const int code = cli::run({"dynpress", "sweep", "--config", config.string()}, out, err);
        o.require(code == 0, fmt::format("run {} exits {}", i + 1, code));
        runs.emplace_back(slurp(dir / "out" / "sweep.csv"), slurp(dir / "out" / "sweep.json"));
    }
    o.require(!runs[0].first.empty() && runs[0].first == runs[1].first,
              fmt::format("sweep.csv byte-identical ({} bytes)", runs[0].first.size()));
    o.require(!runs[0].second.empty() && runs[0].second == runs[1].second,
              fmt::format("sweep.json byte-identical ({} bytes)", runs[0].second.size()));
    return o;
}

} // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"AC1 solver consistency, small amplitude", ac1},
        {"AC2 governing-system residuals", ac2},
        {"AC3 maximum-principle suite", ac3},
        {"AC4 superharmonic identity", ac4},
        {"AC5 conservation and surface identity", ac5},
        {"AC6 decay rate", ac6},
        {"AC7 height lower bound", ac7},
        {"AC8 negative controls", ac8},
        {"AC9 determinism", ac9},
    };
    int failures = 0;
    for (const auto& [name, check] : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome result;
        try {
            result = check();
        } catch (const std::exception& e) {
            result.require(false, std::string("exception: ") + e.what());
        }
        if (!result.pass) ++failures;
        std::cout << fmt::format("{} {}  [{:.1f} s]\n", result.pass ? "PASS" : "FAIL", name, seconds_since(t0));
        for (const auto& note : result.notes) std::cout << "     " << note << '\n';
        std::cout.flush();
    }
    std::cout << fmt::format("{} of {} criteria passed\n", criteria.size() - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
