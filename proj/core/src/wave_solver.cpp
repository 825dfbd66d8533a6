#include "dynpress/wave_solver.hpp"

#include "dynpress/conformal_map.hpp"
#include "dynpress/cosine_series.hpp"
#include "dynpress/error.hpp"

#include <Eigen/Dense>
#include <boost/math/tools/roots.hpp>
#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>
#include <utility>

namespace dynpress {

namespace {

constexpr double kTailElevationTarget = 1e-10; // |η(Λ)| / a
constexpr double kTailSpectrumTarget = 1e-8;
constexpr double kTailRefineTarget = 1e-13;
constexpr int kMaxRefinedModes = 4096;
constexpr int kMaxModes = 8192;
constexpr double kPetviashviliLimit = 0.35;   // a/d
constexpr double kContinuationLimit = 0.5;    // a/d
constexpr double kContinuationStart = 0.3;
constexpr double kContinuationStep = 0.1;
constexpr int kMaxPetviashvili = 200;
constexpr int kMaxNewton = 50;
constexpr int kMaxExtensions = 4;

std::string fmt_double(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

/// Third-order amplitude-speed relation, used only for initial guesses.
double froude_estimate(double a) { return std::sqrt(1.0 + a - a * a / 20.0 - 3.0 * a * a * a / 70.0); }

double coth(double x) { return 1.0 / std::tanh(x); }

/// 1 / sinh²(x) without overflow.
double csch2(double x) {
    const double e = std::exp(-2.0 * x);
    return 4.0 * e / ((1.0 - e) * (1.0 - e));
}

/// Discretization of one half period.
struct Grid {
    Grid(int n, double half_length)
        : n(n), half_length(half_length), transform(static_cast<std::size_t>(n)),
          nodes(cosine_nodes(static_cast<std::size_t>(n), half_length)),
          k(cosine_wavenumbers(static_cast<std::size_t>(n), half_length)) {}

    int n;
    double half_length;
    CosineTransform transform;
    std::vector<double> nodes;
    std::vector<double> k;
};

struct Iterate {
    std::vector<double> coef;
    double froude = 0.0;
};

struct SurfaceFields {
    double h = 1.0;
    std::vector<double> y, a, b, j, residual;
    double max_residual = 0.0;
};

/// Y, A = X_ξ = 1 + 𝒦Y, B = Y_ξ, J = A² + B² and the Bernoulli residual at the nodes.
SurfaceFields surface_fields(const Grid& grid, const Iterate& it) {
    const std::size_t n = it.coef.size();
    SurfaceFields s;
    s.h = 1.0 + it.coef[0];
    std::vector<double> kc(n, 0.0), bc(n, 0.0);
    for (std::size_t m = 1; m < n; ++m) {
        kc[m] = it.coef[m] * grid.k[m] * coth(grid.k[m] * s.h);
        bc[m] = -it.coef[m] * grid.k[m];
    }
    s.y = grid.transform.synthesize(it.coef);
    s.a = grid.transform.synthesize(kc);
    s.b = grid.transform.synthesize_sine(bc);
    s.j.resize(n);
    s.residual.resize(n);
    const double f2 = it.froude * it.froude;
    for (std::size_t i = 0; i < n; ++i) {
        s.a[i] += 1.0;
        s.j[i] = s.a[i] * s.a[i] + s.b[i] * s.b[i];
        s.residual[i] = f2 / (2.0 * s.h * s.h * s.j[i]) + s.y[i] - 0.5 * f2;
        s.max_residual = std::max(s.max_residual, std::abs(s.residual[i]));
    }
    return s;
}

double crest_elevation(const Iterate& it) {
    double sum = 0.0;
    for (double c : it.coef) sum += c;
    return sum;
}

/// Secant iteration for a scalar root starting from x0, x1.
template <class F>
double secant(F&& f, double x0, double x1, double ftol, int max_iter = 40) {
    double f0 = f(x0);
    double f1 = f(x1);
    for (int i = 0; i < max_iter; ++i) {
        if (std::abs(f1) <= ftol || f1 == f0) break;
        const double x2 = x1 - f1 * (x1 - x0) / (f1 - f0);
        x0 = x1;
        f0 = f1;
        x1 = x2;
        f1 = f(x1);
    }
    return x1;
}

struct IterationResult {
    Iterate state;
    int iterations = 0;
    double residual = std::numeric_limits<double>::infinity();
    bool converged = false;
};

/// Petviashvili iteration on the equivalent quadratic (Babenko-type) form
///
///   ((F² - 2s) 𝒦 - 1) Ỹ = Ỹ 𝒦Ỹ + ½ 𝒦(Ỹ²)     (non-constant modes)
///
/// with Y = s + Ỹ. Each step renormalizes by the stabilizing factor M²,
/// chooses F so that the new iterate has crest elevation a, then fixes the
/// mean level s so that Bernoulli holds with the prescribed flux.
IterationResult petviashvili(const Grid& grid, Iterate start, double amplitude, double tol) {
    const std::size_t n = start.coef.size();
    const auto& k = grid.k;
    double s = start.coef[0];
    std::vector<double> yt = start.coef;
    yt[0] = 0.0;
    double f2 = start.froude * start.froude;

    auto kcoth = [&](double h) {
        std::vector<double> kk(n, 0.0);
        for (std::size_t m = 1; m < n; ++m) kk[m] = k[m] * coth(k[m] * h);
        return kk;
    };
    auto weighted_dot = [&](const std::vector<double>& u, const std::vector<double>& v) {
        double acc = 0.0;
        for (std::size_t m = 1; m < n; ++m) acc += u[m] * v[m];
        return acc;
    };

    IterationResult out;
    for (int iter = 0; iter <= kMaxPetviashvili; ++iter) {
        Iterate current{yt, std::sqrt(f2)};
        current.coef[0] = s;
        const SurfaceFields fields = surface_fields(grid, current);
        out.state = current;
        out.iterations = iter;
        out.residual = std::max(fields.max_residual, std::abs(crest_elevation(current) - amplitude));
        if (!std::isfinite(out.residual)) break;
        if (out.residual <= 0.01 * tol) {
            out.converged = true;
            break;
        }
        if (iter == kMaxPetviashvili) break;

        const double h = 1.0 + s;
        const std::vector<double> kk = kcoth(h);
        const std::vector<double> yn = grid.transform.synthesize(yt);
        std::vector<double> kyc(n);
        for (std::size_t m = 0; m < n; ++m) kyc[m] = kk[m] * yt[m];
        const std::vector<double> ky = grid.transform.synthesize(kyc);
        std::vector<double> prod(n), sq(n);
        for (std::size_t i = 0; i < n; ++i) {
            prod[i] = yn[i] * ky[i];
            sq[i] = yn[i] * yn[i];
        }
        const std::vector<double> prod_c = grid.transform.analyze(prod);
        const std::vector<double> sq_c = grid.transform.analyze(sq);
        std::vector<double> quad(n, 0.0);
        for (std::size_t m = 1; m < n; ++m) quad[m] = prod_c[m] + 0.5 * kk[m] * sq_c[m];

        const double nq = weighted_dot(yt, quad);
        auto step = [&](double f2_trial) {
            std::vector<double> next(n, 0.0);
            double lin = 0.0;
            for (std::size_t m = 1; m < n; ++m) lin += yt[m] * ((f2_trial - 2.0 * s) * kk[m] - 1.0) * yt[m];
            const double factor = nq != 0.0 ? lin / nq : 1.0;
            for (std::size_t m = 1; m < n; ++m)
                next[m] = factor * factor * quad[m] / ((f2_trial - 2.0 * s) * kk[m] - 1.0);
            return next;
        };
        auto amplitude_mismatch = [&](double f2_trial) {
            const std::vector<double> next = step(f2_trial);
            double sum = s;
            for (std::size_t m = 1; m < n; ++m) sum += next[m];
            return sum - amplitude;
        };
        f2 = secant(amplitude_mismatch, f2, f2 * (1.0 + 1e-3), 1e-16 * std::max(amplitude, 1e-3));
        yt = step(f2);

        // Flux constraint: mean over ξ of (F² - 2Y) J h² / F² must equal one.
        auto flux_mismatch = [&](double level) {
            Iterate trial{yt, std::sqrt(f2)};
            trial.coef[0] = level;
            const SurfaceFields sf = surface_fields(grid, trial);
            const double hh = 1.0 + level;
            double mean = 0.0;
            for (std::size_t i = 0; i < n; ++i) mean += (f2 - 2.0 * sf.y[i]) * sf.j[i];
            mean /= static_cast<double>(n);
            return mean * hh * hh / f2 - 1.0;
        };
        s = secant(flux_mismatch, s, s + 1e-6, 1e-17);
        if (!std::isfinite(s) || !std::isfinite(f2) || f2 <= 1.0) break;
    }
    return out;
}

/// Newton iteration on the N collocation equations plus Y(0) = a, unknowns
/// (a_0 .. a_{N-1}, F), with the Jacobian assembled from exact spectral
/// derivatives and a backtracking line search on the max-norm residual.
IterationResult newton(const Grid& grid, Iterate start, double amplitude, double tol) {
    const int n = grid.n;
    const auto& k = grid.k;
    // cos(k_m ξ_j) = cos(π m (2j + 1) / 2N) from a table of 4N entries.
    const int period = 4 * n;
    std::vector<double> cos_table(static_cast<std::size_t>(period));
    std::vector<double> sin_table(static_cast<std::size_t>(period));
    for (int i = 0; i < period; ++i) {
        const double angle = std::numbers::pi * static_cast<double>(i) / (2.0 * n);
        cos_table[static_cast<std::size_t>(i)] = std::cos(angle);
        sin_table[static_cast<std::size_t>(i)] = std::sin(angle);
    }

    auto merit = [&](const Iterate& it, SurfaceFields* fields) {
        SurfaceFields f = surface_fields(grid, it);
        const double m = std::max(f.max_residual, std::abs(crest_elevation(it) - amplitude));
        if (fields != nullptr) *fields = std::move(f);
        return std::isfinite(m) ? m : std::numeric_limits<double>::infinity();
    };

    IterationResult out;
    out.state = std::move(start);
    SurfaceFields fields;
    out.residual = merit(out.state, &fields);
    Eigen::MatrixXd jac(n + 1, n + 1);
    Eigen::VectorXd rhs(n + 1);

    for (int iter = 0; iter < kMaxNewton; ++iter) {
        out.iterations = iter;
        if (out.residual <= 0.01 * tol) {
            out.converged = true;
            return out;
        }
        const auto& coef = out.state.coef;
        const double h = fields.h;
        const double f = out.state.froude;
        const double f2 = f * f;

        std::vector<double> dkh(static_cast<std::size_t>(n), 0.0);
        for (int m = 1; m < n; ++m)
            dkh[static_cast<std::size_t>(m)] = -coef[static_cast<std::size_t>(m)] * k[static_cast<std::size_t>(m)] *
                                               k[static_cast<std::size_t>(m)] * csch2(k[static_cast<std::size_t>(m)] * h);
        const std::vector<double> da_dh = grid.transform.synthesize(dkh);

        std::vector<double> kcoth(static_cast<std::size_t>(n), 0.0);
        for (int m = 1; m < n; ++m)
            kcoth[static_cast<std::size_t>(m)] = k[static_cast<std::size_t>(m)] * coth(k[static_cast<std::size_t>(m)] * h);

        for (int j = 0; j < n; ++j) {
            const auto jj = static_cast<std::size_t>(j);
            const double aj = fields.a[jj];
            const double bj = fields.b[jj];
            const double w = -f2 / (2.0 * h * h * fields.j[jj] * fields.j[jj]);
            const int stride = 2 * j + 1;
            jac(j, 0) = 1.0 + w * 2.0 * aj * da_dh[jj] - f2 / (h * h * h * fields.j[jj]);
            int idx = 0;
            for (int m = 1; m < n; ++m) {
                idx += stride;
                if (idx >= period) idx -= period;
                const auto mm = static_cast<std::size_t>(m);
                const double c = cos_table[static_cast<std::size_t>(idx)];
                const double sn = sin_table[static_cast<std::size_t>(idx)];
                jac(j, m) = c + w * (2.0 * aj * kcoth[mm] * c - 2.0 * bj * k[mm] * sn);
            }
            jac(j, n) = f / (h * h * fields.j[jj]) - f;
            rhs(j) = -fields.residual[jj];
        }
        for (int m = 0; m < n; ++m) jac(n, m) = 1.0;
        jac(n, n) = 0.0;
        rhs(n) = -(crest_elevation(out.state) - amplitude);

        const Eigen::VectorXd delta = jac.partialPivLu().solve(rhs);
        if (!delta.allFinite()) break;

        double lambda = 1.0;
        bool accepted = false;
        for (int ls = 0; ls < 12; ++ls, lambda *= 0.5) {
            Iterate trial = out.state;
            for (int m = 0; m < n; ++m) trial.coef[static_cast<std::size_t>(m)] += lambda * delta(m);
            trial.froude += lambda * delta(n);
            SurfaceFields trial_fields;
            const double r = merit(trial, &trial_fields);
            if (r < out.residual) {
                const double previous = out.residual;
                out.state = std::move(trial);
                fields = std::move(trial_fields);
                out.residual = r;
                accepted = true;
                // Round-off floor: no longer contracting and already within tolerance.
                if (r <= tol && r > 0.5 * previous) {
                    out.iterations = iter + 1;
                    out.converged = true;
                    return out;
                }
                break;
            }
        }
        if (!accepted) {
            out.iterations = iter + 1;
            out.converged = out.residual <= tol;
            return out;
        }
    }
    out.iterations = kMaxNewton;
    out.converged = out.residual <= tol;
    return out;
}

Iterate kdv_guess(const Grid& grid, double amplitude) {
    const double kappa = std::sqrt(0.75 * amplitude);
    std::vector<double> y(static_cast<std::size_t>(grid.n));
    for (int j = 0; j < grid.n; ++j) {
        const double sech = 1.0 / std::cosh(kappa * grid.nodes[static_cast<std::size_t>(j)]);
        y[static_cast<std::size_t>(j)] = amplitude * sech * sech;
    }
    return Iterate{grid.transform.analyze(y), froude_estimate(amplitude)};
}

/// Resamples a previous solution onto a (possibly different) grid. Beyond the
/// old half period the surface is continued with its end value.
Iterate resample(const Grid& grid, const WaveSolution& seed) {
    const ConformalMap<double> map(seed.surface_spectrum, {}, seed.half_length);
    const double end = map.surface_y(seed.half_length);
    std::vector<double> y(static_cast<std::size_t>(grid.n));
    for (int j = 0; j < grid.n; ++j) {
        const double xi = grid.nodes[static_cast<std::size_t>(j)];
        y[static_cast<std::size_t>(j)] = xi <= seed.half_length ? map.surface_y(xi) : end;
    }
    return Iterate{grid.transform.analyze(y), seed.froude};
}

struct FixedDomainResult {
    Iterate state;
    SolverDiagnostics diagnostics;
};

IterationResult run_method(const Grid& grid, const Iterate& start, double amplitude, double tol,
                           IterationMethod method, std::string& label) {
    const bool use_petviashvili =
        method == IterationMethod::Petviashvili ||
        (method == IterationMethod::Automatic && amplitude <= kPetviashviliLimit);
    if (use_petviashvili) {
        IterationResult r = petviashvili(grid, start, amplitude, tol);
        if (r.converged) {
            label = "petviashvili";
            r.state.froude = std::abs(r.state.froude);
            return r;
        }
        // Stalled or diverged: polish with Newton from the best available
        // state, else restart Newton from the initial guess.
        label = "petviashvili+newton";
        IterationResult polished;
        if (std::isfinite(r.residual)) polished = newton(grid, r.state, amplitude, tol);
        if (!polished.converged) {
            const int spent = polished.iterations;
            polished = newton(grid, start, amplitude, tol);
            polished.iterations += spent;
        }
        polished.iterations += r.iterations;
        polished.state.froude = std::abs(polished.state.froude);
        return polished;
    }
    label = "newton";
    IterationResult r = newton(grid, start, amplitude, tol);
    r.state.froude = std::abs(r.state.froude);
    return r;
}

/// Solves at fixed (N, Λ), using amplitude continuation above the limit.
FixedDomainResult solve_fixed_domain(const Grid& grid, double amplitude, double tol, IterationMethod method,
                                     const Iterate* seed) {
    FixedDomainResult out;
    std::string label;

    const bool continuation = amplitude > kContinuationLimit &&
                              (seed == nullptr || amplitude - crest_elevation(*seed) > kContinuationStep + 1e-12);
    if (!continuation) {
        const Iterate start = seed != nullptr ? *seed : kdv_guess(grid, amplitude);
        IterationResult r = run_method(grid, start, amplitude, tol, method, label);
        out.state = std::move(r.state);
        out.diagnostics.iterations = r.iterations;
        out.diagnostics.residual = r.residual;
        out.diagnostics.converged = r.converged;
        out.diagnostics.method = label;
        return out;
    }

    // Amplitude continuation with a secant predictor and adaptive step.
    double a_prev = seed != nullptr ? crest_elevation(*seed) : kContinuationStart;
    IterationResult base;
    if (seed != nullptr) {
        base.state = *seed;
        base.converged = true;
    } else {
        base = run_method(grid, kdv_guess(grid, a_prev), a_prev, tol, method, label);
    }
    int total = base.iterations;
    int steps = 1;
    if (!base.converged) {
        out.state = base.state;
        out.diagnostics.iterations = total;
        out.diagnostics.residual = base.residual;
        out.diagnostics.converged = false;
        out.diagnostics.method = "continuation";
        out.diagnostics.continuation_steps = steps;
        return out;
    }
    std::optional<std::pair<double, Iterate>> older;
    Iterate current = base.state;
    double step = kContinuationStep;
    IterationResult last = base;
    while (a_prev < amplitude) {
        const double a_next = std::min(amplitude, a_prev + step);
        Iterate guess = current;
        if (older) {
            const double t = (a_next - a_prev) / (a_prev - older->first);
            for (std::size_t m = 0; m < guess.coef.size(); ++m)
                guess.coef[m] += t * (current.coef[m] - older->second.coef[m]);
            guess.froude += t * (current.froude - older->second.froude);
        }
        IterationResult r = newton(grid, guess, a_next, tol);
        total += r.iterations;
        ++steps;
        if (!r.converged) {
            step *= 0.5;
            if (step < 1e-3) {
                last = r;
                break;
            }
            continue;
        }
        older = std::make_pair(a_prev, current);
        current = r.state;
        a_prev = a_next;
        last = r;
    }
    out.state = last.state;
    out.diagnostics.iterations = total;
    out.diagnostics.residual = last.residual;
    out.diagnostics.converged = last.converged && std::abs(crest_elevation(last.state) - amplitude) <= tol;
    out.diagnostics.method = "continuation+newton";
    out.diagnostics.continuation_steps = steps;
    return out;
}

WaveSolution package(const Environment& env, const Iterate& state, double half_length, SolverDiagnostics diag) {
    WaveSolution sol;
    sol.env = env;
    const double vscale = critical_speed(env);
    sol.froude = state.froude;
    sol.speed = state.froude * vscale;
    sol.amplitude = crest_elevation(state) * env.depth();
    sol.bernoulli_constant = 0.5 * sol.speed * sol.speed + env.p_atm();
    sol.mass_flux = sol.speed * env.depth();
    sol.half_length = half_length;
    sol.surface_spectrum = state.coef;

    const std::size_t n = state.coef.size();
    const std::size_t tail_start = n - std::max<std::size_t>(1, n / 20);
    double lead = 0.0, tail = 0.0;
    for (std::size_t m = 1; m < n; ++m) {
        lead = std::max(lead, std::abs(state.coef[m]));
        if (m >= tail_start) tail = std::max(tail, std::abs(state.coef[m]));
    }
    diag.tail_ratio = lead > 0.0 ? tail / lead : 0.0;
    if (diag.tail_ratio > kTailSpectrumTarget) {
        diag.truncation_warning = true;
        diag.warnings.push_back("spectrum tail " + fmt_double(diag.tail_ratio) +
                                " of the leading mode; increase the mode count");
    }
    sol.diagnostics = std::move(diag);
    const double a = crest_elevation(state);
    sol.diagnostics.tail_elevation = a > 0.0 ? std::abs(trough_elevation(sol)) / sol.env.depth() / a : 0.0;
    return sol;
}

void validate(const WaveRequest& req) {
    if (!is_power_of_two(req.modes) || req.modes < 64)
        throw Error(ErrorCode::InvalidInput, "modes must be a power of two >= 64, got " + std::to_string(req.modes));
    if (!(req.tol > 0.0)) throw Error(ErrorCode::InvalidInput, "tol must be positive");
    if (req.half_length && !(*req.half_length > 0.0))
        throw Error(ErrorCode::InvalidInput, "half_length must be positive");
    if (!(req.amplitude_cap > 0.0)) throw Error(ErrorCode::InvalidInput, "amplitude cap must be positive");
    if (!req.amplitude && !req.froude) throw Error(ErrorCode::InvalidInput, "either amplitude or froude is required");
    if (req.froude && !(*req.froude > 1.0))
        throw Error(ErrorCode::FroudeSubcritical,
                    "Froude number " + fmt_double(*req.froude) +
                        " <= 1: solitary waves exist only for supercritical speeds c > sqrt(g d)");
    if (req.amplitude) {
        const double rel = *req.amplitude / req.env.depth();
        if (!(rel > 0.0))
            throw Error(ErrorCode::AmplitudeOutOfRange, "amplitude must be positive, got " + fmt_double(*req.amplitude));
        if (rel > req.amplitude_cap)
            throw Error(ErrorCode::AmplitudeCapExceeded, "a/d = " + fmt_double(rel) + " exceeds the amplitude cap " +
                                                             fmt_double(req.amplitude_cap));
    }
}

WaveSolution solve_amplitude(const WaveRequest& req, double rel_amplitude, const WaveSolution* seed) {
    double half_length = req.half_length ? *req.half_length / req.env.depth() : default_half_length(rel_amplitude);
    int modes = req.modes;
    std::optional<WaveSolution> previous;
    WaveSolution result;
    int extensions = 0;
    for (;;) {
        const Grid grid(modes, half_length);
        std::optional<Iterate> start;
        const WaveSolution* warm = previous ? &*previous : seed;
        if (warm != nullptr) start = resample(grid, *warm);
        FixedDomainResult r = solve_fixed_domain(grid, rel_amplitude, req.tol, req.method, start ? &*start : nullptr);
        if (!r.diagnostics.converged) {
            throw Error(ErrorCode::NoConvergence,
                        "a/d = " + fmt_double(rel_amplitude) + ": residual " + fmt_double(r.diagnostics.residual) +
                            " after " + std::to_string(r.diagnostics.iterations) + " iterations (" +
                            r.diagnostics.method + ")");
        }
        result = package(req.env, r.state, half_length, std::move(r.diagnostics));
        // Resolve the spectrum first: an unresolved tail pollutes η(Λ) too.
        const bool coarse = req.refine_modes && result.diagnostics.tail_ratio > kTailRefineTarget &&
                            modes < kMaxRefinedModes;
        const bool short_domain = req.extend_domain && result.diagnostics.tail_elevation >= kTailElevationTarget &&
                                  result.diagnostics.tail_ratio <= kTailSpectrumTarget && extensions < kMaxExtensions &&
                                  modes < kMaxModes;
        if (coarse) {
            modes *= 2;
        } else if (short_domain) {
            ++extensions;
            half_length *= 2.0;
            modes *= 2;
        } else {
            break;
        }
        previous = result;
    }
    if (result.diagnostics.tail_ratio > kTailRefineTarget && !result.diagnostics.truncation_warning) {
        result.diagnostics.warnings.push_back("spectrum tail " + fmt_double(result.diagnostics.tail_ratio) +
                                              " at N = " + std::to_string(modes) +
                                              "; off-node residuals may exceed the tolerance");
    }
    if (result.diagnostics.tail_elevation >= kTailElevationTarget) {
        result.diagnostics.warnings.push_back("|eta(L)|/a = " + fmt_double(result.diagnostics.tail_elevation) +
                                              " exceeds 1e-10; increase the truncation length");
    }
    return result;
}

} // namespace

double WaveSolution::conformal_depth() const {
    return 1.0 + (surface_spectrum.empty() ? 0.0 : surface_spectrum.front());
}

WaveSolution still_water(const Environment& env, double froude, int modes, double half_length) {
    if (!(froude > 0.0)) throw Error(ErrorCode::InvalidInput, "still water needs a positive speed");
    WaveSolution sol;
    sol.env = env;
    sol.froude = froude;
    sol.speed = froude * critical_speed(env);
    sol.amplitude = 0.0;
    sol.bernoulli_constant = 0.5 * sol.speed * sol.speed + env.p_atm();
    sol.mass_flux = sol.speed * env.depth();
    sol.half_length = half_length;
    sol.surface_spectrum.assign(static_cast<std::size_t>(modes), 0.0);
    sol.diagnostics.converged = true;
    sol.diagnostics.method = "still-water";
    return sol;
}

double KdvProfile::operator()(double x) const {
    const double kappa = std::sqrt(3.0 * amplitude / (4.0 * depth * depth * depth));
    const double sech = 1.0 / std::cosh(kappa * x);
    return amplitude * sech * sech;
}

KdvProfile kdv_profile(double amplitude, const Environment& env) {
    if (!(amplitude > 0.0) || amplitude > 0.2 * env.depth())
        throw Error(ErrorCode::AmplitudeOutOfRange,
                    "KdV profile needs 0 < a <= 0.2 d, got a = " + fmt_double(amplitude));
    return KdvProfile{amplitude, env.depth(), std::sqrt(env.gravity() * (env.depth() + amplitude))};
}

double tail_decay_rate(const Environment& env, double speed) {
    const double f2 = speed * speed / (env.gravity() * env.depth());
    if (!(f2 > 1.0))
        throw Error(ErrorCode::FroudeSubcritical, "no exponential decay at or below the critical speed");
    // F² q = tan q, q = μ d, on (0, π/2); g > 0 just above the trivial root q = 0.
    auto g = [f2](double q) { return f2 * q - std::tan(q); };
    const double hi = 0.5 * std::numbers::pi * (1.0 - 1e-15);
    double q_lo = std::min(1e-3, 0.5 * std::sqrt(3.0 * (f2 - 1.0)));
    while (g(q_lo) <= 0.0) q_lo *= 0.5;
    boost::math::tools::eps_tolerance<double> tol(52);
    std::uintmax_t max_iter = 200;
    const auto [a, b] = boost::math::tools::toms748_solve(g, q_lo, hi, tol, max_iter);
    return 0.5 * (a + b) / env.depth();
}

double default_half_length(double relative_amplitude) {
    const double f = froude_estimate(relative_amplitude);
    const double mu = tail_decay_rate(Environment(1.0, 1.0, 0.0), f);
    // η(x) ≈ 4a e^{-μx}; aim an order of magnitude below the 1e-10 a target.
    return std::log(4.0 / (0.1 * kTailElevationTarget)) / mu;
}

double trough_elevation(const WaveSolution& sol) {
    // ξ = Λ maps to x = Λ for even spectra: cos(kπ) = (-1)^k.
    double sum = 0.0;
    for (std::size_t m = 0; m < sol.surface_spectrum.size(); ++m)
        sum += (m % 2 == 0 ? 1.0 : -1.0) * sol.surface_spectrum[m];
    return sum * sol.env.depth();
}

WaveSolution solve_wave(const WaveRequest& req) {
    validate(req);
    const double d = req.env.depth();

    if (req.amplitude) {
        WaveSolution sol = solve_amplitude(req, *req.amplitude / d, nullptr);
        if (req.froude && std::abs(sol.froude - *req.froude) > 1e-6) {
            throw Error(ErrorCode::InputConflict, "amplitude " + fmt_double(*req.amplitude) + " gives F = " +
                                                      fmt_double(sol.froude) + ", not the requested " +
                                                      fmt_double(*req.froude));
        }
        return sol;
    }

    // Froude target: secant on the amplitude, warm-starting every solve.
    const double target = *req.froude;
    const double cap = req.amplitude_cap;
    WaveSolution last;
    bool have_last = false;
    auto froude_of = [&](double a) {
        if (a > cap) throw Error(ErrorCode::AmplitudeCapExceeded,
                                 "no wave below the amplitude cap reaches F = " + fmt_double(target));
        WaveRequest sub = req;
        sub.froude.reset();
        WaveSolution s = solve_amplitude(sub, a, have_last ? &last : nullptr);
        last = std::move(s);
        have_last = true;
        return last.froude - target;
    };
    double a0 = std::clamp(target * target - 1.0, 1e-3, 0.9 * cap);
    double a1 = std::min(a0 * 1.05, cap);
    double f0 = froude_of(a0);
    WaveSolution best = last;
    if (std::abs(f0) <= 1e-12) return best;
    double f1 = froude_of(a1);
    best = last;
    for (int i = 0; i < 40 && std::abs(f1) > 1e-12; ++i) {
        if (f1 == f0) break;
        double a2 = a1 - f1 * (a1 - a0) / (f1 - f0);
        if (!(a2 > 0.0)) a2 = 0.5 * a1;
        a2 = std::min(a2, cap);
        a0 = a1;
        f0 = f1;
        a1 = a2;
        f1 = froude_of(a1);
        best = last;
    }
    if (std::abs(f1) > 1e-9)
        throw Error(ErrorCode::NoConvergence, "could not match F = " + fmt_double(target));
    return best;
}

std::vector<WaveSolution> continue_amplitude(const WaveRequest& base, const std::vector<double>& amplitudes) {
    for (std::size_t i = 1; i < amplitudes.size(); ++i) {
        if (!(amplitudes[i] > amplitudes[i - 1]))
            throw Error(ErrorCode::InvalidInput, "continuation amplitudes must be strictly ascending");
    }
    std::vector<WaveSolution> out;
    out.reserve(amplitudes.size());
    for (double a : amplitudes) {
        WaveRequest req = base;
        req.amplitude = a;
        req.froude.reset();
        try {
            validate(req);
            const double rel = a / req.env.depth();
            const WaveSolution* seed = out.empty() ? nullptr : &out.back();
            // A seed far below the target is no better than the KdV guess.
            if (seed != nullptr && rel - seed->amplitude / req.env.depth() > kContinuationStep + 1e-12 &&
                rel > kContinuationLimit)
                seed = nullptr;
            out.push_back(solve_amplitude(req, rel, seed));
        } catch (const Error& e) {
            throw Error(e.code(), "at amplitude " + fmt_double(a) + ": " + e.what());
        }
    }
    return out;
}

void to_json(nlohmann::json& j, const SolverDiagnostics& d) {
    j = nlohmann::json{{"iterations", d.iterations},
                       {"continuation_steps", d.continuation_steps},
                       {"residual", d.residual},
                       {"tail_ratio", d.tail_ratio},
                       {"tail_elevation", d.tail_elevation},
                       {"method", d.method},
                       {"converged", d.converged},
                       {"truncation_warning", d.truncation_warning},
                       {"warnings", d.warnings}};
}

void from_json(const nlohmann::json& j, SolverDiagnostics& d) {
    d.iterations = j.value("iterations", 0);
    d.continuation_steps = j.value("continuation_steps", 0);
    d.residual = j.value("residual", 0.0);
    d.tail_ratio = j.value("tail_ratio", 0.0);
    d.tail_elevation = j.value("tail_elevation", 0.0);
    d.method = j.value("method", std::string{});
    d.converged = j.value("converged", false);
    d.truncation_warning = j.value("truncation_warning", false);
    d.warnings = j.value("warnings", std::vector<std::string>{});
}

void write_spectrum_csv(std::ostream& os, const WaveSolution& sol) {
    os << "k,coefficient\n";
    for (std::size_t k = 0; k < sol.surface_spectrum.size(); ++k)
        os << fmt::format("{},{:.17g}\n", k, sol.surface_spectrum[k]);
}

void to_json(nlohmann::json& j, const WaveSolution& s) {
    j = nlohmann::json{{"environment", s.env},
                       {"speed", s.speed},
                       {"froude", s.froude},
                       {"amplitude", s.amplitude},
                       {"bernoulli_constant", s.bernoulli_constant},
                       {"mass_flux", s.mass_flux},
                       {"half_length", s.half_length},
                       {"modes", s.modes()},
                       {"surface_spectrum", s.surface_spectrum},
                       {"diagnostics", s.diagnostics}};
    if (!s.odd_spectrum.empty()) j["odd_spectrum"] = s.odd_spectrum;
}

void from_json(const nlohmann::json& j, WaveSolution& s) {
    try {
        s.env = j.at("environment").get<Environment>();
        s.speed = j.at("speed").get<double>();
        s.froude = j.at("froude").get<double>();
        s.amplitude = j.at("amplitude").get<double>();
        s.bernoulli_constant = j.at("bernoulli_constant").get<double>();
        s.mass_flux = j.at("mass_flux").get<double>();
        s.half_length = j.at("half_length").get<double>();
        s.surface_spectrum = j.at("surface_spectrum").get<std::vector<double>>();
        s.odd_spectrum = j.value("odd_spectrum", std::vector<double>{});
        s.diagnostics = j.value("diagnostics", SolverDiagnostics{});
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::InputFormat, std::string("wave solution: ") + e.what());
    }
    if (s.surface_spectrum.empty() || !(s.half_length > 0.0) || !(s.speed > 0.0))
        throw Error(ErrorCode::InputFormat, "wave solution: incomplete spectrum or parameters");
}

void to_json(nlohmann::json& j, const ResidualReport& r) {
    j = nlohmann::json{{"laplace_residual", r.laplace_residual},
                       {"bernoulli_surface_residual", r.bernoulli_surface_residual},
                       {"kinematic_surface_residual", r.kinematic_surface_residual},
                       {"bed_residual", r.bed_residual},
                       {"decay_residual", r.decay_residual}};
}

} // namespace dynpress
