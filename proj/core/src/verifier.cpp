#include "dynpress/verifier.hpp"

#include "dynpress/error.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

namespace dynpress {

namespace {

struct Scales {
    double g, d, c, lam, floor, tail_x;
};

Scales scales_of(const FlowField& field, const VerifierConfig& cfg) {
    const auto& sol = field.solution();
    const double g = sol.env.gravity();
    const double d = sol.env.depth();
    return Scales{g, d, sol.speed, field.truncation_length(), cfg.noise_floor * g * d,
                  cfg.tail_start * field.truncation_length()};
}

Finding make(PropertyId id, double tolerance) {
    Finding f;
    f.id = id;
    f.tolerance = tolerance;
    return f;
}

/// Tracks a sequence of sign conditions value < 0 with a noise floor in the
/// tail region.
class SignLedger {
public:
    SignLedger(double floor, double tail_x) : floor_(floor), tail_x_(tail_x) {}

    /// `value` must be strictly negative.
    void add(double value, PhysicalPoint at) {
        const bool tail = at.x >= tail_x_;
        if (tail && std::abs(value) <= floor_) {
            ++tail_ties_;
            return;
        }
        if (value < 0.0) {
            if (!tail && value > worst_) {
                worst_ = value;
                worst_at_ = at;
            }
            return;
        }
        if (!violation_ || value > violation_value_) {
            violation_ = at;
            violation_value_ = value;
        }
    }

    void finish(Finding& f, const std::string& what) const {
        if (violation_) {
            f.status = Status::Fail;
            f.margin = -violation_value_;
            f.witness = violation_;
            f.diagnostic = fmt::format("{} violated at ({:.6g}, {:.6g}) by {:.3e}", what, violation_->x,
                                       violation_->y, violation_value_);
            return;
        }
        f.margin = -worst_; // positive when the sign holds
        f.witness = worst_at_;
        if (tail_ties_ > 0) {
            f.status = Status::Indeterminate;
            f.tail_only = true;
            f.diagnostic = fmt::format("{} holds strictly for x < {:.6g}; {} tail comparisons below the noise floor",
                                       what, tail_x_, tail_ties_);
        } else {
            f.status = Status::Pass;
            f.diagnostic = fmt::format("{} holds strictly", what);
        }
    }

private:
    double floor_;
    double tail_x_;
    double worst_ = -std::numeric_limits<double>::infinity();
    std::optional<PhysicalPoint> worst_at_;
    std::optional<PhysicalPoint> violation_;
    double violation_value_ = 0.0;
    int tail_ties_ = 0;
};

Finding flat_state(PropertyId id, double tolerance) {
    Finding f = make(id, tolerance);
    f.status = Status::Indeterminate;
    f.diagnostic = "p vanishes identically (flat state)";
    return f;
}

void require_samples(const FieldGrid& grid) {
    if (grid.samples.size() < 100)
        throw Error(ErrorCode::GridTooCoarse,
                    fmt::format("{} samples; at least 100 are needed", grid.samples.size()));
}

double max_abs_p(const FieldGrid& grid) {
    double m = 0.0;
    for (const auto& s : grid.samples) m = std::max(m, std::abs(s.p));
    return m;
}

double grid_floor(const FieldGrid& grid, const VerifierConfig& cfg) { return cfg.noise_floor * grid.pressure_scale; }

} // namespace

std::string_view to_string(PropertyId id) {
    switch (id) {
    case PropertyId::CrestMax: return "CREST_MAX";
    case PropertyId::Positivity: return "POSITIVITY";
    case PropertyId::MonoBrokenLine: return "MONO_BROKEN_LINE";
    case PropertyId::MonoSurface: return "MONO_SURFACE";
    case PropertyId::Decay: return "DECAY";
    case PropertyId::Superharmonic: return "SUPERHARMONIC";
    case PropertyId::HopfBed: return "HOPF_BED";
    case PropertyId::HopfCrestLine: return "HOPF_CREST_LINE";
    case PropertyId::Symmetry: return "SYMMETRY";
    case PropertyId::BernoulliConst: return "BERNOULLI_CONST";
    case PropertyId::MassFluxConst: return "MASS_FLUX_CONST";
    }
    return "UNKNOWN";
}

std::string_view to_string(Status s) {
    switch (s) {
    case Status::Pass: return "pass";
    case Status::Fail: return "fail";
    case Status::Indeterminate: return "indeterminate";
    }
    return "indeterminate";
}

const Finding& VerificationReport::find(PropertyId id) const {
    for (const auto& f : findings)
        if (f.id == id) return f;
    throw Error(ErrorCode::InvalidInput, fmt::format("report has no finding {}", to_string(id)));
}

GridSpec default_grid(const FlowField& field, const VerifierConfig& cfg) {
    return GridSpec::uniform(0.0, field.truncation_length(), cfg.stations, cfg.levels);
}

Finding check_crest_max(const FieldGrid& grid, const VerifierConfig& /*cfg*/) {
    require_samples(grid);
    if (max_abs_p(grid) == 0.0) return flat_state(PropertyId::CrestMax, 0.0);

    Finding f = make(PropertyId::CrestMax, 0.0);
    std::size_t arg = 0;
    for (std::size_t i = 1; i < grid.samples.size(); ++i)
        if (grid.samples[i].p > grid.samples[arg].p) arg = i;

    if (!grid.crest_index) {
        f.status = Status::Fail;
        f.witness = grid.samples[arg].point;
        f.margin = 0.0;
        f.diagnostic = "crest not covered: the grid has no node at (0, eta(0))";
        return f;
    }
    const std::size_t crest = *grid.crest_index;
    const double p_crest = grid.samples[crest].p;
    double second = -std::numeric_limits<double>::infinity();
    std::size_t second_at = crest;
    for (std::size_t i = 0; i < grid.samples.size(); ++i) {
        if (i == crest) continue;
        if (grid.samples[i].p > second) {
            second = grid.samples[i].p;
            second_at = i;
        }
    }
    f.margin = p_crest - second;
    if (arg == crest && f.margin > 0.0) {
        f.status = Status::Pass;
        f.witness = grid.samples[second_at].point;
        f.diagnostic = fmt::format("maximum {:.12g} at the crest; runner-up at ({:.6g}, {:.6g})", p_crest,
                                   grid.samples[second_at].point.x, grid.samples[second_at].point.y);
    } else {
        f.status = Status::Fail;
        f.witness = grid.samples[arg == crest ? second_at : arg].point;
        f.diagnostic = fmt::format("maximum {:.12g} not at the crest", grid.samples[arg].p);
    }
    return f;
}

Finding check_positivity(const FieldGrid& grid, const VerifierConfig& cfg) {
    require_samples(grid);
    const double floor = grid_floor(grid, cfg);
    if (max_abs_p(grid) == 0.0) return flat_state(PropertyId::Positivity, cfg.noise_floor);

    Finding f = make(PropertyId::Positivity, cfg.noise_floor);
    const double tail_x = cfg.tail_start * grid.truncation_x;
    // Positive values pass at any magnitude; only non-positive tail values
    // within the noise floor are treated as ties.
    std::size_t arg = 0;
    std::optional<std::size_t> violation;
    int ties = 0;
    for (std::size_t i = 0; i < grid.samples.size(); ++i) {
        const auto& s = grid.samples[i];
        if (s.p < grid.samples[arg].p) arg = i;
        if (s.p > 0.0) continue;
        if (s.point.x >= tail_x && -s.p <= floor)
            ++ties;
        else if (!violation || s.p < grid.samples[*violation].p)
            violation = i;
    }
    if (violation) {
        f.status = Status::Fail;
        f.diagnostic = fmt::format("p = {:.3e} at ({:.6g}, {:.6g})", grid.samples[*violation].p,
                                   grid.samples[*violation].point.x, grid.samples[*violation].point.y);
        f.margin = grid.samples[*violation].p;
        f.witness = grid.samples[*violation].point;
        return f;
    }
    if (ties > 0) {
        f.status = Status::Indeterminate;
        f.tail_only = true;
        f.diagnostic = fmt::format("p > 0 for x < {:.6g}; {} tail samples at round-off level", tail_x, ties);
    } else {
        f.status = Status::Pass;
        f.diagnostic = "p > 0 at every sample";
    }
    f.margin = grid.samples[arg].p;
    f.witness = grid.samples[arg].point;
    if (f.status == Status::Pass && f.margin < 1e-7 * grid.pressure_scale)
        f.diagnostic += fmt::format("; near noise floor (min p = {:.3e})", f.margin);
    return f;
}

std::pair<Finding, Finding> check_boundary_monotonicity(const FlowField& field, const VerifierConfig& cfg) {
    const Scales sc = scales_of(field, cfg);
    Finding line = make(PropertyId::MonoBrokenLine, cfg.noise_floor);
    Finding surface = make(PropertyId::MonoSurface, cfg.noise_floor);
    if (field.solution().is_still_water()) {
        line = flat_state(PropertyId::MonoBrokenLine, cfg.noise_floor);
        surface = flat_state(PropertyId::MonoSurface, cfg.noise_floor);
        line.diagnostic = surface.diagnostic = "all differences vanish (flat state)";
        return {line, surface};
    }

    // Crest line from the crest down to the bed, then the bed out to Λ,
    // with points shared in proportion to the segment lengths.
    const double crest = field.surface_elevation(0.0);
    const double vertical = crest + sc.d;
    const int n = std::max(cfg.line_points, 20);
    const int n_vertical = std::clamp(static_cast<int>(std::lround(n * vertical / (vertical + sc.lam))), 10, n - 10);
    const int n_bed = n - n_vertical;
    std::vector<PhysicalPoint> path;
    for (int i = 0; i < n_vertical; ++i) path.push_back({0.0, crest - vertical * i / n_vertical});
    for (int i = 0; i <= n_bed; ++i) path.push_back({sc.lam * i / n_bed, -sc.d});

    SignLedger along(sc.floor, sc.tail_x);
    double previous = field.dynamic_pressure(path.front());
    for (std::size_t i = 1; i < path.size(); ++i) {
        const double p = field.dynamic_pressure(path[i]);
        along.add(p - previous, path[i]);
        previous = p;
    }
    along.finish(line, "p decreasing along the crest line and bed");

    SignLedger top(sc.floor, sc.tail_x);
    double worst_identity = 0.0;
    PhysicalPoint identity_at{};
    previous = 0.0;
    for (int i = 0; i <= n; ++i) {
        const double x = sc.lam * i / n;
        const double eta = field.surface_elevation(x);
        const double p = field.dynamic_pressure({x, eta});
        const double mismatch = std::abs(p - sc.g * eta);
        if (mismatch > worst_identity) {
            worst_identity = mismatch;
            identity_at = {x, eta};
        }
        if (i > 0) top.add(p - previous, {x, eta});
        previous = p;
    }
    top.finish(surface, "p decreasing along the surface");
    const double identity_tol = 1e-10 * sc.g * sc.d;
    if (worst_identity > identity_tol) {
        surface.status = Status::Fail;
        surface.witness = identity_at;
        surface.diagnostic += fmt::format("; p - g eta = {:.3e} exceeds {:.1e}", worst_identity, identity_tol);
    } else {
        surface.diagnostic += fmt::format("; max |p - g eta| = {:.3e}", worst_identity);
    }
    return {line, surface};
}

std::pair<Finding, Finding> check_hopf_signs(const FlowField& field, const VerifierConfig& cfg) {
    const Scales sc = scales_of(field, cfg);
    Finding bed = make(PropertyId::HopfBed, cfg.noise_floor);
    Finding crest_line = make(PropertyId::HopfCrestLine, cfg.noise_floor);
    if (field.solution().is_still_water()) {
        return {flat_state(PropertyId::HopfBed, cfg.noise_floor), flat_state(PropertyId::HopfCrestLine, cfg.noise_floor)};
    }
    const int n = std::max(cfg.line_points / 2, 10);

    // p_x(x, -d) = (u - c) v_y < 0 for x > 0; x = 0 is excluded (p_x = 0 there).
    SignLedger bed_signs(sc.floor, sc.tail_x);
    for (int i = 1; i <= n; ++i) {
        const PhysicalPoint pt{sc.tail_x * i / n, -sc.d};
        bed_signs.add(field.pressure_gradient(pt).p_x, pt);
    }
    bed_signs.finish(bed, "p_x < 0 on the bed");

    // p_y(0, y) = -(u - c) v_x > 0 strictly between bed and crest.
    SignLedger line_signs(sc.floor, sc.tail_x);
    const double crest = field.surface_elevation(0.0);
    for (int i = 1; i <= n; ++i) {
        const PhysicalPoint pt{0.0, -sc.d + (crest + sc.d) * i / (n + 1)};
        line_signs.add(-field.pressure_gradient(pt).p_y, pt);
    }
    line_signs.finish(crest_line, "p_y > 0 on the crest line");
    return {bed, crest_line};
}

SuperharmonicProbe superharmonic_probe(const FlowField& field, PhysicalPoint pt, double h) {
    const double d = field.depth();
    const double top = field.surface_elevation(pt.x);
    const double column = top + d;
    if (!(h > 0.0) || h > column / 8.0)
        throw Error(ErrorCode::StepTooLarge, fmt::format("step {} exceeds 1/8 of the column height {}", h, column));
    if (pt.y - 2 * h < -d || pt.y + 2 * h > top || std::abs(pt.x) + 2 * h > field.truncation_length())
        throw Error(ErrorCode::StepTooLarge,
                    fmt::format("({}, {}) is closer than 2h = {} to the boundary", pt.x, pt.y, 2 * h));

    const long double x = pt.x, y = pt.y, hh = h;
    const long double p0 = field.dynamic_pressure_extended(x, y);
    const long double lap = (field.dynamic_pressure_extended(x + hh, y) + field.dynamic_pressure_extended(x - hh, y) +
                             field.dynamic_pressure_extended(x, y + hh) + field.dynamic_pressure_extended(x, y - hh) -
                             4.0L * p0) /
                            (hh * hh);
    const LocalFlow f = field.local_flow(pt);
    const long double grad2 = static_cast<long double>(f.pressure_gradient.p_x) * f.pressure_gradient.p_x +
                              static_cast<long double>(f.pressure_gradient.p_y) * f.pressure_gradient.p_y;
    const long double vel2 = static_cast<long double>(f.velocity.u_rel) * f.velocity.u_rel +
                             static_cast<long double>(f.velocity.v) * f.velocity.v;
    SuperharmonicProbe probe;
    probe.point = pt;
    probe.laplacian = lap;
    probe.rhs = -2.0L * grad2 / vel2;
    probe.residual = lap - probe.rhs;
    return probe;
}

Finding check_superharmonic(const FlowField& field, const VerifierConfig& cfg) {
    const Scales sc = scales_of(field, cfg);
    Finding f = make(PropertyId::Superharmonic, cfg.min_order);
    const double h = cfg.fd_step * sc.d;
    const int n = std::max(cfg.superharmonic_probes, 1);
    static constexpr std::array<double, 5> kLevels = {0.2, 0.35, 0.5, 0.65, 0.8};

    long double coarse = 0, fine = 0, worst_lap = -std::numeric_limits<long double>::infinity();
    double min_order = std::numeric_limits<double>::infinity();
    PhysicalPoint worst_at{}, lap_at{};
    // Probes in the body of the wave, p >~ 1e-2 p(0, -d), where the O(h²)
    // error stands well clear of the long double round-off in Δ_h p.
    const auto& sol = field.solution();
    const double mu = sol.is_still_water() ? 1.0 : tail_decay_rate(sol.env, sol.speed);
    const double span = std::min(0.5 * sc.lam, std::log(4e2) / mu);
    for (int i = 0; i < n; ++i) {
        const double x = span * (i + 0.5) / n;
        const double top = field.surface_elevation(x);
        const PhysicalPoint pt{x, -sc.d + (top + sc.d) * kLevels[static_cast<std::size_t>(i) % kLevels.size()]};
        const SuperharmonicProbe a = superharmonic_probe(field, pt, h);
        const SuperharmonicProbe b = superharmonic_probe(field, pt, 0.5 * h);
        if (std::abs(a.residual) > coarse) {
            coarse = std::abs(a.residual);
            worst_at = pt;
        }
        fine = std::max(fine, std::abs(b.residual));
        if (a.laplacian > worst_lap) {
            worst_lap = a.laplacian;
            lap_at = pt;
        }
        if (b.residual != 0) {
            const double order = std::log2(static_cast<double>(std::abs(a.residual) / std::abs(b.residual)));
            min_order = std::min(min_order, order);
        }
    }

    if (coarse == 0 && fine == 0) {
        f.status = Status::Pass;
        f.margin = 0.0;
        f.diagnostic = "both sides vanish identically";
        return f;
    }
    const double order = std::log2(static_cast<double>(coarse / fine));
    // Δ_h p <= 0 up to the observed discretization error C h².
    const long double lap_tol = coarse;
    // The order is measured on the max norm over all probes; single probes
    // near a sign change of the leading error term converge irregularly.
    f.margin = order;
    f.witness = worst_at;
    const bool order_ok = order >= cfg.min_order;
    const bool sign_ok = worst_lap <= lap_tol;
    f.status = order_ok && sign_ok ? Status::Pass : Status::Fail;
    if (!sign_ok) f.witness = lap_at;
    f.diagnostic = fmt::format("max residual {:.3e} (h) / {:.3e} (h/2), order {:.3f}, lowest probe order {:.3f}; "
                               "max laplacian {:.3e} vs tolerance {:.3e}",
                               static_cast<double>(coarse), static_cast<double>(fine), order, min_order,
                               static_cast<double>(worst_lap), static_cast<double>(lap_tol));
    return f;
}

QuasilinearCoefficients quasilinear_coefficients(double p_x, double p_y, double u_rel, double v, double speed) {
    const double denom = v * v + u_rel * u_rel;
    if (denom < 1e-14 * speed * speed)
        throw Error(ErrorCode::DenominatorVanishing,
                    fmt::format("v^2 + (u - c)^2 = {:.3e}: stagnation point, limiting wave regime", denom));
    return {2.0 * p_x / denom, 2.0 * p_y / denom};
}

QuasilinearCoefficients quasilinear_coefficients(const FlowField& field, PhysicalPoint pt) {
    const LocalFlow f = field.local_flow(pt);
    return quasilinear_coefficients(f.pressure_gradient.p_x, f.pressure_gradient.p_y, f.velocity.u_rel, f.velocity.v,
                                    field.solution().speed);
}

Finding check_symmetry(const FlowField& field, const VerifierConfig& cfg) {
    const Scales sc = scales_of(field, cfg);
    Finding f = make(PropertyId::Symmetry, cfg.symmetry_tol);
    const double tol = cfg.symmetry_tol * sc.c;
    const int stations = 50;
    static constexpr std::array<double, 5> kLevels = {0.0, 0.25, 0.5, 0.75, 1.0};
    double worst = 0.0;
    PhysicalPoint worst_at{};
    for (int i = 0; i < stations; ++i) {
        const double x = sc.lam * (i + 1) / stations;
        const double top = std::min(field.surface_elevation(x), field.surface_elevation(-x));
        for (double level : kLevels) {
            const double y = -sc.d + (top + sc.d) * level;
            const Velocity right = field.velocity({x, y});
            const Velocity left = field.velocity({-x, y});
            const double mismatch = std::max(std::abs(right.u - left.u), std::abs(right.v + left.v));
            if (mismatch > worst) {
                worst = mismatch;
                worst_at = {x, y};
            }
        }
    }
    f.margin = worst / sc.c;
    f.witness = worst_at;
    f.status = worst <= tol ? Status::Pass : Status::Fail;
    f.diagnostic = fmt::format("max mirrored mismatch {:.3e} c", f.margin);
    return f;
}

Finding evaluate_decay(const FlowField& field, const std::function<double(double, double)>& pressure,
                       const VerifierConfig& cfg) {
    const Scales sc = scales_of(field, cfg);
    const auto& sol = field.solution();
    Finding f = make(PropertyId::Decay, cfg.decay_tol);

    // Far-field magnitude across the depth.
    const double x_far = 0.95 * sc.lam;
    const double top = field.surface_elevation(x_far);
    double far = 0.0;
    PhysicalPoint far_at{x_far, -sc.d};
    for (int j = 0; j <= 16; ++j) {
        const double y = -sc.d + (top + sc.d) * j / 16.0;
        const double p = std::abs(pressure(x_far, y));
        if (p > far) {
            far = p;
            far_at = {x_far, y};
        }
    }
    const double far_tol = cfg.decay_tol * sc.g * sc.d;
    f.margin = far / (sc.g * sc.d);
    f.witness = far_at;
    if (far > far_tol) {
        f.status = Status::Fail;
        f.diagnostic = fmt::format("|p(0.95 L, y)| = {:.3e} g d exceeds {:.1e}; increase truncation", f.margin,
                                   cfg.decay_tol);
        return f;
    }
    if (sol.is_still_water()) {
        f.status = Status::Pass;
        f.diagnostic = "p vanishes identically";
        return f;
    }

    // Exponential rate of the bed pressure, least squares on log p.
    const int n = 24;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int i = 0; i < n; ++i) {
        const double x = sc.lam * (0.35 + 0.3 * i / (n - 1));
        const double p = pressure(x, -sc.d);
        if (!(p > 0.0)) {
            f.status = Status::Fail;
            f.witness = PhysicalPoint{x, -sc.d};
            f.diagnostic = fmt::format("bed pressure {:.3e} is not positive where the decay rate is fitted", p);
            return f;
        }
        const double ly = std::log(p);
        sx += x;
        sy += ly;
        sxx += x * x;
        sxy += x * ly;
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    const double mu_fit = -slope;
    const double mu = tail_decay_rate(sol.env, sol.speed);
    const double rel = std::abs(mu_fit - mu) / mu;
    if (rel > cfg.decay_rate_tol) {
        f.status = Status::Fail;
        f.witness = PhysicalPoint{0.5 * sc.lam, -sc.d};
        f.diagnostic = fmt::format("fitted bed decay rate {:.6g} differs from mu = {:.6g} by {:.2f}%", mu_fit, mu,
                                   100 * rel);
        return f;
    }
    f.status = Status::Pass;
    f.diagnostic = fmt::format("|p(0.95 L, y)| <= {:.3e} g d; fitted rate {:.6g} vs mu = {:.6g} ({:.3f}%)", f.margin,
                               mu_fit, mu, 100 * rel);
    return f;
}

Finding check_decay(const FlowField& field, const VerifierConfig& cfg) {
    return evaluate_decay(
        field, [&field](double x, double y) { return field.dynamic_pressure({x, y}); }, cfg);
}

Finding check_bernoulli(const FlowField& field, const VerifierConfig& cfg) {
    const Scales sc = scales_of(field, cfg);
    const auto& sol = field.solution();
    Finding f = make(PropertyId::BernoulliConst, cfg.bernoulli_tol);
    const int levels = 20;
    const int stations = std::max(1, cfg.bernoulli_samples / levels);
    const double span = 0.5 * sc.lam;
    double worst = 0.0;
    PhysicalPoint worst_at{};
    for (int i = 0; i < stations; ++i) {
        const double x = span * (i + 0.5) / stations;
        const double top = field.surface_elevation(x);
        for (int j = 0; j < levels; ++j) {
            const PhysicalPoint pt{x, -sc.d + (top + sc.d) * (j + 0.5) / levels};
            const Velocity vel = field.velocity(pt);
            const double pressure = field.total_pressure_from_momentum(pt);
            const double energy = 0.5 * (vel.u_rel * vel.u_rel + vel.v * vel.v) + pressure + sc.g * pt.y;
            const double dev = std::abs(energy - sol.bernoulli_constant);
            if (dev > worst) {
                worst = dev;
                worst_at = pt;
            }
        }
    }
    f.margin = worst / (sc.g * sc.d);
    f.witness = worst_at;
    f.status = f.margin <= cfg.bernoulli_tol ? Status::Pass : Status::Fail;
    f.diagnostic = fmt::format("max |(1/2)|grad psi|^2 + P + g y - C| = {:.3e} g d over {} samples", f.margin,
                               stations * levels);
    return f;
}

Finding check_mass_flux(const FlowField& field, const VerifierConfig& cfg) {
    const Scales sc = scales_of(field, cfg);
    Finding f = make(PropertyId::MassFluxConst, cfg.mass_flux_tol);
    const int n = std::max(cfg.mass_flux_stations, 2);
    double lo = std::numeric_limits<double>::infinity(), hi = -lo, sum = 0.0;
    double lo_x = 0.0, hi_x = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = sc.lam * i / n;
        const double m = field.mass_flux(x);
        sum += m;
        if (m < lo) {
            lo = m;
            lo_x = x;
        }
        if (m > hi) {
            hi = m;
            hi_x = x;
        }
    }
    const double mean = sum / n;
    f.margin = (hi - lo) / std::abs(mean);
    f.status = f.margin <= cfg.mass_flux_tol ? Status::Pass : Status::Fail;
    f.witness = PhysicalPoint{std::abs(hi - mean) > std::abs(lo - mean) ? hi_x : lo_x, -sc.d};
    f.diagnostic = fmt::format("flux {:.15g} with relative spread {:.3e} over {} stations", mean, f.margin, n);
    return f;
}

VerificationReport verify_all(const WaveSolution& sol, const VerifierConfig& cfg) {
    if (!sol.diagnostics.converged)
        throw Error(ErrorCode::Precondition, "verification needs a converged solution");

    VerificationReport report;
    report.amplitude = sol.amplitude;
    report.froude = sol.froude;
    report.modes = sol.modes();
    report.truncation_length = sol.truncation_length();

    const FlowField field(sol);
    std::vector<std::optional<Finding>> slots(kAllProperties.size());
    auto put = [&](Finding f) { slots[static_cast<std::size_t>(f.id)] = std::move(f); };
    auto guarded = [&](std::initializer_list<PropertyId> ids, auto&& run) {
        try {
            run();
        } catch (const std::exception& e) {
            for (PropertyId id : ids) {
                Finding f = make(id, 0.0);
                f.status = Status::Indeterminate;
                f.diagnostic = std::string("check aborted: ") + e.what();
                put(f);
            }
        }
    };

    std::optional<FieldGrid> grid;
    guarded({PropertyId::CrestMax, PropertyId::Positivity}, [&] {
        grid = sample_grid(field, default_grid(field, cfg));
        put(check_crest_max(*grid, cfg));
        put(check_positivity(*grid, cfg));
    });
    guarded({PropertyId::MonoBrokenLine, PropertyId::MonoSurface}, [&] {
        auto [line, surface] = check_boundary_monotonicity(field, cfg);
        put(line);
        put(surface);
    });
    guarded({PropertyId::Decay}, [&] { put(check_decay(field, cfg)); });
    guarded({PropertyId::Superharmonic}, [&] { put(check_superharmonic(field, cfg)); });
    guarded({PropertyId::HopfBed, PropertyId::HopfCrestLine}, [&] {
        auto [bed, line] = check_hopf_signs(field, cfg);
        put(bed);
        put(line);
    });
    guarded({PropertyId::Symmetry}, [&] { put(check_symmetry(field, cfg)); });
    guarded({PropertyId::BernoulliConst}, [&] { put(check_bernoulli(field, cfg)); });
    guarded({PropertyId::MassFluxConst}, [&] { put(check_mass_flux(field, cfg)); });

    bool failed = false, open = false, tail = false;
    for (auto& slot : slots) {
        const Finding& f = *slot;
        if (f.status == Status::Fail) failed = true;
        if (f.status == Status::Indeterminate) {
            if (f.tail_only) {
                tail = true;
                report.warnings.push_back(fmt::format("{}: indeterminate in the tail region only", to_string(f.id)));
            } else {
                open = true;
            }
        }
        report.findings.push_back(f);
    }
    if (failed)
        report.overall = Status::Fail;
    else if (open)
        report.overall = sol.is_still_water() ? Status::Indeterminate : Status::Fail;
    else
        report.overall = Status::Pass;
    (void)tail;
    return report;
}

void write_table(std::ostream& os, const VerificationReport& report) {
    os << fmt::format("a = {:.6g}  F = {:.10f}  N = {}  L = {:.6g}\n", report.amplitude, report.froude, report.modes,
                      report.truncation_length);
    for (const auto& f : report.findings) {
        os << fmt::format("{:<17} {:<13} margin {:>12.4e}  {}\n", to_string(f.id), to_string(f.status), f.margin,
                          f.diagnostic);
    }
    for (const auto& w : report.warnings) os << "warning: " << w << '\n';
    os << "overall: " << to_string(report.overall) << '\n';
}

void to_json(nlohmann::ordered_json& j, const Finding& f) {
    j = nlohmann::ordered_json{{"property", std::string(to_string(f.id))},
                               {"status", std::string(to_string(f.status))},
                               {"margin", f.margin},
                               {"tolerance", f.tolerance},
                               {"tail_only", f.tail_only},
                               {"diagnostic", f.diagnostic}};
    if (f.witness)
        j["witness"] = nlohmann::ordered_json{{"x", f.witness->x}, {"y", f.witness->y}};
    else
        j["witness"] = nullptr;
}

void to_json(nlohmann::ordered_json& j, const VerificationReport& r) {
    j = nlohmann::ordered_json{{"amplitude", r.amplitude},
                               {"froude", r.froude},
                               {"modes", r.modes},
                               {"truncation_length", r.truncation_length},
                               {"overall", std::string(to_string(r.overall))},
                               {"findings", r.findings},
                               {"warnings", r.warnings}};
}

} // namespace dynpress
