#include "dynpress/flow_fields.hpp"

#include "dynpress/error.hpp"

#include <fmt/format.h>
#include <gsl/gsl_integration.h>

#include <cmath>
#include <memory>
#include <ostream>

namespace dynpress {

namespace {

constexpr double kDomainSlack = 1e-12;

struct GlTable {
    explicit GlTable(std::size_t n) : table(gsl_integration_glfixed_table_alloc(n)) {
        if (table == nullptr) throw std::bad_alloc();
    }
    ~GlTable() { gsl_integration_glfixed_table_free(table); }
    GlTable(const GlTable&) = delete;
    GlTable& operator=(const GlTable&) = delete;

    /// Gauss–Legendre rule of this order on [a, b].
    template <class F>
    double integrate(F&& f, double a, double b) const {
        double sum = 0.0;
        for (std::size_t i = 0; i < table->n; ++i) {
            double xi = 0.0, wi = 0.0;
            gsl_integration_glfixed_point(a, b, i, &xi, &wi, table);
            sum += wi * f(xi);
        }
        return sum;
    }

    gsl_integration_glfixed_table* table;
};

/// Nondimensional flow quantities at one conformal point.
template <class Real>
struct Kinematics {
    Real q;      // |h z'|²
    Real d;      // a_0 + h Re(z' - 1)
    Real him;    // h Im(z' - 1)
    Real u, v, u_rel, p;
};

template <class Real>
Kinematics<Real> kinematics(const typename ConformalMap<Real>::Jet& jet, Real h, Real a0, Real froude) {
    Kinematics<Real> k{};
    k.d = a0 + h * jet.zw_minus_one.real();
    k.him = h * jet.zw_minus_one.imag();
    const Real one_d = Real(1) + k.d;
    k.q = one_d * one_d + k.him * k.him;
    // Written so that nothing cancels when z' -> 1 in the far field.
    k.u = froude * (k.d * one_d + k.him * k.him) / k.q;
    k.v = -froude * k.him / k.q;
    k.u_rel = -froude * one_d / k.q;
    k.p = Real(0.5) * froude * froude * (k.d * (Real(2) + k.d) + k.him * k.him) / k.q;
    return k;
}

const char* kind_name(SampleKind k) {
    switch (k) {
    case SampleKind::Surface: return "surface";
    case SampleKind::Bed: return "bed";
    case SampleKind::Interior: return "interior";
    }
    return "interior";
}

} // namespace

struct FlowField::Local {
    std::complex<double> w;
    ConformalMap<double>::Jet jet;
    Kinematics<double> kin;
};

FlowField::FlowField(WaveSolution sol)
    : sol_(std::move(sol)), map_(sol_.surface_spectrum, sol_.odd_spectrum, sol_.half_length),
      map_ext_(sol_.surface_spectrum, sol_.odd_spectrum, sol_.half_length),
      velocity_scale_(critical_speed(sol_.env)) {}

void FlowField::require_station(double x) const {
    const double lam = truncation_length();
    if (!(std::abs(x) <= lam * (1.0 + 1e-14)))
        throw Error(ErrorCode::OutOfDomain,
                    fmt::format("x = {} lies beyond the truncation length {}; the wave is flat there to "
                                "within the tail tolerance",
                                x, lam));
}

double FlowField::surface_elevation(double x) const {
    require_station(x);
    const double d = depth();
    return map_.surface_y(map_.surface_preimage(x / d)) * d;
}

double FlowField::surface_slope(double x) const {
    require_station(x);
    const auto jet = map_.evaluate(map_.surface_preimage(x / depth()), 0.0);
    return jet.zw_minus_one.imag() / (1.0 + jet.zw_minus_one.real());
}

bool FlowField::contains(PhysicalPoint pt) const {
    if (!(std::abs(pt.x) <= truncation_length() * (1.0 + 1e-14))) return false;
    const double d = depth();
    if (!(pt.y >= -d * (1.0 + kDomainSlack))) return false;
    return pt.y <= surface_elevation(pt.x) + kDomainSlack * d;
}

std::complex<double> FlowField::preimage(PhysicalPoint pt) const {
    require_station(pt.x);
    const double d = depth();
    const double xn = pt.x / d;
    const double yn = pt.y / d;
    const double xi_s = map_.surface_preimage(xn);
    const double top = map_.surface_y(xi_s);
    if (yn < -1.0 - kDomainSlack || yn > top + kDomainSlack)
        throw Error(ErrorCode::OutOfDomain,
                    fmt::format("({}, {}) is outside the fluid: bed at {}, surface at {}", pt.x, pt.y, -d, top * d));
    return map_.preimage(xn, std::clamp(yn, -1.0, top));
}

FlowField::Local FlowField::local(PhysicalPoint pt) const {
    Local l;
    l.w = preimage(pt);
    l.jet = map_.evaluate(l.w.real(), l.w.imag());
    l.kin = kinematics<double>(l.jet, map_.depth(), map_.mean_elevation(), sol_.froude);
    if (!(l.kin.u_rel < 0.0))
        throw Error(ErrorCode::Precondition,
                    fmt::format("u - c = {} >= 0 at ({}, {}): stagnation point", l.kin.u_rel, pt.x, pt.y));
    return l;
}

double FlowField::stream_function(PhysicalPoint pt) const {
    const auto w = preimage(pt);
    // ψ = -m ζ / h, zero on the surface and m on the bed.
    const double psi = -sol_.froude * w.imag() / map_.depth();
    return psi * depth() * velocity_scale_;
}

Velocity FlowField::velocity(PhysicalPoint pt) const {
    const Local l = local(pt);
    return Velocity{l.kin.u * velocity_scale_, l.kin.v * velocity_scale_, l.kin.u_rel * velocity_scale_};
}

LocalFlow FlowField::local_flow(PhysicalPoint pt) const {
    const Local l = local(pt);
    // V = (u-c) - i v is analytic in z; V' = (m/h) z'' / z'³ and
    // p_x - i p_y = -V' conj(V).
    const std::complex<double> zw = 1.0 + l.jet.zw_minus_one;
    const std::complex<double> vp = (sol_.froude / map_.depth()) * l.jet.zww / (zw * zw * zw);
    const std::complex<double> grad = -vp * std::conj(std::complex<double>(l.kin.u_rel, -l.kin.v));
    const double g = sol_.env.gravity();
    const double scale = velocity_scale_ / depth();
    LocalFlow f;
    f.velocity = Velocity{l.kin.u * velocity_scale_, l.kin.v * velocity_scale_, l.kin.u_rel * velocity_scale_};
    f.velocity_gradient = VelocityGradient{vp.real() * scale, -vp.imag() * scale, -vp.imag() * scale, -vp.real() * scale};
    f.pressure_gradient = PressureGradient{grad.real() * g, -grad.imag() * g};
    f.p = l.kin.p * g * depth();
    return f;
}

VelocityGradient FlowField::velocity_gradient(PhysicalPoint pt) const { return local_flow(pt).velocity_gradient; }

double FlowField::total_pressure(PhysicalPoint pt) const {
    const Local l = local(pt);
    const double g = sol_.env.gravity();
    const double speed2 = (l.kin.u_rel * l.kin.u_rel + l.kin.v * l.kin.v) * velocity_scale_ * velocity_scale_;
    return sol_.bernoulli_constant - g * pt.y - 0.5 * speed2;
}

double FlowField::dynamic_pressure(PhysicalPoint pt) const {
    return local(pt).kin.p * sol_.env.gravity() * depth();
}

double FlowField::dynamic_pressure_from_total(PhysicalPoint pt) const {
    return total_pressure(pt) - (sol_.env.p_atm() - sol_.env.gravity() * pt.y);
}

long double FlowField::dynamic_pressure_extended(long double x, long double y) const {
    const long double d = depth();
    const auto w = map_ext_.preimage(x / d, y / d);
    const auto jet = map_ext_.evaluate(w.real(), w.imag());
    const auto k = kinematics<long double>(jet, map_ext_.depth(), map_ext_.mean_elevation(),
                                           static_cast<long double>(sol_.froude));
    return k.p * static_cast<long double>(sol_.env.gravity()) * d;
}

PressureGradient FlowField::pressure_gradient(PhysicalPoint pt) const { return local_flow(pt).pressure_gradient; }

double FlowField::total_pressure_from_momentum(PhysicalPoint pt) const {
    static const GlTable rule(32);
    const double top = surface_elevation(pt.x);
    if (pt.y > top + kDomainSlack * depth() || pt.y < -depth() * (1.0 + kDomainSlack))
        throw Error(ErrorCode::OutOfDomain, fmt::format("({}, {}) is outside the fluid", pt.x, pt.y));
    const double g = sol_.env.gravity();
    auto integrand = [&](double y) {
        const PhysicalPoint q{pt.x, y};
        const LocalFlow f = local_flow(q);
        return g + f.velocity.u_rel * f.velocity_gradient.v_x + f.velocity.v * f.velocity_gradient.v_y;
    };
    return sol_.env.p_atm() + rule.integrate(integrand, pt.y, top);
}

double FlowField::mass_flux(double x) const {
    require_station(x);
    const double top = surface_elevation(x);
    auto integrand = [&](double y) { return velocity({x, y}).u_rel; };
    const double tol = 1e-12 * std::abs(sol_.mass_flux);
    double previous = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t n = 64; n <= 1024; n *= 2) {
        const GlTable rule(n);
        const double value = rule.integrate(integrand, -depth(), top);
        if (std::abs(value - previous) <= tol) return value;
        previous = value;
    }
    return previous;
}

FieldSample FlowField::sample(PhysicalPoint pt) const {
    const Local l = local(pt);
    const double g = sol_.env.gravity();
    const double d = depth();
    FieldSample s;
    s.point = pt;
    s.psi = -sol_.froude * l.w.imag() / map_.depth() * d * velocity_scale_;
    s.u = l.kin.u * velocity_scale_;
    s.v = l.kin.v * velocity_scale_;
    s.u_rel = l.kin.u_rel * velocity_scale_;
    s.p = l.kin.p * g * d;
    const double speed2 = (l.kin.u_rel * l.kin.u_rel + l.kin.v * l.kin.v) * velocity_scale_ * velocity_scale_;
    s.P = sol_.bernoulli_constant - g * pt.y - 0.5 * speed2;
    if (l.w.imag() == 0.0)
        s.kind = SampleKind::Surface;
    else if (l.w.imag() == -map_.depth())
        s.kind = SampleKind::Bed;
    return s;
}

int GridSpec::levels_at(std::size_t station) const {
    if (levels.empty()) throw Error(ErrorCode::InvalidInput, "grid spec has no level counts");
    if (levels.size() == 1) return levels.front();
    if (levels.size() != stations.size())
        throw Error(ErrorCode::InvalidInput, "grid spec needs one level count or one per station");
    return levels[station];
}

GridSpec GridSpec::uniform(double x0, double x1, int n_stations, int n_levels) {
    GridSpec spec;
    spec.levels = {n_levels};
    if (n_stations == 1) {
        spec.stations = {x0};
        return spec;
    }
    for (int i = 0; i < n_stations; ++i)
        spec.stations.push_back(x0 + (x1 - x0) * static_cast<double>(i) / static_cast<double>(n_stations - 1));
    spec.stations.back() = x1;
    return spec;
}

FieldGrid sample_grid(const FlowField& field, const GridSpec& spec) {
    FieldGrid grid;
    grid.spec = spec;
    grid.truncation_x = field.truncation_length();
    grid.pressure_scale = field.solution().env.gravity() * field.depth();
    const double d = field.depth();
    for (std::size_t i = 0; i < spec.stations.size(); ++i) {
        const double x = spec.stations[i];
        const int n = spec.levels_at(i);
        if (n < 1) throw Error(ErrorCode::InvalidInput, "each station needs at least one node");
        const double top = field.surface_elevation(x);
        for (int j = 0; j < n; ++j) {
            // The top node is placed on η exactly so surface identities are testable.
            const double y =
                j == n - 1 ? top : -d + (top + d) * static_cast<double>(j) / static_cast<double>(n - 1);
            FieldSample s = field.sample({x, y});
            if (j == n - 1) s.kind = SampleKind::Surface;
            else if (j == 0) s.kind = SampleKind::Bed;
            else s.kind = SampleKind::Interior;
            if (x == 0.0 && j == n - 1) grid.crest_index = grid.samples.size();
            grid.samples.push_back(s);
        }
    }
    return grid;
}

void write_csv(std::ostream& os, const FieldGrid& grid) {
    os << "x,y,psi,u,v,P,p\n";
    for (const auto& s : grid.samples) {
        os << fmt::format("{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}\n", s.point.x, s.point.y, s.psi,
                          s.u, s.v, s.P, s.p);
    }
}

void to_json(nlohmann::json& j, const GridSpec& spec) {
    j = nlohmann::json{{"stations", spec.stations}, {"levels", spec.levels}};
}

void to_json(nlohmann::json& j, const FieldSample& s) {
    j = nlohmann::json{{"x", s.point.x}, {"y", s.point.y}, {"psi", s.psi}, {"u", s.u}, {"v", s.v},
                       {"u_rel", s.u_rel}, {"P", s.P}, {"p", s.p}, {"kind", kind_name(s.kind)}};
}

void to_json(nlohmann::json& j, const FieldGrid& grid) {
    j = nlohmann::json{{"grid_spec", grid.spec}, {"truncation_x", grid.truncation_x}, {"samples", grid.samples}};
    if (grid.crest_index) j["crest_index"] = *grid.crest_index;
    else j["crest_index"] = nullptr;
}

} // namespace dynpress
