#include "dynpress/conformal_map.hpp"
#include "dynpress/flow_fields.hpp"
#include "dynpress/wave_solver.hpp"

#include <algorithm>
#include <cmath>

namespace dynpress {

namespace {

/// Fourth-order central difference of f at x with step h.
template <class F>
long double central_difference(F&& f, long double x, long double h) {
    return (-f(x + 2 * h) + 8 * f(x + h) - 8 * f(x - h) + f(x - 2 * h)) / (12 * h);
}

} // namespace

ResidualReport residuals(const WaveSolution& sol, const ProbeSpec& probe) {
    ResidualReport r;
    const ConformalMap<double> map(sol.surface_spectrum, sol.odd_spectrum, sol.half_length);
    const ConformalMap<long double> map_ext(sol.surface_spectrum, sol.odd_spectrum, sol.half_length);
    const double lam = sol.half_length;
    const double h = map.depth();
    const double f = sol.froude;

    // Surface and bed, at points that are not collocation nodes.
    const int m = probe.surface_points > 0 ? probe.surface_points : 4 * std::max(sol.modes(), 16);
    for (int j = 0; j < m; ++j) {
        const double x = (static_cast<double>(j) + 0.3) * lam / static_cast<double>(m);

        const double xi = map.surface_preimage(x);
        const auto jet = map.evaluate(xi, 0.0);
        const std::complex<double> hzw = h * (1.0 + jet.zw_minus_one);
        const double q = std::norm(hzw);
        const double y = jet.z.imag();
        r.bernoulli_surface_residual =
            std::max(r.bernoulli_surface_residual, std::abs(f * f / (2.0 * q) + y - 0.5 * f * f));
        // v - (u - c) η' on the surface, η' = Y_ξ / X_ξ.
        const double u_rel = -f * hzw.real() / q;
        const double v = -f * hzw.imag() / q;
        const double slope = jet.zw_minus_one.imag() / (1.0 + jet.zw_minus_one.real());
        r.kinematic_surface_residual = std::max(r.kinematic_surface_residual, std::abs(v - u_rel * slope));

        const double xb = map.bed_preimage(x);
        const auto bed = map.evaluate(xb, -h);
        const std::complex<double> hzb = h * (1.0 + bed.zw_minus_one);
        r.bed_residual = std::max(r.bed_residual, std::abs(bed.z.imag() + 1.0) + std::abs(f * hzb.imag() / std::norm(hzb)));
    }

    // Δψ = u_y - v_x by finite differences of the spectrally evaluated
    // velocity, so that harmonicity is not assumed.
    auto velocity_at = [&](long double x, long double y) {
        const auto w = map_ext.preimage(x, y);
        const auto jet = map_ext.evaluate(w.real(), w.imag());
        const std::complex<long double> hzw = map_ext.depth() * (1.0L + jet.zw_minus_one);
        const long double q = std::norm(hzw);
        return std::pair<long double, long double>{-f * hzw.real() / q, -f * hzw.imag() / q};
    };
    const long double step = 1e-3L;
    for (int i = 0; i < probe.stations; ++i) {
        const long double x = (static_cast<long double>(i) + 0.5L) * lam / probe.stations;
        const long double top = map_ext.surface_y(map_ext.surface_preimage(x));
        for (int k = 0; k < probe.levels; ++k) {
            const long double y = -1.0L + (top + 1.0L) * (static_cast<long double>(k) + 0.5L) / probe.levels;
            if (y - 2 * step < -1.0L || y + 2 * step > top) continue;
            const long double uy = central_difference([&](long double t) { return velocity_at(x, t).first; }, y, step);
            const long double vx = central_difference([&](long double t) { return velocity_at(t, y).second; }, x, step);
            r.laplace_residual = std::max(r.laplace_residual, static_cast<double>(std::abs(uy - vx)));
        }
    }

    // Far field: elevation and velocity (u = (u - c) + c) at x = Λ.
    const double xi_end = map.surface_preimage(lam);
    double decay = std::abs(map.surface_y(xi_end));
    for (int k = 0; k <= 16; ++k) {
        const double y = -1.0 + (1.0 + map.surface_y(xi_end)) * k / 16.0;
        const auto [u_rel, v] = velocity_at(lam, y);
        decay = std::max(decay, static_cast<double>(std::abs(u_rel + f) + std::abs(v)));
    }
    r.decay_residual = decay;
    return r;
}

} // namespace dynpress
