#pragma once

// Conformal map from the strip {w = ξ + iζ : -h < ζ < 0}, periodic in ξ with
// period 2Λ, onto one period of the fluid domain (nondimensional, d = 1).
//
//   z(w) = w + i a_0 + Σ_{k>=1} [ a_k sin(κ(w + ih)) - b_k cos(κ(w + ih)) ] / sinh(κh)
//
// with κ = kπ/Λ and conformal depth h = 1 + a_0. The top of the strip maps to
// the free surface (Y(ξ) = a_0 + Σ a_k cos κξ + b_k sin κξ) and the bottom to
// the flat bed y = -1. The odd coefficients b_k are zero for every computed
// wave; they exist so that asymmetric perturbations can be represented.
//
// Real may be double or long double; the latter is used where finite
// differences of field values need extra headroom against round-off.

#include "dynpress/error.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <span>
#include <vector>

namespace dynpress {

template <class Real>
class ConformalMap {
public:
    using Complex = std::complex<Real>;

    struct Jet {
        Complex z;           // z(w)
        Complex zw_minus_one; // z'(w) - 1, kept separate to avoid cancellation
        Complex zww;         // z''(w)
    };

    ConformalMap(std::span<const double> even, std::span<const double> odd, double half_length)
        : half_length_(half_length) {
        if (even.empty()) throw Error(ErrorCode::InvalidInput, "empty surface spectrum");
        a0_ = static_cast<Real>(even[0]);
        depth_ = Real(1) + a0_;
        theta_ = std::numbers::pi_v<Real> / static_cast<Real>(half_length);

        // Trailing modes below round-off contribute nothing; drop them.
        double scale = 0.0;
        for (std::size_t k = 1; k < even.size(); ++k) scale = std::max(scale, std::abs(even[k]));
        for (std::size_t k = 1; k < odd.size(); ++k) scale = std::max(scale, std::abs(odd[k]));
        std::size_t last = 0;
        for (std::size_t k = 1; k < std::max(even.size(), odd.size()); ++k) {
            const double ak = k < even.size() ? even[k] : 0.0;
            const double bk = k < odd.size() ? odd[k] : 0.0;
            const double kk = static_cast<double>(k) * std::numbers::pi / half_length;
            if ((std::abs(ak) + std::abs(bk)) * (1.0 + kk * kk) > 1e-22 * scale) last = k;
        }
        modes_ = last;
        even_.assign(modes_ + 1, Real(0));
        odd_.assign(modes_ + 1, Real(0));
        for (std::size_t k = 1; k <= modes_; ++k) {
            even_[k] = k < even.size() ? static_cast<Real>(even[k]) : Real(0);
            odd_[k] = k < odd.size() ? static_cast<Real>(odd[k]) : Real(0);
        }
        has_odd_ = std::any_of(odd_.begin(), odd_.end(), [](Real b) { return b != Real(0); });
    }

    [[nodiscard]] Real depth() const noexcept { return depth_; }
    [[nodiscard]] Real mean_elevation() const noexcept { return a0_; }
    [[nodiscard]] double half_length() const noexcept { return half_length_; }
    [[nodiscard]] std::size_t active_modes() const noexcept { return modes_; }

    /// z, z' - 1 and z'' at w = ξ + iζ, -h <= ζ <= 0.
    [[nodiscard]] Jet evaluate(Real xi, Real zeta) const {
        const Real s = zeta + depth_;
        Jet jet{Complex(xi, zeta + a0_), Complex(0, 0), Complex(0, 0)};
        if (modes_ == 0) return jet;

        const Real c1 = std::cos(theta_ * xi);
        const Real s1 = std::sin(theta_ * xi);
        const Real r1 = std::exp(theta_ * zeta);
        const Real r2 = std::exp(-theta_ * (s + depth_));
        const Real r3 = std::exp(-Real(2) * theta_ * depth_);

        Real cn = 1, sn = 0, p1 = 1, p2 = 1, p3 = 1;
        Real z_re = 0, z_im = 0, d_re = 0, d_im = 0, dd_re = 0, dd_im = 0;
        for (std::size_t k = 1; k <= modes_; ++k) {
            if (k % kRefresh == 0) {
                const Real kr = static_cast<Real>(k);
                cn = std::cos(kr * theta_ * xi);
                sn = std::sin(kr * theta_ * xi);
                p1 = std::exp(kr * theta_ * zeta);
                p2 = std::exp(-kr * theta_ * (s + depth_));
                p3 = std::exp(-Real(2) * kr * theta_ * depth_);
            } else {
                const Real cnew = cn * c1 - sn * s1;
                sn = sn * c1 + cn * s1;
                cn = cnew;
                p1 *= r1;
                p2 *= r2;
                p3 *= r3;
            }
            // cosh(κs)/sinh(κh) and sinh(κs)/sinh(κh)
            const Real inv = Real(1) / (Real(1) - p3);
            const Real ch = (p1 + p2) * inv;
            const Real sh = (p1 - p2) * inv;
            const Real kap = static_cast<Real>(k) * theta_;
            const Real a = even_[k];
            z_re += a * sn * ch;
            z_im += a * cn * sh;
            d_re += a * kap * cn * ch;
            d_im -= a * kap * sn * sh;
            dd_re -= a * kap * kap * sn * ch;
            dd_im -= a * kap * kap * cn * sh;
            if (has_odd_) {
                const Real b = odd_[k];
                z_re -= b * cn * ch;
                z_im += b * sn * sh;
                d_re += b * kap * sn * ch;
                d_im += b * kap * cn * sh;
                dd_re += b * kap * kap * cn * ch;
                dd_im -= b * kap * kap * sn * sh;
            }
        }
        jet.z += Complex(z_re, z_im);
        jet.zw_minus_one = Complex(d_re, d_im);
        jet.zww = Complex(dd_re, dd_im);
        return jet;
    }

    /// Surface abscissa X(ξ) and its derivative.
    [[nodiscard]] std::pair<Real, Real> surface_x(Real xi) const {
        const Jet j = evaluate(xi, Real(0));
        return {j.z.real(), Real(1) + j.zw_minus_one.real()};
    }

    /// Surface elevation Y(ξ).
    [[nodiscard]] Real surface_y(Real xi) const { return evaluate(xi, Real(0)).z.imag(); }

    /// Solves X(ξ) = x on the surface.
    [[nodiscard]] Real surface_preimage(Real x) const { return boundary_preimage(x, Real(0)); }

    /// Solves x_bed(ξ) = x along the bed ζ = -h.
    [[nodiscard]] Real bed_preimage(Real x) const { return boundary_preimage(x, -depth_); }

    /// Preimage w of the physical point x + iy. The caller guarantees the
    /// point lies in the closed fluid domain.
    [[nodiscard]] Complex preimage(Real x, Real y) const {
        const Real xi_s = surface_preimage(x);
        const Real top = surface_y(xi_s);
        const Real tol = Real(64) * std::numeric_limits<Real>::epsilon();
        if (std::abs(y - top) <= tol * (Real(1) + std::abs(top))) return Complex(xi_s, Real(0));
        if (std::abs(y + Real(1)) <= tol) return Complex(bed_preimage(x), -depth_);

        const Real frac = (y + Real(1)) / (top + Real(1));
        Complex w(xi_s, depth_ * (frac - Real(1)));
        const Complex target(x, y);
        for (int it = 0; it < kMaxNewton; ++it) {
            const Jet j = evaluate(w.real(), w.imag());
            const Complex step = (j.z - target) / (Complex(1, 0) + j.zw_minus_one);
            w -= step;
            w = Complex(w.real(), std::clamp(w.imag(), -depth_, Real(0)));
            if (std::abs(step) <= tol * (Real(1) + std::abs(w))) {
                // One extra step polishes the last bits.
                const Jet k = evaluate(w.real(), w.imag());
                w -= (k.z - target) / (Complex(1, 0) + k.zw_minus_one);
                w = Complex(w.real(), std::clamp(w.imag(), -depth_, Real(0)));
                return w;
            }
        }
        throw Error(ErrorCode::NoConvergence, "conformal preimage did not converge");
    }

private:
    static constexpr std::size_t kRefresh = 32;
    static constexpr int kMaxNewton = 60;

    [[nodiscard]] Real boundary_preimage(Real x, Real zeta) const {
        Real xi = x;
        const Real tol = Real(16) * std::numeric_limits<Real>::epsilon();
        for (int it = 0; it < kMaxNewton; ++it) {
            const Jet j = evaluate(xi, zeta);
            const Real step = (j.z.real() - x) / (Real(1) + j.zw_minus_one.real());
            xi -= step;
            if (std::abs(step) <= tol * (Real(1) + std::abs(xi))) {
                const Jet k = evaluate(xi, zeta);
                xi -= (k.z.real() - x) / (Real(1) + k.zw_minus_one.real());
                return xi;
            }
        }
        throw Error(ErrorCode::NoConvergence, "boundary preimage did not converge");
    }

    double half_length_;
    Real a0_{};
    Real depth_{};
    Real theta_{};
    std::size_t modes_ = 0;
    bool has_odd_ = false;
    std::vector<Real> even_;
    std::vector<Real> odd_;
};

} // namespace dynpress
