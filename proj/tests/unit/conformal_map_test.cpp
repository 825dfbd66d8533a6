#include "dynpress/conformal_map.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

using namespace dynpress;
using cd = std::complex<double>;

namespace {

struct Spectrum {
    std::vector<double> even{-0.02, 0.05, 0.02, -0.01, 0.004, 0.001};
    std::vector<double> odd{0.0, 0.003, -0.002, 0.0, 0.0, 0.0005};
    double lam = 6.0;
};

// Closed form summed with complex trigonometric functions.
cd direct_z(const Spectrum& s, cd w) {
    const double h = 1.0 + s.even[0];
    cd z = w + cd(0.0, s.even[0]);
    for (std::size_t k = 1; k < s.even.size(); ++k) {
        const double kap = k * std::numbers::pi / s.lam;
        const cd arg = kap * (w + cd(0.0, h));
        z += (s.even[k] * std::sin(arg) - s.odd[k] * std::cos(arg)) / std::sinh(kap * h);
    }
    return z;
}

} // namespace

TEST(ConformalMap, AgreesWithClosedForm) {
    const Spectrum s;
    const ConformalMap<double> map(s.even, s.odd, s.lam);
    const double h = map.depth();
    for (double xi : {0.0, 0.7, 2.3, 5.9}) {
        for (double f : {0.0, 0.25, 0.6, 1.0}) {
            const cd w(xi, -f * h);
            const auto jet = map.evaluate(w.real(), w.imag());
            EXPECT_NEAR(std::abs(jet.z - direct_z(s, w)), 0.0, 1e-14);
            const double e = 1e-5;
            const cd fd = (direct_z(s, w + e) - direct_z(s, w - e)) / (2 * e);
            EXPECT_NEAR(std::abs(cd(1.0, 0.0) + jet.zw_minus_one - fd), 0.0, 1e-9);
            const double e2 = 1e-3;
            const cd fd2 = (direct_z(s, w + e2) - 2.0 * direct_z(s, w) + direct_z(s, w - e2)) / (e2 * e2);
            EXPECT_NEAR(std::abs(jet.zww - fd2), 0.0, 1e-7);
        }
    }
}

TEST(ConformalMap, BottomOfStripIsTheFlatBed) {
    const Spectrum s;
    const ConformalMap<double> map(s.even, s.odd, s.lam);
    for (double xi = 0.0; xi < 2 * s.lam; xi += 0.37) {
        EXPECT_NEAR(map.evaluate(xi, -map.depth()).z.imag(), -1.0, 1e-15);
    }
}

TEST(ConformalMap, TopOfStripIsTheSurfaceSeries) {
    const Spectrum s;
    const ConformalMap<double> map(s.even, s.odd, s.lam);
    for (double xi = 0.0; xi < s.lam; xi += 0.41) {
        double y = s.even[0];
        for (std::size_t k = 1; k < s.even.size(); ++k) {
            const double kap = k * std::numbers::pi / s.lam;
            y += s.even[k] * std::cos(kap * xi) + s.odd[k] * std::sin(kap * xi);
        }
        EXPECT_NEAR(map.surface_y(xi), y, 1e-15);
    }
}

TEST(ConformalMap, PreimageInvertsTheMap) {
    const Spectrum s;
    const ConformalMap<double> map(s.even, s.odd, s.lam);
    for (double xi : {0.0, 1.1, 3.0, 5.5}) {
        for (double f : {0.0, 0.3, 0.8, 1.0}) {
            const cd w(xi, -f * map.depth());
            const cd z = map.evaluate(w.real(), w.imag()).z;
            const cd back = map.preimage(z.real(), z.imag());
            EXPECT_NEAR(std::abs(back - w), 0.0, 1e-12) << "xi = " << xi << ", f = " << f;
        }
    }
    const double x = 2.0;
    EXPECT_NEAR(map.surface_x(map.surface_preimage(x)).first, x, 1e-14);
    EXPECT_NEAR(map.evaluate(map.bed_preimage(x), -map.depth()).z.real(), x, 1e-14);
}

TEST(ConformalMap, NegligibleModesAreDropped) {
    std::vector<double> even{0.0, 0.1, 1e-30, 0.0};
    const ConformalMap<double> map(even, {}, 5.0);
    EXPECT_EQ(map.active_modes(), 1u);
    EXPECT_THROW(ConformalMap<double>(std::vector<double>{}, {}, 5.0), Error);
}

TEST(ConformalMap, ExtendedPrecisionAgrees) {
    const Spectrum s;
    const ConformalMap<double> a(s.even, s.odd, s.lam);
    const ConformalMap<long double> b(s.even, s.odd, s.lam);
    const auto ja = a.evaluate(1.3, -0.4);
    const auto jb = b.evaluate(1.3L, -0.4L);
    EXPECT_NEAR(ja.z.real(), static_cast<double>(jb.z.real()), 1e-15);
    EXPECT_NEAR(ja.zww.imag(), static_cast<double>(jb.zww.imag()), 1e-14);
}
