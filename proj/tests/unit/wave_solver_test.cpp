#include "dynpress/error.hpp"
#include "dynpress/flow_fields.hpp"
#include "dynpress/wave_solver.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>

using namespace dynpress;

namespace {

const Environment kUnit(1.0, 1.0, 0.0);

WaveSolution solve_unit(double a, int modes = 1024, double tol = 1e-12) {
    WaveRequest r;
    r.env = kUnit;
    r.amplitude = a;
    r.modes = modes;
    r.tol = tol;
    return solve_wave(r);
}

// Root of F² q = tan q on (0, π/2) by plain bisection.
double bisect_decay(double froude) {
    double lo = 1e-12, hi = std::numbers::pi / 2 - 1e-12;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (froude * froude * mid - std::tan(mid) > 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

ErrorCode code_of(const WaveRequest& r) {
    try {
        (void)solve_wave(r);
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "no error thrown";
    return ErrorCode::Precondition;
}

} // namespace

TEST(TailDecayRate, MatchesBisectionOracle) {
    const Environment env(9.81, 2.0);
    for (double f : {1.02, 1.1, 1.2, 1.29}) {
        const double c = f * std::sqrt(9.81 * 2.0);
        EXPECT_NEAR(tail_decay_rate(env, c) * 2.0, bisect_decay(f), 1e-12) << "F = " << f;
    }
}

TEST(TailDecayRate, RejectsSubcriticalSpeed) {
    try {
        (void)tail_decay_rate(kUnit, 0.9);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::FroudeSubcritical);
    }
    EXPECT_THROW((void)tail_decay_rate(kUnit, 1.0), Error);
}

TEST(KdvProfile, SpeedAndDecay) {
    const KdvProfile k = kdv_profile(0.1, Environment(9.81, 1.0));
    EXPECT_NEAR(k.speed, 3.2849, 1e-4);
    EXPECT_DOUBLE_EQ(k(0.0), 0.1);
    EXPECT_DOUBLE_EQ(k(-3.0), k(3.0));
    const double kappa = std::sqrt(3 * 0.1 / 4);
    // 0.1 sech²(20 κ) = 7.0e-6; the sech² tail is 4 a e^{-2κx} to leading order.
    EXPECT_NEAR(k(20.0), 6.99177e-6, 1e-11);
    EXPECT_NEAR(k(20.0), 0.4 * std::exp(-40 * kappa), 1e-3 * k(20.0));
    EXPECT_NEAR(k(1.0), 0.1 / std::pow(std::cosh(kappa), 2), 1e-16);
    EXPECT_THROW((void)kdv_profile(0.3, kUnit), Error);
    EXPECT_THROW((void)kdv_profile(-0.1, kUnit), Error);
}

TEST(SolveWave, SmallAmplitudeWave) {
    WaveRequest r;
    r.env = Environment(1.0, 1.0, 2.0);
    r.amplitude = 0.05;
    const WaveSolution sol = solve_wave(r);
    ASSERT_TRUE(sol.diagnostics.converged);
    EXPECT_TRUE(sol.odd_spectrum.empty());
    EXPECT_NEAR(sol.froude, 1.024631357241, 1e-10);
    // Third-order long-wave expansion of the speed.
    const double a = 0.05;
    EXPECT_NEAR(sol.froude * sol.froude, 1 + a - a * a / 20 - 3 * a * a * a / 70, 1e-5);
    EXPECT_NEAR(FlowField(sol).surface_elevation(0.0), a, 1e-12);
    EXPECT_DOUBLE_EQ(sol.mass_flux, sol.speed * 1.0);
    EXPECT_DOUBLE_EQ(sol.bernoulli_constant, 0.5 * sol.speed * sol.speed + 2.0);
    EXPECT_LE(sol.diagnostics.residual, 1e-12);
    EXPECT_LT(sol.diagnostics.tail_elevation, 1e-10);
}

TEST(SolveWave, DeviationFromLongWaveProfileIsFrozen) {
    // max |η - η_KdV| / a sampled at 4001 points over [0, Λ]; computed once
    // with N = 512 and frozen.
    const std::pair<double, double> cases[] = {{0.05, 1.059578e-02}, {0.025, 5.439908e-03}};
    for (const auto& [a, frozen] : cases) {
        const WaveSolution sol = solve_unit(a, 512);
        const FlowField field(sol);
        const KdvProfile kdv = kdv_profile(a, kUnit);
        double worst = 0.0;
        for (int i = 0; i <= 4000; ++i) {
            const double x = field.truncation_length() * i / 4000;
            worst = std::max(worst, std::abs(field.surface_elevation(x) - kdv(x)));
        }
        EXPECT_NEAR(worst / a, frozen, 1e-8) << "a = " << a;
    }
}

TEST(SolveWave, ResidualsOnFreshProbeGrid) {
    const WaveSolution sol = solve_unit(0.3, 1024, 1e-11);
    ProbeSpec probe;
    probe.surface_points = 8 * sol.modes();
    const ResidualReport rep = residuals(sol, probe);
    EXPECT_LE(rep.bernoulli_surface_residual, 10 * 1e-11);
    EXPECT_LE(rep.kinematic_surface_residual, 1e-12);
    EXPECT_LE(rep.bed_residual, 1e-12);
    EXPECT_LE(rep.laplace_residual, 1e-9);
    EXPECT_LE(rep.decay_residual, 1e-8);
}

TEST(SolveWave, StillWaterSatisfiesTheSystem) {
    const WaveSolution sol = still_water(Environment(9.81, 2.0), 1.2);
    EXPECT_TRUE(sol.is_still_water());
    EXPECT_DOUBLE_EQ(sol.speed, 1.2 * std::sqrt(9.81 * 2.0));
    const ResidualReport rep = residuals(sol);
    EXPECT_LE(rep.bernoulli_surface_residual, 1e-15);
    EXPECT_LE(rep.kinematic_surface_residual, 1e-15);
    EXPECT_LE(rep.bed_residual, 1e-15);
    EXPECT_LE(rep.laplace_residual, 1e-12);
    EXPECT_LE(rep.decay_residual, 1e-15);
}

TEST(SolveWave, ProfileIsSymmetricAndMonotone) {
    const WaveSolution sol = solve_unit(0.3);
    EXPECT_GT(sol.froude - 1.0, 0.0);
    const FlowField field(sol);
    const double lam = field.truncation_length();
    double previous = field.surface_elevation(0.0);
    for (int i = 1; i <= 400; ++i) {
        const double x = lam * i / 400;
        const double eta = field.surface_elevation(x);
        EXPECT_LE(std::abs(eta - field.surface_elevation(-x)), 1e-12 * 0.3);
        if (x < 0.8 * lam) EXPECT_LT(eta, previous) << "x = " << x;
        previous = eta;
    }
}

TEST(SolveWave, TailFollowsLinearDecayRate) {
    // Fit log η on the last quarter; the rate solves c²μ = g tan(μd).
    const WaveSolution sol = solve_unit(0.3);
    const FlowField field(sol);
    const double lam = field.truncation_length();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const int n = 100;
    for (int i = 0; i <= n; ++i) {
        const double x = lam * (0.75 + 0.2 * i / n);
        const double y = std::log(field.surface_elevation(x));
        sx += x, sy += y, sxx += x * x, sxy += x * y;
    }
    const double m = n + 1;
    const double fitted = -(m * sxy - sx * sy) / (m * sxx - sx * sx);
    EXPECT_NEAR(fitted, bisect_decay(sol.froude), 0.02 * bisect_decay(sol.froude));
}

TEST(SolveWave, FroudeTargetRecoversAmplitude) {
    WaveRequest r;
    r.env = kUnit;
    r.froude = 1.137523016631;
    const WaveSolution sol = solve_wave(r);
    EXPECT_NEAR(sol.froude, 1.137523016631, 1e-10);
    EXPECT_NEAR(sol.amplitude, 0.3, 1e-8);
}

TEST(SolveWave, AmplitudeWinsWhenConsistent) {
    WaveRequest r;
    r.env = kUnit;
    r.amplitude = 0.3;
    r.froude = 1.1375230;
    EXPECT_NO_THROW((void)solve_wave(r));
    r.froude = 1.14;
    EXPECT_EQ(code_of(r), ErrorCode::InputConflict);
}

TEST(SolveWave, ValidatesInputs) {
    WaveRequest r;
    r.env = kUnit;
    EXPECT_EQ(code_of(r), ErrorCode::InvalidInput);
    r.amplitude = 0.3;
    r.modes = 63;
    EXPECT_EQ(code_of(r), ErrorCode::InvalidInput);
    r.modes = 96;
    EXPECT_EQ(code_of(r), ErrorCode::InvalidInput);
    r.modes = 1024;
    r.amplitude = 0.9;
    EXPECT_EQ(code_of(r), ErrorCode::AmplitudeCapExceeded);
    r.amplitude = -0.1;
    EXPECT_EQ(code_of(r), ErrorCode::AmplitudeOutOfRange);
    r.amplitude.reset();
    r.froude = 0.9;
    EXPECT_EQ(code_of(r), ErrorCode::FroudeSubcritical);
}

TEST(SolveWave, TightToleranceReportsNoConvergence) {
    WaveRequest r;
    r.env = kUnit;
    r.amplitude = 0.05;
    r.tol = 1e-30;
    EXPECT_EQ(code_of(r), ErrorCode::NoConvergence);
}

TEST(SolveWave, ScalesWithGravityAndDepth) {
    WaveRequest r;
    r.env = Environment(9.81, 2.0);
    r.amplitude = 0.6;
    const WaveSolution dim = solve_wave(r);
    const WaveSolution unit = solve_unit(0.3);
    EXPECT_NEAR(dim.froude, unit.froude, 1e-11);
    EXPECT_NEAR(dim.speed, unit.froude * std::sqrt(9.81 * 2.0), 1e-10);
    EXPECT_NEAR(dim.truncation_length(), 2.0 * unit.truncation_length(), 1e-12);
    EXPECT_NEAR(dim.amplitude, 0.6, 1e-12);
}

TEST(ContinueAmplitude, SingleStepEqualsDirectSolve) {
    WaveRequest base;
    base.env = kUnit;
    const auto seq = continue_amplitude(base, {0.1});
    ASSERT_EQ(seq.size(), 1u);
    EXPECT_NEAR(seq[0].froude, solve_unit(0.1).froude, 1e-12);
}

TEST(ContinueAmplitude, SpeedIncreasesWithAmplitude) {
    WaveRequest base;
    base.env = kUnit;
    const auto seq = continue_amplitude(base, {0.1, 0.2, 0.3});
    ASSERT_EQ(seq.size(), 3u);
    EXPECT_LT(seq[0].froude, seq[1].froude);
    EXPECT_LT(seq[1].froude, seq[2].froude);
    EXPECT_NEAR(seq[0].froude, std::sqrt(1.1), 0.02 * std::sqrt(1.1));
}

TEST(ContinueAmplitude, NamesTheFailingAmplitude) {
    WaveRequest base;
    base.env = kUnit;
    try {
        (void)continue_amplitude(base, {0.1, 0.9});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::AmplitudeCapExceeded);
        EXPECT_NE(std::string(e.what()).find("0.9"), std::string::npos) << e.what();
    }
    EXPECT_THROW((void)continue_amplitude(base, {0.3, 0.1}), Error);
}

TEST(DefaultHalfLength, GrowsAsAmplitudeShrinks) {
    EXPECT_GT(default_half_length(0.05), default_half_length(0.1));
    EXPECT_GT(default_half_length(0.1), default_half_length(0.5));
    const WaveSolution sol = solve_unit(0.3);
    EXPECT_LT(std::abs(trough_elevation(sol)), 1e-10 * 0.3);
}

TEST(WaveSolution, JsonRoundTrip) {
    const WaveSolution sol = solve_unit(0.1);
    const nlohmann::json j = sol;
    const auto back = j.get<WaveSolution>();
    EXPECT_EQ(back.surface_spectrum, sol.surface_spectrum);
    EXPECT_EQ(back.speed, sol.speed);
    EXPECT_EQ(back.env, sol.env);
    EXPECT_EQ(back.diagnostics.converged, sol.diagnostics.converged);
    EXPECT_EQ(nlohmann::json(back).dump(), j.dump());
}

TEST(WaveSolution, SpectrumCsv) {
    const WaveSolution sol = solve_unit(0.1);
    std::ostringstream os;
    write_spectrum_csv(os, sol);
    std::istringstream is(os.str());
    std::string line;
    std::getline(is, line);
    EXPECT_EQ(line, "k,coefficient");
    int rows = 0;
    while (std::getline(is, line)) ++rows;
    EXPECT_EQ(rows, sol.modes());
}
