#include "dynpress/cosine_series.hpp"
#include "dynpress/flow_fields.hpp"
#include "dynpress/gauge.hpp"
#include "dynpress/verifier.hpp"
#include "dynpress/wave_solver.hpp"

#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

using namespace dynpress;

namespace {

const WaveSolution& wave(double a) {
    static std::vector<std::pair<double, WaveSolution>> cache;
    for (const auto& [amp, sol] : cache)
        if (amp == a) return sol;
    WaveRequest r;
    r.env = Environment(9.81, 1.0);
    r.amplitude = a;
    cache.emplace_back(a, solve_wave(r));
    return cache.back().second;
}

void BM_CosineRoundTrip(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const CosineTransform t(n);
    std::vector<double> a(n);
    for (std::size_t k = 0; k < n; ++k) a[k] = 1.0 / (1.0 + static_cast<double>(k));
    for (auto _ : state) benchmark::DoNotOptimize(t.analyze(t.synthesize(a)));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_CosineRoundTrip)->RangeMultiplier(4)->Range(64, 4096)->Complexity();

void BM_SolveWave(benchmark::State& state) {
    WaveRequest r;
    r.env = Environment(1.0, 1.0);
    r.amplitude = static_cast<double>(state.range(0)) / 100.0;
    for (auto _ : state) benchmark::DoNotOptimize(solve_wave(r));
}
BENCHMARK(BM_SolveWave)->Arg(10)->Arg(30)->Arg(50)->Unit(benchmark::kMillisecond);

void BM_LocalFlow(benchmark::State& state) {
    const FlowField field(wave(0.3));
    double x = 0.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(field.local_flow({x, -0.4}));
        x = std::fmod(x + 0.37, 10.0);
    }
}
BENCHMARK(BM_LocalFlow);

void BM_SampleGrid(benchmark::State& state) {
    const FlowField field(wave(0.3));
    const GridSpec spec = GridSpec::uniform(0.0, field.truncation_length(), 201, 41);
    for (auto _ : state) benchmark::DoNotOptimize(sample_grid(field, spec));
}
BENCHMARK(BM_SampleGrid)->Unit(benchmark::kMillisecond);

void BM_Superharmonic(benchmark::State& state) {
    const FlowField field(wave(0.3));
    for (auto _ : state) benchmark::DoNotOptimize(check_superharmonic(field));
}
BENCHMARK(BM_Superharmonic)->Unit(benchmark::kMillisecond);

void BM_HeightBound(benchmark::State& state) {
    const WaveSolution& sol = wave(0.3);
    std::vector<double> stations;
    for (int i = 0; i < 401; ++i) stations.push_back(-sol.truncation_length() + sol.truncation_length() * i / 200.0);
    const GaugeTrace trace = synth_trace(sol, stations, 1e-3, 1);
    for (auto _ : state) benchmark::DoNotOptimize(height_lower_bound(trace, sol.env));
}
BENCHMARK(BM_HeightBound);

} // namespace

BENCHMARK_MAIN();
