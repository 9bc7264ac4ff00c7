#include <benchmark/benchmark.h>

#include "satent/phase_screen.hpp"
#include "satent/propagation.hpp"

using namespace satent;

static void BM_VacuumStep(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const Grid g{n, 1.6 / static_cast<double>(n)};
    const auto beam = gaussian_beam(g, 0.1);
    BeamParams b;
    for (auto _ : state) {
        auto out = vacuum_step(beam, 5e4, b.wavenumber(), 1.5);
        benchmark::DoNotOptimize(out);
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_VacuumStep)->RangeMultiplier(2)->Range(256, 1024)->Unit(benchmark::kMillisecond);

static void BM_ScreenSynthesis(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const Grid g{n, 0.005};
    const auto psd = psd_params(0.1, 5000.0);
    std::uint64_t run = 0;
    for (auto _ : state) {
        RngStream rng(StreamKey{1, run++, 0});
        auto screen = synthesize_screen(psd, g, rng, 3);
        benchmark::DoNotOptimize(screen);
    }
}
BENCHMARK(BM_ScreenSynthesis)->RangeMultiplier(2)->Range(256, 1024)->Unit(benchmark::kMillisecond);

static void BM_TurbulentPropagation(benchmark::State& state) {
    TurbulenceProfile p;
    BeamParams b;
    LinkGeometry geo{500e3, state.range(0) ? LinkDirection::Uplink : LinkDirection::Downlink};
    PropagationConfig cfg;
    cfg.grid_points = 512;
    cfg.samples_per_waist = 32.0;
    cfg.receiver_extent_factor = 6.0;
    const auto plan = plan_screens(p, b, geo, 0.2);
    const auto layout = make_layout(p, b, geo, plan, cfg);
    const auto src = gaussian_beam(layout.source_grid, b.waist);
    std::uint64_t run = 0;
    for (auto _ : state) {
        auto rx = propagate(src, plan, layout, cfg, 7, run++);
        benchmark::DoNotOptimize(rx);
    }
}
BENCHMARK(BM_TurbulentPropagation)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
