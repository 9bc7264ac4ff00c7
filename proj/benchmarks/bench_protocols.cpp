#include <benchmark/benchmark.h>

#include "satent/gaussian_cv.hpp"
#include "satent/optimize.hpp"
#include "satent/protocols.hpp"

using namespace satent;

static void BM_RelayAmp(benchmark::State& state) {
    const bool cv = state.range(0) != 0;
    const Resource r{cv ? ResourceKind::CV : ResourceKind::DV, cv ? 0.3 : 0.25, 5};
    for (auto _ : state) benchmark::DoNotOptimize(relay_amp(r, 2.0, 0.01, 0.01));
}
BENCHMARK(BM_RelayAmp)->Arg(0)->Arg(1)->Unit(benchmark::kMicrosecond);

static void BM_DistAmp(benchmark::State& state) {
    const bool cv = state.range(0) != 0;
    const Resource r{cv ? ResourceKind::CV : ResourceKind::DV, cv ? 0.15 : 0.5, 5};
    for (auto _ : state) benchmark::DoNotOptimize(dist_amp(r, 5.0, 5.0, 0.01, 0.01));
}
BENCHMARK(BM_DistAmp)->Arg(0)->Arg(1)->Unit(benchmark::kMicrosecond);

static void BM_GaussianRelay(benchmark::State& state) {
    const double nu = nu_from_squeezing_db(8.0);
    for (auto _ : state) benchmark::DoNotOptimize(relay_unamp_cv(nu, 0.01, 0.02));
}
BENCHMARK(BM_GaussianRelay);

static void BM_OptimizeRelayAmp(benchmark::State& state) {
    const ProtocolSpec spec{Configuration::Relay, ResourceKind::DV, true};
    SearchOptions opts;
    opts.grid_points = 11;
    for (auto _ : state) benchmark::DoNotOptimize(optimize_protocol(spec, 0.01, 0.01, opts));
}
BENCHMARK(BM_OptimizeRelayAmp)->Unit(benchmark::kMillisecond);
