// microbenchmarks for the hot paths: segment shooting, the characteristic
// function, spectrum computation, weighted inner products, and the two
// reconstruction back ends. Pick a subset with --benchmark_filter=<regex>.

#include <benchmark/benchmark.h>

#include <complex>

#include "slsamp/classical.hpp"
#include "slsamp/eigensolve.hpp"
#include "slsamp/hilbert.hpp"
#include "slsamp/quadrature.hpp"
#include "slsamp/sampling.hpp"
#include "slsamp/shooting.hpp"

using namespace slsamp;

namespace {

Problem make_reference() {
    RawProblem r;
    r.a = 0;
    r.c1 = 1;
    r.c2 = 2;
    r.b = 3;
    r.beta1 = 0;
    r.beta2 = 1;
    r.alpha1 = 1;
    r.alpha2 = 0;
    r.alpha1p = 0;
    r.alpha2p = -1;
    r.delta = 1;
    r.gamma = 1;
    return Problem::validate(r);
}

const Problem& ref() {
    static Problem p = make_reference();
    return p;
}

const Spectrum& spec30() {
    static Spectrum s = compute_spectrum(ref(), 30);
    return s;
}

const SegmentGrids& grids() {
    static SegmentGrids g = make_segment_grids(ref());
    return g;
}

PiecewiseFn parabola() { return PiecewiseFn::polynomial({0.0, 3.0, -1.0}); }

void BM_ShootLeft(benchmark::State& state) {
    const Problem& p = ref();
    double lam = static_cast<double>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(shoot_left(p, lam));
}
BENCHMARK(BM_ShootLeft)->Arg(10)->Arg(100)->Arg(400);

void BM_Characteristic(benchmark::State& state) {
    const Problem& p = ref();
    double lam = static_cast<double>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(omega(p, lam));
}
BENCHMARK(BM_Characteristic)->Arg(10)->Arg(100)->Arg(400);

void BM_Spectrum(benchmark::State& state) {
    const Problem& p = ref();
    int n = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(compute_spectrum(p, n));
}
BENCHMARK(BM_Spectrum)->Arg(10)->Arg(30)->Unit(benchmark::kMillisecond);

void BM_InnerProduct(benchmark::State& state) {
    const Problem& p = ref();
    const Spectrum& s = spec30();
    static HVector F = lift(p, shoot_left(p, s.entries[2].lambda, {}, &grids()), grids());
    static HVector G = lift(p, shoot_left(p, s.entries[5].lambda, {}, &grids()), grids());
    for (auto _ : state) benchmark::DoNotOptimize(inner_product(p, grids(), F, G));
}
BENCHMARK(BM_InnerProduct);

void BM_ForwardTransform(benchmark::State& state) {
    const Problem& p = ref();
    static PiecewiseFn g = parabola();
    for (auto _ : state) benchmark::DoNotOptimize(forward_transform(p, grids(), g, 7.7));
}
BENCHMARK(BM_ForwardTransform);

void BM_ReconstructProbe(benchmark::State& state) {
    const Problem& p = ref();
    static PiecewiseFn g = parabola();
    static TransformSamples samples = sample_transform(p, g, spec30());
    // midgap probe, far from the node snap radius
    double lam =
        0.5 * (samples.entries[7].lambda + samples.entries[8].lambda);
    for (auto _ : state) benchmark::DoNotOptimize(reconstruct(p, samples, lam));
}
BENCHMARK(BM_ReconstructProbe);

void BM_WksReconstruct(benchmark::State& state) {
    static BandlimitedSamples s = uniform_samples(2.0, -60, 60, [](double t) {
        return sinc_kernel(2.0, t, 0) + 0.5 * sinc_kernel(2.0, t, 3);
    });
    for (auto _ : state) benchmark::DoNotOptimize(wks_reconstruct(s, 0.737));
}
BENCHMARK(BM_WksReconstruct);

void BM_LevinsonReconstruct(benchmark::State& state) {
    static BandlimitedSamples s = uniform_samples(2.0, -60, 60, [](double t) {
        return sinc_kernel(2.0, t, 0) + 0.5 * sinc_kernel(2.0, t, 3);
    });
    for (auto _ : state) benchmark::DoNotOptimize(levinson_reconstruct(s, 0.737));
}
BENCHMARK(BM_LevinsonReconstruct);

}  // namespace

BENCHMARK_MAIN();
