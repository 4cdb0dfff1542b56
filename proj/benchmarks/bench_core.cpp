#include <benchmark/benchmark.h>

#include "csid/adaptive.hpp"
#include "csid/channel.hpp"
#include "csid/measurement.hpp"
#include "csid/recovery.hpp"
#include "csid/signal.hpp"

namespace {

void BM_ConvolveFull(benchmark::State& state) {
    csid::SeededRng rng(1);
    const csid::Signal a = csid::gaussian_vector(rng, state.range(0), 0.0, 1.0);
    const csid::Signal b = csid::gaussian_vector(rng, 80, 0.0, 1.0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(csid::convolve_full(a, b));
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ConvolveFull)->RangeMultiplier(4)->Range(1 << 10, 1 << 16)->Complexity();

void BM_LmsAdaptation(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    csid::SeededRng rng(2);
    const csid::SparseSystem sys = csid::gen_sparse_system(rng, n, n / 10 + 1);
    const csid::Signal pilot = csid::gaussian_vector(rng, 2000, 0.0, 1.0);
    csid::SeededRng noise(3);
    const csid::PlantOutput plant = csid::conventional_desired(sys, pilot, noise, 0.01);
    const csid::AdaptiveState s0{csid::Signal::Zero(n), 0.4 / n, 0.0, 0};
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            csid::run_adaptation(s0, pilot, plant.desired, csid::Algorithm::lms, {100, nullptr}));
    }
    state.SetItemsProcessed(state.iterations() * 2000);
}
BENCHMARK(BM_LmsAdaptation)->Arg(128)->Arg(289)->Arg(500);

void BM_MeasurementApply(benchmark::State& state) {
    csid::SeededRng rng(4);
    const csid::RandomFilter f = csid::gen_random_filter(rng, 80);
    const csid::MeasurementOperator op = csid::build_measurement_operator(f, 500, 2, 1);
    const csid::Signal s = csid::gaussian_vector(rng, 500, 0.0, 1.0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(op.apply(s));
    }
}
BENCHMARK(BM_MeasurementApply);

void BM_MeasurementApplyStreaming(benchmark::State& state) {
    csid::SeededRng rng(4);
    const csid::RandomFilter f = csid::gen_random_filter(rng, 80);
    const csid::MeasurementOperator op = csid::build_measurement_operator(f, 500, 2, 1);
    const csid::Signal s = csid::gaussian_vector(rng, 500, 0.0, 1.0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(op.apply_streaming(s));
    }
}
BENCHMARK(BM_MeasurementApplyStreaming);

void BM_SolveL1(benchmark::State& state) {
    csid::SeededRng rng(5);
    csid::RandomFilter f = csid::gen_random_filter(rng, 32);
    f.f *= 1.0 / std::sqrt(32.0);
    const csid::MeasurementOperator op = csid::build_measurement_operator(f, 100, 2, 1);
    const csid::SparseSystem sys = csid::gen_sparse_system(rng, 100, 5);
    const csid::Signal y = op.apply(sys.h);
    const csid::RecoveryProblem p{y, &op, 1e-4};
    for (auto _ : state) {
        benchmark::DoNotOptimize(csid::solve_l1(p, {2000, 1e-10, csid::Acceleration::accelerated}));
    }
}
BENCHMARK(BM_SolveL1);

}  // namespace

BENCHMARK_MAIN();
