// Parallel kernels against their serial references.

#include "sandwich/cheeger.hpp"
#include "sandwich/fem.hpp"
#include "sandwich/measure.hpp"
#include "sandwich/mesh.hpp"

#include <benchmark/benchmark.h>

#include <memory>
#include <vector>

using namespace sandwich;

namespace {

const Mesh& bench_mesh() {
    static const Mesh m = triangulate(Polygon::regular(12, 1.0), 0.02, 1);
    return m;
}

void BM_Assemble(benchmark::State& st) {
    for (auto _ : st) benchmark::DoNotOptimize(assemble(bench_mesh()));
}
void BM_AssembleSerial(benchmark::State& st) {
    for (auto _ : st) benchmark::DoNotOptimize(assemble_serial(bench_mesh()));
}

void spmv(benchmark::State& st, bool parallel) {
    const FemSystem sys = assemble(bench_mesh());
    std::vector<double> x(sys.stiffness.dimension, 1.0), y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = 1.0 / (1.0 + static_cast<double>(i));
    for (auto _ : st) {
        if (parallel)
            sys.stiffness.multiply(x, y);
        else
            sys.stiffness.multiply_serial(x, y);
        benchmark::DoNotOptimize(y.data());
    }
}
void BM_SpMV(benchmark::State& st) { spmv(st, true); }
void BM_SpMVSerial(benchmark::State& st) { spmv(st, false); }

const ConvexBody mc_body{Polygon::regular(7, 1.0)};
const Region mc_region = [](Point2 p) { return p.x * p.x + p.y * p.y <= 0.5; };

void BM_MonteCarlo(benchmark::State& st) {
    for (auto _ : st) benchmark::DoNotOptimize(mc_measure(mc_region, mc_body, 200'000, 1));
}
void BM_MonteCarloSerial(benchmark::State& st) {
    for (auto _ : st) benchmark::DoNotOptimize(mc_measure_serial(mc_region, mc_body, 200'000, 1));
}

const Polygon sweep_body = Polygon::regular(9, 1.0);

void BM_CheegerSweep(benchmark::State& st) {
    for (auto _ : st) benchmark::DoNotOptimize(cheeger_upper(sweep_body));
}
void BM_CheegerSweepSerial(benchmark::State& st) {
    for (auto _ : st) benchmark::DoNotOptimize(cheeger_upper_serial(sweep_body));
}

} // namespace

BENCHMARK(BM_Assemble)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_AssembleSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SpMV)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_SpMVSerial)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_MonteCarlo)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MonteCarloSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CheegerSweep)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CheegerSweepSerial)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
