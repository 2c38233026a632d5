#include <benchmark/benchmark.h>

#include <cmath>

#include "bmhull/estimate.hpp"
#include "bmhull/integrals.hpp"
#include "bmhull/paths.hpp"

using namespace bmhull;

namespace {

PathSample make_path(int points)
{
    RandomStream rng(7, 0);
    return sample_brownian(2, TimeGrid::uniform(0.0, 1.0, points), rng);
}

void BM_modulus(benchmark::State& st)
{
    const PathSample p = make_path(static_cast<int>(st.range(0)));
    for (auto _ : st)
        benchmark::DoNotOptimize(modulus(p, 0.05));
}

void BM_modulus_reference(benchmark::State& st)
{
    const PathSample p = make_path(static_cast<int>(st.range(0)));
    for (auto _ : st)
        benchmark::DoNotOptimize(modulus_reference(p, 0.05));
}

void BM_check_Y(benchmark::State& st)
{
    const PathSample p = make_path(static_cast<int>(st.range(0)));
    for (auto _ : st)
        benchmark::DoNotOptimize(check_Y(p, 50.0, 0.0, 1.0, 2));
}

void BM_check_Y_reference(benchmark::State& st)
{
    const PathSample p = make_path(static_cast<int>(st.range(0)));
    for (auto _ : st)
        benchmark::DoNotOptimize(check_Y_reference(p, 50.0, 0.0, 1.0, 2));
}

void BM_quadrature(benchmark::State& st)
{
    for (auto _ : st)
        benchmark::DoNotOptimize(integral_Za_quadrature(std::exp(-2.0), 2, static_cast<int>(st.range(0))));
}

void BM_quadrature_reference(benchmark::State& st)
{
    for (auto _ : st)
        benchmark::DoNotOptimize(integral_Za_quadrature_reference(std::exp(-2.0), 2, static_cast<int>(st.range(0))));
}

void replicas(benchmark::State& st, Execution ex)
{
    EstimatorConfig c;
    c.replicas = static_cast<std::uint64_t>(st.range(0));
    c.execution = ex;
    for (auto _ : st)
        benchmark::DoNotOptimize(run_replicas(c, tag_of("bench"), false, [](std::uint64_t, RandomStream& rng) {
            double s = 0.0;
            for (int k = 0; k < 256; ++k)
                s += rng.gaussian();
            return s;
        }));
}

void BM_replicas_parallel(benchmark::State& st) { replicas(st, Execution::parallel); }
void BM_replicas_serial(benchmark::State& st) { replicas(st, Execution::serial); }

} // namespace

BENCHMARK(BM_modulus)->Arg(256)->Arg(1024);
BENCHMARK(BM_modulus_reference)->Arg(256)->Arg(1024);
BENCHMARK(BM_check_Y)->Arg(256)->Arg(1024);
BENCHMARK(BM_check_Y_reference)->Arg(256)->Arg(1024);
BENCHMARK(BM_quadrature)->Arg(32)->Arg(64);
BENCHMARK(BM_quadrature_reference)->Arg(32)->Arg(64);
BENCHMARK(BM_replicas_parallel)->Arg(4096);
BENCHMARK(BM_replicas_serial)->Arg(4096);

BENCHMARK_MAIN();
