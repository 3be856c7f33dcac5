#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "nlapprox/kernels.hpp"
#include "nlapprox/metrics.hpp"
#include "nlapprox/theorem.hpp"

using namespace nlapprox;

namespace {

const Approximant& approximant_1d() {
    static const Approximant ap = construct(holder_family("cone", 1, 0.5, 1.0), 8, {});
    return ap;
}

const Approximant& approximant_2d() {
    static const Approximant ap = construct(holder_family("cone", 2, 1.0, 1.0), 9, {});
    return ap;
}

GridSpec grid(std::size_t d, std::size_t p) {
    GridSpec g = default_grid(d);
    g.points_per_axis = p;
    return g;
}

void BM_l1_parallel_1d(benchmark::State& s) {
    const HolderTarget t = holder_family("cone", 1, 0.5, 1.0);
    const GridSpec g = grid(1, static_cast<std::size_t>(s.range(0)));
    for (auto _ : s) benchmark::DoNotOptimize(l1_error(t.f, approximant_1d().net, g));
    s.SetItemsProcessed(s.iterations() * s.range(0));
}

void BM_l1_serial_1d(benchmark::State& s) {
    const HolderTarget t = holder_family("cone", 1, 0.5, 1.0);
    const GridSpec g = grid(1, static_cast<std::size_t>(s.range(0)));
    for (auto _ : s) benchmark::DoNotOptimize(l1_error_serial(t.f, approximant_1d().net, g));
    s.SetItemsProcessed(s.iterations() * s.range(0));
}

void BM_l1_parallel_2d(benchmark::State& s) {
    const HolderTarget t = holder_family("cone", 2, 1.0, 1.0);
    const GridSpec g = grid(2, static_cast<std::size_t>(s.range(0)));
    for (auto _ : s) benchmark::DoNotOptimize(l1_error(t.f, approximant_2d().net, g));
    s.SetItemsProcessed(s.iterations() * s.range(0) * s.range(0));
}

void BM_l1_serial_2d(benchmark::State& s) {
    const HolderTarget t = holder_family("cone", 2, 1.0, 1.0);
    const GridSpec g = grid(2, static_cast<std::size_t>(s.range(0)));
    for (auto _ : s) benchmark::DoNotOptimize(l1_error_serial(t.f, approximant_2d().net, g));
    s.SetItemsProcessed(s.iterations() * s.range(0) * s.range(0));
}

std::vector<double> random_points(std::size_t count, std::size_t d) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> p(count * d);
    for (double& v : p) v = u(rng);
    return p;
}

void BM_batch_parallel(benchmark::State& s) {
    const auto n = static_cast<std::size_t>(s.range(0));
    const std::vector<double> pts = random_points(n, 2);
    std::vector<double> out(n);
    for (auto _ : s) {
        evaluate_batch(approximant_2d().net, pts, out);
        benchmark::DoNotOptimize(out.data());
    }
    s.SetItemsProcessed(s.iterations() * s.range(0));
}

void BM_batch_serial(benchmark::State& s) {
    const auto n = static_cast<std::size_t>(s.range(0));
    const std::vector<double> pts = random_points(n, 2);
    std::vector<double> out(n);
    for (auto _ : s) {
        evaluate_batch_serial(approximant_2d().net, pts, out);
        benchmark::DoNotOptimize(out.data());
    }
    s.SetItemsProcessed(s.iterations() * s.range(0));
}

}  // namespace

BENCHMARK(BM_l1_parallel_1d)->Arg(1 << 16)->Arg(1 << 20)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_l1_serial_1d)->Arg(1 << 16)->Arg(1 << 20)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_l1_parallel_2d)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_l1_serial_2d)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_batch_parallel)->Arg(1 << 14)->Arg(1 << 18)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_batch_serial)->Arg(1 << 14)->Arg(1 << 18)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
