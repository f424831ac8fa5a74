// Microbenchmark for response-map peak analysis: thresholding, neighbor
// merging, and peak-to-peak distance computation on a 17x17 grid.

#include <benchmark/benchmark.h>

#include <random>

#include "occtrack/heatmap.hpp"

namespace {

occtrack::ResponseMap noise_map(int size, uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> values(static_cast<size_t>(size) * size);
    for (double& v : values) v = u(rng);
    return occtrack::ResponseMap(size, 3, std::move(values));
}

void BM_ExtractPeaks(benchmark::State& state) {
    const occtrack::ResponseMap map = noise_map(17, 7);
    for (auto _ : state) {
        benchmark::DoNotOptimize(occtrack::extract_peaks(map));
    }
    state.SetItemsProcessed(state.iterations());
}

void BM_PeakDistances(benchmark::State& state) {
    const occtrack::ResponseMap map = noise_map(17, 7);
    const occtrack::PeakSet set = occtrack::extract_peaks(map);
    for (auto _ : state) {
        benchmark::DoNotOptimize(occtrack::compute_distances(set));
    }
    state.SetItemsProcessed(state.iterations());
}

}  // namespace

BENCHMARK(BM_ExtractPeaks);
BENCHMARK(BM_PeakDistances);

BENCHMARK_MAIN();
