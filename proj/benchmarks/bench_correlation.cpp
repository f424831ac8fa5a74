// Microbenchmarks for the template-matching hot path: single-scale
// normalized cross-correlation and the full three-level response pyramid.

#include <benchmark/benchmark.h>

#include <random>

#include "occtrack/appearance.hpp"
#include "occtrack/box.hpp"
#include "occtrack/image.hpp"

namespace {

occtrack::Frame noise_frame(int width, int height, uint64_t seed) {
    occtrack::Frame f = occtrack::Frame::filled(width, height, 0.0);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int r = 0; r < height; ++r)
        for (int c = 0; c < width; ++c) f.at(r, c) = u(rng);
    return f;
}

void BM_NccCorrelate(benchmark::State& state) {
    const int side = static_cast<int>(state.range(0));
    const occtrack::Frame image = noise_frame(side, side, 1);
    const occtrack::Frame templ = noise_frame(16, 16, 2);
    for (auto _ : state) {
        benchmark::DoNotOptimize(occtrack::ncc_correlate(image, templ));
    }
    state.SetItemsProcessed(state.iterations());
}

void BM_ResponsePyramid(benchmark::State& state) {
    const occtrack::Frame frame = noise_frame(100, 100, 1);
    const occtrack::BoundingBox box{50.0, 50.0, 12.0, 12.0};
    const occtrack::Template templ = occtrack::crop_template(frame, box);
    for (auto _ : state) {
        benchmark::DoNotOptimize(occtrack::response_pyramid(frame, templ, box));
    }
    state.SetItemsProcessed(state.iterations());
}

}  // namespace

BENCHMARK(BM_NccCorrelate)->Arg(64)->Arg(100)->Arg(160);
BENCHMARK(BM_ResponsePyramid);

BENCHMARK_MAIN();
