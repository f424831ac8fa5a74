// Microbenchmarks for the trajectory predictor: a single generator rollout
// and one full gradient evaluation of each adversarial network over a batch.

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "occtrack/seqnet.hpp"
#include "occtrack/trajectory.hpp"

namespace {

constexpr int kHidden = 32;
constexpr int kNoiseDim = 8;
constexpr int kObs = 4;
constexpr int kPred = 2;
constexpr double kField = 100.0;

occtrack::Trajectory walk(std::mt19937_64& rng, int length) {
    std::uniform_real_distribution<double> upos(10.0, 90.0);
    std::uniform_real_distribution<double> ustep(-1.0, 1.0);
    occtrack::Trajectory t;
    double x = upos(rng), y = upos(rng);
    for (int i = 0; i < length; ++i) {
        t.push_back({x, y}, i);
        x += ustep(rng);
        y += ustep(rng);
    }
    return t;
}

std::vector<double> noise_vec(std::mt19937_64& rng) {
    std::normal_distribution<double> n(0.0, 1.0);
    std::vector<double> z(kNoiseDim);
    for (double& v : z) v = n(rng);
    return z;
}

void BM_GeneratorForward(benchmark::State& state) {
    std::mt19937_64 rng(11);
    const occtrack::SeqNetParams g =
        occtrack::SeqNetParams::random_init(occtrack::NetRole::kGenerator, kHidden, kNoiseDim, rng);
    const occtrack::Trajectory observed = walk(rng, kObs);
    const std::vector<double> noise = noise_vec(rng);
    const occtrack::GenConfig cfg{kPred, kField};
    for (auto _ : state) {
        benchmark::DoNotOptimize(occtrack::generator_forward(g, observed, noise, cfg));
    }
    state.SetItemsProcessed(state.iterations());
}

void BM_DiscriminatorBatchGrad(benchmark::State& state) {
    const int batch = static_cast<int>(state.range(0));
    std::mt19937_64 rng(11);
    const occtrack::SeqNetParams d =
        occtrack::SeqNetParams::random_init(occtrack::NetRole::kDiscriminator, kHidden, 0, rng);
    std::vector<occtrack::Trajectory> real, fake;
    for (int i = 0; i < batch; ++i) {
        real.push_back(walk(rng, kObs + kPred));
        fake.push_back(walk(rng, kObs + kPred));
    }
    std::vector<double> grad;
    for (auto _ : state) {
        benchmark::DoNotOptimize(occtrack::discriminator_batch_grad(d, real, fake, kField, grad));
    }
    state.SetItemsProcessed(state.iterations() * batch);
}

void BM_GeneratorBatchGrad(benchmark::State& state) {
    const int batch = static_cast<int>(state.range(0));
    std::mt19937_64 rng(11);
    const occtrack::SeqNetParams g =
        occtrack::SeqNetParams::random_init(occtrack::NetRole::kGenerator, kHidden, kNoiseDim, rng);
    const occtrack::SeqNetParams d =
        occtrack::SeqNetParams::random_init(occtrack::NetRole::kDiscriminator, kHidden, 0, rng);
    std::vector<occtrack::Trajectory> observed;
    std::vector<std::vector<double>> noises;
    for (int i = 0; i < batch; ++i) {
        observed.push_back(walk(rng, kObs));
        noises.push_back(noise_vec(rng));
    }
    const occtrack::GenConfig cfg{kPred, kField};
    std::vector<double> grad;
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            occtrack::generator_batch_grad(g, d, observed, noises, cfg, grad));
    }
    state.SetItemsProcessed(state.iterations() * batch);
}

}  // namespace

BENCHMARK(BM_GeneratorForward);
BENCHMARK(BM_DiscriminatorBatchGrad)->Arg(32)->Arg(96);
BENCHMARK(BM_GeneratorBatchGrad)->Arg(32)->Arg(96);

BENCHMARK_MAIN();
