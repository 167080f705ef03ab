// Serial reference kernels against their OpenMP counterparts, plus a full
// Deep FIR hop on each backend.

#include <benchmark/benchmark.h>

#include <memory>
#include <random>

#include "deepfir/engine.hpp"
#include "deepfir/kernels.hpp"

using namespace deepfir;

namespace {

std::vector<double> noise(std::size_t n) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> d(0.0, 0.1);
  std::vector<double> v(n);
  for (auto& x : v) x = d(rng);
  return v;
}

template <Backend B>
void BM_Matvec(benchmark::State& state) {
  // The first LSTM layer: 4H x (F + H).
  Matrix a(800, 329);
  for (std::size_t i = 0; i < a.data.size(); ++i) a.data[i] = static_cast<float>(i % 13) * 1e-3f;
  std::vector<float> x(329, 0.5f), bias(800, 0.0f), y(800);
  for (auto _ : state) {
    kernels::matvec(B, a, x, bias, y);
    benchmark::DoNotOptimize(y.data());
  }
}

template <Backend B>
void BM_ConvolveBlock(benchmark::State& state) {
  const auto hop = static_cast<std::size_t>(state.range(0));
  const auto sig = noise(hop + 127);
  const auto taps = noise(128);
  std::vector<double> out(hop);
  for (auto _ : state) {
    kernels::convolve_block(B, sig, taps, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * hop));
}

template <Backend B>
void BM_DeepFirHop(benchmark::State& state) {
  auto cfg = StreamConfig::for_mode(Mode::deepfir, 1.0, 128, state.range(0) != 0);
  cfg.backend = B;
  DeepFirEngine e(cfg, std::make_shared<const ModelWeights>(random_weights(ModelDims{}, 1)));
  const auto x = noise(16);
  std::vector<double> out(16);
  for (auto _ : state) {
    e.process_hop(x, out);
    benchmark::DoNotOptimize(out.data());
  }
}

}  // namespace

BENCHMARK(BM_Matvec<Backend::serial>);
BENCHMARK(BM_Matvec<Backend::parallel>);
BENCHMARK(BM_ConvolveBlock<Backend::serial>)->Arg(16)->Arg(1024);
BENCHMARK(BM_ConvolveBlock<Backend::parallel>)->Arg(16)->Arg(1024);
BENCHMARK(BM_DeepFirHop<Backend::serial>)->Arg(0)->Arg(1);
BENCHMARK(BM_DeepFirHop<Backend::parallel>)->Arg(0)->Arg(1);

BENCHMARK_MAIN();
