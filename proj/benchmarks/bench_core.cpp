// Microbenchmarks for the kernels that dominate training and attribution
// time. Run ./bench_core --benchmark_filter=... to narrow down.

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "ggig/attribution.hpp"
#include "ggig/gemm.hpp"
#include "ggig/network.hpp"
#include "ggig/tensor.hpp"
#include "ggig/train.hpp"

namespace {

std::vector<float> random_buffer(std::size_t n, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<float> dist(-1.0f, 1.0f);
  std::vector<float> out(n);
  for (float& v : out) v = dist(rng);
  return out;
}

const ggig::Network& mnist_net() {
  static const ggig::Network net = [] {
    ggig::Network n = ggig::build_mnist_cnn();
    ggig::init_glorot_uniform(n, 42);
    return n;
  }();
  return net;
}

ggig::Tensor mnist_input() {
  ggig::Tensor x({1, 28, 28});
  std::vector<float> v = random_buffer(x.size(), 7);
  for (float& f : v) f = 0.5f * (f + 1.0f);  // [0,1), like normalized pixels
  std::copy(v.begin(), v.end(), x.data());
  return x;
}

// The GEMM shapes the MNIST net actually produces: the two im2col convolution
// products and the two dense layers (single sample and a training minibatch).
void gemm_shape_args(benchmark::internal::Benchmark* b) {
  b->Args({32, 25, 784})      // conv1 im2col
      ->Args({64, 800, 196})  // conv2 im2col
      ->Args({1, 3136, 1024})  // dense1, one sample
      ->Args({64, 3136, 1024})  // dense1, batch 64
      ->Args({64, 1024, 10})   // dense2, batch 64
      ->ArgNames({"M", "K", "N"});
}

void BM_gemm_nn(benchmark::State& state) {
  const int M = static_cast<int>(state.range(0));
  const int K = static_cast<int>(state.range(1));
  const int N = static_cast<int>(state.range(2));
  std::vector<float> a = random_buffer(static_cast<std::size_t>(M) * K, 1);
  std::vector<float> b = random_buffer(static_cast<std::size_t>(K) * N, 2);
  std::vector<float> c(static_cast<std::size_t>(M) * N);
  for (auto _ : state) {
    std::fill(c.begin(), c.end(), 0.0f);
    ggig::gemm_nn_acc(c.data(), a.data(), b.data(), M, K, N);
    benchmark::DoNotOptimize(c.data());
    benchmark::ClobberMemory();
  }
  state.SetItemsProcessed(state.iterations() * 2 * int64_t{M} * K * N);
}
BENCHMARK(BM_gemm_nn)->Apply(gemm_shape_args);

void BM_gemm_nt(benchmark::State& state) {
  const int M = static_cast<int>(state.range(0));
  const int K = static_cast<int>(state.range(1));
  const int N = static_cast<int>(state.range(2));
  std::vector<float> a = random_buffer(static_cast<std::size_t>(M) * K, 1);
  std::vector<float> b = random_buffer(static_cast<std::size_t>(N) * K, 2);
  std::vector<float> c(static_cast<std::size_t>(M) * N);
  for (auto _ : state) {
    std::fill(c.begin(), c.end(), 0.0f);
    ggig::gemm_nt_acc(c.data(), a.data(), b.data(), M, K, N);
    benchmark::DoNotOptimize(c.data());
    benchmark::ClobberMemory();
  }
  state.SetItemsProcessed(state.iterations() * 2 * int64_t{M} * K * N);
}
BENCHMARK(BM_gemm_nt)->Apply(gemm_shape_args);

void BM_forward(benchmark::State& state) {
  const ggig::Network& net = mnist_net();
  ggig::Tensor x = mnist_input();
  for (auto _ : state) {
    ggig::Tensor logits = ggig::forward(net, x);
    benchmark::DoNotOptimize(logits.data());
  }
}
BENCHMARK(BM_forward);

void BM_forward_reused_workspace(benchmark::State& state) {
  const ggig::Network& net = mnist_net();
  ggig::Tensor x = mnist_input();
  ggig::EvalWorkspace ws;
  for (auto _ : state) {
    ggig::Tensor logits = ggig::forward(net, x, ws);
    benchmark::DoNotOptimize(logits.data());
  }
}
BENCHMARK(BM_forward_reused_workspace);

void BM_forward_batch(benchmark::State& state) {
  const ggig::Network& net = mnist_net();
  const int batch = static_cast<int>(state.range(0));
  ggig::Tensor xs({batch, 1, 28, 28});
  std::vector<float> v = random_buffer(xs.size(), 11);
  std::copy(v.begin(), v.end(), xs.data());
  for (auto _ : state) {
    ggig::Tensor logits = ggig::forward_batch(net, xs);
    benchmark::DoNotOptimize(logits.data());
  }
  state.SetItemsProcessed(state.iterations() * batch);
}
BENCHMARK(BM_forward_batch)->Arg(1)->Arg(16)->Arg(64)->ArgName("batch");

void BM_logit_gradient(benchmark::State& state) {
  const ggig::Network& net = mnist_net();
  ggig::Tensor x = mnist_input();
  for (auto _ : state) {
    ggig::GradientResult g = ggig::logit_gradient(net, x, 3);
    benchmark::DoNotOptimize(g.input_grad.data());
  }
}
BENCHMARK(BM_logit_gradient);

void BM_attr_grad(benchmark::State& state) {
  const ggig::Network& net = mnist_net();
  ggig::Tensor x = mnist_input();
  for (auto _ : state) {
    ggig::AttributionMap m = ggig::grad_saliency(net, x, 3);
    benchmark::DoNotOptimize(m.values.data());
  }
}
BENCHMARK(BM_attr_grad);

void BM_attr_integrated_gradients(benchmark::State& state) {
  const ggig::Network& net = mnist_net();
  ggig::Tensor x = mnist_input();
  ggig::IGConfig cfg;
  cfg.steps = static_cast<int>(state.range(0));
  for (auto _ : state) {
    ggig::AttributionMap m = ggig::integrated_gradients(net, x, 3, cfg);
    benchmark::DoNotOptimize(m.values.data());
  }
}
BENCHMARK(BM_attr_integrated_gradients)->Arg(8)->Arg(64)->ArgName("steps");

void BM_attr_ggig(benchmark::State& state) {
  const ggig::Network& net = mnist_net();
  ggig::Tensor x = mnist_input();
  ggig::GGIGConfig cfg;
  cfg.interpolation_points = static_cast<int>(state.range(0));
  cfg.ascent_steps = static_cast<int>(state.range(1));
  for (auto _ : state) {
    ggig::AttributionMap m = ggig::ggig(net, x, 3, cfg);
    benchmark::DoNotOptimize(m.values.data());
  }
}
BENCHMARK(BM_attr_ggig)
    ->Args({1, 8})
    ->Args({4, 25})
    ->ArgNames({"n", "m"})
    ->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
