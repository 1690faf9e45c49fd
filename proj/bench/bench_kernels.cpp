// Serial reference vs OpenMP kernels on shapes typical for the patch
// classifier (stacked patches around 50x50 with a few channels) and for the
// full-image baseline (128x128x1).

#include <benchmark/benchmark.h>

#include <vector>

#include "evopatch/nn/kernels.hpp"
#include "evopatch/rng.hpp"

namespace {

using evopatch::Rng;
namespace k = evopatch::nn::kernels;

struct ConvCase {
  int B, H, W, C, KH, KW, OC;
  std::vector<float> x, w, bias, y, dy, dx, dw, db;

  ConvCase(int B_, int H_, int W_, int C_, int OC_) : B(B_), H(H_), W(W_), C(C_), KH(3), KW(3), OC(OC_) {
    const int OH = H - KH + 1;
    const int OW = W - KW + 1;
    Rng rng(7);
    auto fill = [&](std::vector<float>& v, std::size_t n) {
      v.resize(n);
      for (auto& e : v) e = static_cast<float>(rng.uniform_real(-1.0, 1.0));
    };
    fill(x, static_cast<std::size_t>(B) * H * W * C);
    fill(w, static_cast<std::size_t>(KH) * KW * C * OC);
    fill(bias, OC);
    fill(dy, static_cast<std::size_t>(B) * OH * OW * OC);
    y.resize(dy.size());
    dx.resize(x.size());
    dw.resize(w.size());
    db.resize(bias.size());
  }
};

template <bool Serial>
void conv_forward(benchmark::State& state) {
  ConvCase c(8, static_cast<int>(state.range(0)), static_cast<int>(state.range(0)),
             static_cast<int>(state.range(1)), 16);
  for (auto _ : state) {
    if constexpr (Serial) {
      k::serial::conv2d_forward(c.x.data(), c.B, c.H, c.W, c.C, c.w.data(), c.bias.data(), c.KH,
                                c.KW, c.OC, c.y.data());
    } else {
      k::conv2d_forward(c.x.data(), c.B, c.H, c.W, c.C, c.w.data(), c.bias.data(), c.KH, c.KW,
                        c.OC, c.y.data());
    }
    benchmark::DoNotOptimize(c.y.data());
  }
}

template <bool Serial>
void conv_backward_input(benchmark::State& state) {
  ConvCase c(8, static_cast<int>(state.range(0)), static_cast<int>(state.range(0)),
             static_cast<int>(state.range(1)), 16);
  for (auto _ : state) {
    if constexpr (Serial) {
      k::serial::conv2d_backward_input(c.dy.data(), c.B, c.H, c.W, c.C, c.w.data(), c.KH, c.KW,
                                       c.OC, c.dx.data());
    } else {
      k::conv2d_backward_input(c.dy.data(), c.B, c.H, c.W, c.C, c.w.data(), c.KH, c.KW, c.OC,
                               c.dx.data());
    }
    benchmark::DoNotOptimize(c.dx.data());
  }
}

template <bool Serial>
void conv_backward_params(benchmark::State& state) {
  ConvCase c(8, static_cast<int>(state.range(0)), static_cast<int>(state.range(0)),
             static_cast<int>(state.range(1)), 16);
  for (auto _ : state) {
    std::fill(c.dw.begin(), c.dw.end(), 0.0f);
    std::fill(c.db.begin(), c.db.end(), 0.0f);
    if constexpr (Serial) {
      k::serial::conv2d_backward_params(c.x.data(), c.dy.data(), c.B, c.H, c.W, c.C, c.KH, c.KW,
                                        c.OC, c.dw.data(), c.db.data());
    } else {
      k::conv2d_backward_params(c.x.data(), c.dy.data(), c.B, c.H, c.W, c.C, c.KH, c.KW, c.OC,
                                c.dw.data(), c.db.data());
    }
    benchmark::DoNotOptimize(c.dw.data());
  }
}

template <bool Serial>
void dense_forward(benchmark::State& state) {
  const int B = 8;
  const int IN = static_cast<int>(state.range(0));
  const int OUT = 128;
  Rng rng(7);
  std::vector<float> x(static_cast<std::size_t>(B) * IN), w(static_cast<std::size_t>(IN) * OUT),
      bias(OUT), y(static_cast<std::size_t>(B) * OUT);
  for (auto& e : x) e = static_cast<float>(rng.uniform_real(-1.0, 1.0));
  for (auto& e : w) e = static_cast<float>(rng.uniform_real(-1.0, 1.0));
  for (auto& e : bias) e = static_cast<float>(rng.uniform_real(-1.0, 1.0));
  for (auto _ : state) {
    if constexpr (Serial) {
      k::serial::dense_forward(x.data(), B, IN, w.data(), bias.data(), OUT, y.data());
    } else {
      k::dense_forward(x.data(), B, IN, w.data(), bias.data(), OUT, y.data());
    }
    benchmark::DoNotOptimize(y.data());
  }
}

void args_conv(benchmark::internal::Benchmark* b) {
  b->Args({48, 4})->Args({126, 1})->Unit(benchmark::kMillisecond);
}

BENCHMARK(conv_forward<true>)->Name("serial/conv2d_forward")->Apply(args_conv);
BENCHMARK(conv_forward<false>)->Name("omp/conv2d_forward")->Apply(args_conv);
BENCHMARK(conv_backward_input<true>)->Name("serial/conv2d_backward_input")->Apply(args_conv);
BENCHMARK(conv_backward_input<false>)->Name("omp/conv2d_backward_input")->Apply(args_conv);
BENCHMARK(conv_backward_params<true>)->Name("serial/conv2d_backward_params")->Apply(args_conv);
BENCHMARK(conv_backward_params<false>)->Name("omp/conv2d_backward_params")->Apply(args_conv);
BENCHMARK(dense_forward<true>)->Name("serial/dense_forward")->Arg(10816)->Unit(benchmark::kMillisecond);
BENCHMARK(dense_forward<false>)->Name("omp/dense_forward")->Arg(10816)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
