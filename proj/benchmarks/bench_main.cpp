#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>

#include "mixedconv/convolution.hpp"
#include "mixedconv/norms.hpp"
#include "mixedconv/stft.hpp"

namespace {

using namespace mixedconv;

GridFunction gaussian_2d(int n) {
  auto basis = OrderedBasis::standard(2);
  std::vector<AxisSpec> axes{AxisSpec::line(n, -4.0, 4.0), AxisSpec::periodic(n)};
  return sample(basis, axes, [](std::span<const double> c) {
    return std::exp(-std::numbers::pi * c[0] * c[0]) *
           (1.5 + std::cos(2.0 * std::numbers::pi * c[1]));
  });
}

void BM_MixedNorm(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  auto f = gaussian_2d(n);
  ExponentVector p({0.5, 2.0});
  for (auto _ : state) benchmark::DoNotOptimize(mixed_norm(f, p));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(f.size()));
}
BENCHMARK(BM_MixedNorm)->RangeMultiplier(2)->Range(32, 256);

void BM_Convolve(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  auto f = gaussian_2d(n);
  auto echo = EchoSpec::periodic(OrderedBasis::standard(2), {false, true});
  LatticeSequence a(Lattice(OrderedBasis::standard(2)));
  a.set({0, 0}, 1.0);
  a.set({1, 0}, 0.5);
  a.set({-1, 1}, -0.25);
  a.set({0, 2}, 0.75);
  for (auto _ : state) benchmark::DoNotOptimize(semi_discrete_convolve(a, f, echo));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(f.size()) * 4);
}
BENCHMARK(BM_Convolve)->RangeMultiplier(2)->Range(32, 256);

void BM_StftPoint(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  auto basis = OrderedBasis::standard(2);
  std::vector<AxisSpec> axes{AxisSpec::line(n, -4.0, 4.0), AxisSpec::line(n, -4.0, 4.0)};
  auto g = sample_complex(basis, axes, [](std::span<const double> c) {
    return std::complex<double>(std::exp(-std::numbers::pi * (c[0] * c[0] + c[1] * c[1])), 0.0);
  });
  const std::int64_t x[] = {1, -2};
  const double xi[] = {0.3, -0.7};
  for (auto _ : state) benchmark::DoNotOptimize(stft_at(g, g, x, xi));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(g.size()));
}
BENCHMARK(BM_StftPoint)->RangeMultiplier(2)->Range(16, 128);

}  // namespace

BENCHMARK_MAIN();
