#include <benchmark/benchmark.h>

#include <random>

#include <wfl/basis.hpp>

namespace {

Eigen::VectorXcd random_samples(int size) {
  std::mt19937 rng(12345);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Eigen::VectorXcd v(size);
  for (int i = 0; i < size; ++i) v(i) = wfl::cplx(dist(rng), dist(rng));
  return v;
}

void bm_wht_dense(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const wfl::WalshBasis basis = wfl::build_walsh_basis(n, 1.0);
  const Eigen::VectorXcd samples = random_samples(basis.size);
  for (auto _ : state) {
    Eigen::VectorXcd c = wfl::wht(basis, samples);
    benchmark::DoNotOptimize(c.data());
  }
  state.SetComplexityN(basis.size);
}

void bm_wht_butterfly(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const wfl::WalshBasis basis = wfl::build_walsh_basis(n, 1.0);
  const Eigen::VectorXcd samples = random_samples(basis.size);
  for (auto _ : state) {
    Eigen::VectorXcd c = wfl::wht_butterfly(basis, samples);
    benchmark::DoNotOptimize(c.data());
  }
  state.SetComplexityN(basis.size);
}

void bm_dft_coefficients(benchmark::State& state) {
  const int count = static_cast<int>(state.range(0));
  const wfl::FourierModeSet modes = wfl::build_fourier_modes(count, 1.0);
  const Eigen::VectorXcd samples = random_samples(count);
  for (auto _ : state) {
    Eigen::VectorXcd c = wfl::dft_coefficients(samples, modes);
    benchmark::DoNotOptimize(c.data());
  }
  state.SetComplexityN(count);
}

BENCHMARK(bm_wht_dense)->DenseRange(4, 10)->Complexity();
BENCHMARK(bm_wht_butterfly)->DenseRange(4, 10)->Complexity();
BENCHMARK(bm_dft_coefficients)->RangeMultiplier(2)->Range(16, 1024)->Complexity();

}  // namespace

BENCHMARK_MAIN();
