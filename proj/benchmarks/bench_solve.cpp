#include <benchmark/benchmark.h>

#include <numbers>

#include <wfl/drive.hpp>
#include <wfl/lattice.hpp>
#include <wfl/models.hpp>
#include <wfl/solve.hpp>

namespace {

constexpr double kPeriod = 0.68;

wfl::SpinModel chain(int sites) {
  return wfl::build_mfim(sites, 1.0, 1.1 * std::numbers::pi / kPeriod, 0.5 * std::numbers::pi);
}

void bm_assemble_walsh(benchmark::State& state) {
  const wfl::SpinModel model = chain(static_cast<int>(state.range(0)));
  const wfl::PeriodicDrive drive = wfl::up_down_kick(kPeriod);
  const int n_modes = static_cast<int>(state.range(1));
  for (auto _ : state) {
    wfl::ExtendedOperator op = wfl::assemble_q(model, drive, wfl::Basis::walsh, n_modes);
    benchmark::DoNotOptimize(op.matrix.data());
  }
}

void bm_assemble_fourier(benchmark::State& state) {
  const wfl::SpinModel model = chain(static_cast<int>(state.range(0)));
  const wfl::PeriodicDrive drive = wfl::up_down_kick(kPeriod);
  const int n_modes = static_cast<int>(state.range(1)) - 1;
  for (auto _ : state) {
    wfl::ExtendedOperator op = wfl::assemble_q(model, drive, wfl::Basis::fourier, n_modes);
    benchmark::DoNotOptimize(op.matrix.data());
  }
}

void bm_solve_walsh(benchmark::State& state) {
  const wfl::SpinModel model = chain(static_cast<int>(state.range(0)));
  const wfl::PeriodicDrive drive = wfl::up_down_kick(kPeriod);
  const wfl::ExtendedOperator op =
      wfl::assemble_q(model, drive, wfl::Basis::walsh, static_cast<int>(state.range(1)));
  const wfl::ExactFloquetResult exact = wfl::exact_propagator(model, drive);
  for (auto _ : state) {
    wfl::FloquetSolution sol = wfl::solve(op, &exact);
    benchmark::DoNotOptimize(sol.theta.data());
  }
}

void bm_exact_propagator(benchmark::State& state) {
  const wfl::SpinModel model = chain(static_cast<int>(state.range(0)));
  const wfl::PeriodicDrive drive = wfl::up_down_kick(kPeriod);
  for (auto _ : state) {
    wfl::ExactFloquetResult exact = wfl::exact_propagator(model, drive);
    benchmark::DoNotOptimize(exact.theta.data());
  }
}

void register_grid(benchmark::internal::Benchmark* b) {
  for (int sites : {1, 2, 3})
    for (int n : {16, 32, 64}) b->Args({sites, n});
}

BENCHMARK(bm_assemble_walsh)->Apply(register_grid);
BENCHMARK(bm_assemble_fourier)->Apply(register_grid);
BENCHMARK(bm_solve_walsh)->Apply(register_grid);
BENCHMARK(bm_exact_propagator)->DenseRange(1, 3);

}  // namespace

BENCHMARK_MAIN();
