// Parallel kernels against their serial references on identical inputs.
#include <benchmark/benchmark.h>

#include "fmsys/io_operators.hpp"
#include "fmsys/reference.hpp"

using namespace fmsys;

namespace {

struct Fixture {
  SystemRealization sys;
  WordSequence u;
  LatticeSequence lattice_u;
  ComplexVector x0;
  RowContractionTuple t;
};

Fixture make_fixture(int d, int level) {
  Rng rng(42);
  auto sys = random_dissipative(rng, {d, 6, 2, 2}, 0.95);
  WordSequence u(d, std::min(level, kDefaultWordLevelCap), 2);
  for (int l = 0; l <= std::min(level, 3); ++l)
    u.level_block(l) = random_gaussian(rng, 2, static_cast<int>(word_count(d, l)));
  LatticeSequence lu(d, level, 2);
  for (int l = 0; l <= 3; ++l)
    for (const auto& n : multi_indices_of_degree(d, l)) lu.set(n, random_vector(rng, 2));
  ComplexVector x0 = random_vector(rng, 6);
  auto t = RowContractionTuple::random(rng, d, 3, 0.5);
  return {std::move(sys), std::move(u), std::move(lu), std::move(x0), std::move(t)};
}

void BM_simulate_lattice(benchmark::State& state) {
  const auto f = make_fixture(3, 14);
  for (auto _ : state) benchmark::DoNotOptimize(simulate(f.sys, f.lattice_u, f.x0, 14));
}

void BM_simulate_lattice_reference(benchmark::State& state) {
  const auto f = make_fixture(3, 14);
  for (auto _ : state) benchmark::DoNotOptimize(reference::simulate(f.sys, f.lattice_u, f.x0, 14));
}

void BM_simulate_levels(benchmark::State& state) {
  const auto f = make_fixture(2, 9);
  for (auto _ : state) benchmark::DoNotOptimize(simulate_levels(f.sys, f.u, f.x0, 9));
}

void BM_simulate_levels_reference(benchmark::State& state) {
  const auto f = make_fixture(2, 9);
  for (auto _ : state) benchmark::DoNotOptimize(reference::simulate_levels(f.sys, f.u, f.x0, 9));
}

void BM_output_transform(benchmark::State& state) {
  const auto f = make_fixture(2, 11);
  for (auto _ : state) benchmark::DoNotOptimize(nc_output_transform(f.sys, f.u, f.x0, f.t, 11));
}

void BM_output_transform_reference(benchmark::State& state) {
  const auto f = make_fixture(2, 11);
  for (auto _ : state) benchmark::DoNotOptimize(reference::nc_output_transform(f.sys, f.u, f.x0, f.t, 11));
}

void BM_transfer_series(benchmark::State& state) {
  const auto f = make_fixture(2, 10);
  for (auto _ : state) benchmark::DoNotOptimize(nc_transfer_series(f.sys, f.t, 10));
}

void BM_transfer_series_reference(benchmark::State& state) {
  const auto f = make_fixture(2, 10);
  for (auto _ : state) benchmark::DoNotOptimize(reference::nc_transfer_series(f.sys, f.t, 10));
}

void BM_build_io_pair(benchmark::State& state) {
  const auto f = make_fixture(2, 7);
  for (auto _ : state) benchmark::DoNotOptimize(build_io_pair(f.sys, 7));
}

void BM_build_io_pair_reference(benchmark::State& state) {
  const auto f = make_fixture(2, 7);
  for (auto _ : state) benchmark::DoNotOptimize(reference::build_io_pair(f.sys, 7));
}

}  // namespace

BENCHMARK(BM_simulate_lattice)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_simulate_lattice_reference)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_simulate_levels)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_simulate_levels_reference)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_output_transform)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_output_transform_reference)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_transfer_series)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_transfer_series_reference)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_build_io_pair)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_build_io_pair_reference)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
