// Serial reference kernels against their OpenMP counterparts.
// Run with OMP_NUM_THREADS set to compare thread counts.

#include "bilin/experiment.hpp"
#include "bilin/generators.hpp"
#include "bilin/kernels.hpp"
#include "bilin/oracle.hpp"
#include "bilin/pdb.hpp"
#include "bilin/polytope.hpp"
#include "bilin/reduction.hpp"
#include "bilin/rng.hpp"

#include <benchmark/benchmark.h>

using namespace bilin;

namespace {

Tableau make_tableau(std::size_t rows, std::size_t cols) {
  Stream s(1);
  Tableau t(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) t(i, j) = s.uniform() + 0.5;
  }
  return t;
}

template <void (*Pivot)(Tableau&, std::size_t, std::size_t)>
void BM_Pivot(benchmark::State& state) {
  // Roughly the shape of the affine counterpart at n = m = 20.
  Tableau t = make_tableau(static_cast<std::size_t>(state.range(0)), static_cast<std::size_t>(state.range(1)));
  std::size_t k = 0;
  for (auto _ : state) {
    const std::size_t r = k % t.rows();
    const std::size_t c = (7 * k) % t.cols();
    if (t(r, c) == 0.0) t(r, c) = 1.0;
    Pivot(t, r, c);
    benchmark::DoNotOptimize(t.row(0));
    ++k;
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * t.rows() * t.cols()));
}
BENCHMARK_TEMPLATE(BM_Pivot, pivot_serial)->Args({200, 800})->Args({863, 3364});
BENCHMARK_TEMPLATE(BM_Pivot, pivot_parallel)->Args({200, 800})->Args({863, 3364});

const PdbInstance& rounding_instance() {
  static const PdbInstance inst = generate_pdb_instance(50, 100, 100, 0).instance;
  return inst;
}

const PdbRelaxation& rounding_relaxation() {
  static const PdbRelaxation relax = solve_lp_pdb(rounding_instance());
  return relax;
}

void BM_RoundPdbSerial(benchmark::State& state) {
  const RoundingConfig cfg = RoundingConfig(0.25, 3).with_max_iterations(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(round_pdb_serial(rounding_instance(), rounding_relaxation(), cfg));
}
void BM_RoundPdbParallel(benchmark::State& state) {
  const RoundingConfig cfg = RoundingConfig(0.25, 3).with_max_iterations(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(round_pdb(rounding_instance(), rounding_relaxation(), cfg));
}
BENCHMARK(BM_RoundPdbSerial)->Arg(64);
BENCHMARK(BM_RoundPdbParallel)->Arg(64);

void BM_ChernoffSerial(benchmark::State& state) {
  const Vector w = Vector::Ones(100), p = Vector::Constant(100, 0.01);
  for (auto _ : state) benchmark::DoNotOptimize(chernoff_check_serial(w, p, 7.0, 100000, 0));
}
void BM_ChernoffParallel(benchmark::State& state) {
  const Vector w = Vector::Ones(100), p = Vector::Constant(100, 0.01);
  for (auto _ : state) benchmark::DoNotOptimize(chernoff_check(w, p, 7.0, 100000, 0));
}
BENCHMARK(BM_ChernoffSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ChernoffParallel)->Unit(benchmark::kMillisecond);

const PdbInstance& oracle_instance() {
  static const PdbInstance inst = generate_pdb_instance(6, 5, 5, 1).instance;
  return inst;
}

void BM_ExactPdbSerial(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(exact_pdb_serial(oracle_instance()));
}
void BM_ExactPdbParallel(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(exact_pdb(oracle_instance()));
}
BENCHMARK(BM_ExactPdbSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ExactPdbParallel)->Unit(benchmark::kMillisecond);

void BM_EnumerateSerial(benchmark::State& state) {
  const auto& x = generate_pdb_instance(8, 8, 1, 2).instance.x_set();
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_vertices_serial(x));
}
void BM_EnumerateParallel(benchmark::State& state) {
  const auto& x = generate_pdb_instance(8, 8, 1, 2).instance.x_set();
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_vertices(x));
}
BENCHMARK(BM_EnumerateSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EnumerateParallel)->Unit(benchmark::kMillisecond);

void BM_NaeSerial(benchmark::State& state) {
  // Unsatisfiable, so the whole assignment space is scanned.
  const MnaeInstance f(20, {{0, 0, 0}});
  for (auto _ : state) benchmark::DoNotOptimize(nae_satisfiable_serial(f));
}
void BM_NaeParallel(benchmark::State& state) {
  const MnaeInstance f(20, {{0, 0, 0}});
  for (auto _ : state) benchmark::DoNotOptimize(nae_satisfiable(f));
}
BENCHMARK(BM_NaeSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_NaeParallel)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
