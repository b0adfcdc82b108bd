#include <benchmark/benchmark.h>

#include <memory>
#include <random>

#include "parasol/cauchy.hpp"
#include "parasol/fourier.hpp"
#include "parasol/heat.hpp"
#include "parasol/kaplan.hpp"
#include "parasol/propagator.hpp"

using namespace parasol;

namespace {

OpPtr make_op(int dim) {
  RealVec v(dim);
  for (int i = 0; i < dim; ++i) v[i] = 0.5 + 3.5 * i / std::max(1, dim - 1);
  return std::make_shared<SpectralOperator>(v);
}

Trajectory bump(const TimeGrid& grid, const OpPtr& op) {
  Mat values(grid.n_steps() + 1, op->dim());
  for (int k = 0; k <= grid.n_steps(); ++k) {
    const double t = grid.point(k);
    for (Eigen::Index c = 0; c < op->dim(); ++c)
      values(k, c) = std::exp(-t * t) * (1.0 + 0.1 * static_cast<double>(c));
  }
  return Trajectory(grid, op, std::move(values));
}

void BM_DuhamelSolve(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  const int n = static_cast<int>(state.range(1));
  const OpPtr op = make_op(dim);
  const TimeGrid grid(-6.0, 6.0, n, GridKind::full_line_window);
  SourceSpec src(grid, op);
  src.set_h(bump(grid, op));
  for (auto _ : state) {
    benchmark::DoNotOptimize(duhamel_solve(op, src, grid));
  }
  state.SetComplexityN(static_cast<std::int64_t>(n) * dim);
}
BENCHMARK(BM_DuhamelSolve)->Args({8, 256})->Args({32, 1024})->Complexity();

void BM_FourierMultiplier(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const OpPtr op = make_op(8);
  const TimeGrid grid(-6.0, 6.0, n, GridKind::full_line_window);
  const Trajectory tr = bump(grid, op);
  for (auto _ : state) {
    benchmark::DoNotOptimize(fractional_time_derivative(tr, 0.5));
  }
}
BENCHMARK(BM_FourierMultiplier)->Arg(256)->Arg(1024);

void BM_PropagatorAssembly(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  const int n = static_cast<int>(state.range(1));
  const OpPtr op = make_op(dim);
  const TimeGrid grid(0.0, 1.0, n, GridKind::bounded);
  const FormFamily ff = FormFamily::random_accretive(op, grid, 2.0, 0.5, 9);
  for (auto _ : state) {
    benchmark::DoNotOptimize(assemble_green(ff, grid));
  }
}
BENCHMARK(BM_PropagatorAssembly)->Args({8, 64})->Args({16, 256});

void BM_KaplanApply(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  const int n = static_cast<int>(state.range(1));
  const OpPtr op = make_op(dim);
  const TimeGrid grid(-6.0, 6.0, n, GridKind::full_line_window);
  const FormFamily ff = FormFamily::random_accretive(op, grid, 2.0, 0.5, 11);
  const KaplanSystem sys(ff, grid);
  Mat x = Mat::Random(n, dim);
  for (auto _ : state) {
    benchmark::DoNotOptimize(sys.apply(x));
  }
}
BENCHMARK(BM_KaplanApply)->Args({8, 256})->Args({8, 1024});

}  // namespace

BENCHMARK_MAIN();
