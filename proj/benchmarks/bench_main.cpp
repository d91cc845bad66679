#include <benchmark/benchmark.h>

#include <cmath>
#include <memory>
#include <numbers>
#include <random>

#include "lwr/filtering.hpp"
#include "lwr/linalg.hpp"
#include "lwr/operators.hpp"
#include "lwr/scenarios.hpp"
#include "lwr/stepping.hpp"

namespace {

using namespace lwr;

DenseMatrix diagonally_dominant(std::size_t n) {
  std::mt19937 rng(1);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  DenseMatrix a(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) a(i, j) = dist(rng);
    a(i, i) += static_cast<double>(n);
  }
  return a;
}

void BM_LuSolve(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const DenseMatrix a = diagonally_dominant(n);
  const Vector b(n, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(lu_solve(a, b));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_LuSolve)->RangeMultiplier(2)->Range(32, 512)->Complexity(benchmark::oNCubed);

// Mesh assembly plus the dense filter and fluctuation matrices.
void BM_AssembleAndFilter(benchmark::State& state) {
  const Mesh1D m = build_mesh(0, 1, static_cast<int>(state.range(0)), 2, BoundaryKind::Dirichlet);
  for (auto _ : state) {
    const AssembledOperators ops = assemble(m);
    const FilterContext filter(ops, 0.1 * std::sqrt(m.h()), 1);
    benchmark::DoNotOptimize(filter.fluctuation_stiffness());
  }
}
BENCHMARK(BM_AssembleAndFilter)->Arg(25)->Arg(50)->Arg(100)->Unit(benchmark::kMillisecond);

// One implicit step of the manufactured problem, Newton included.
void BM_BackwardEulerStep(benchmark::State& state) {
  const Scenario s = manufactured();
  const Mesh1D m = build_mesh(0, 1, static_cast<int>(state.range(0)), 2, BoundaryKind::Dirichlet);
  auto ops = std::make_shared<const AssembledOperators>(assemble(m));
  ModelParams p;
  p.chi = 1.0;
  p.delta = 0.1 * std::sqrt(m.h());
  auto filter = std::make_shared<const FilterContext>(*ops, p.delta, p.deconv_order);
  const double dt = 0.01;
  const FeFunction start = l2_project([](double x) { return 0.3 * std::sin(std::numbers::pi * x); }, m);
  for (auto _ : state) benchmark::DoNotOptimize(be_step(start, dt, p, ops, filter, s, dt));
}
BENCHMARK(BM_BackwardEulerStep)->Arg(25)->Arg(50)->Arg(100)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
