#include <benchmark/benchmark.h>

#include <numbers>

#include "semmg/krylov.hpp"
#include "semmg/multigrid.hpp"

using namespace semmg;

namespace {

MeshConfig square(int n) { return MeshConfig::make(n, n, 2.0, 2.0); }

/// Arguments: order p, elements per direction.
void BM_PoissonApply(benchmark::State& state) {
  const int p = static_cast<int>(state.range(0));
  const int n = static_cast<int>(state.range(1));
  const PoissonOperator op(gll_basis(p), square(n));
  const Field u = random_initial_guess(op.layout(), 1);
  Field out(op.layout());
  for (auto _ : state) {
    op.apply(u, out);
    benchmark::DoNotOptimize(out.values().data());
  }
  state.counters["dof/s"] =
      benchmark::Counter(static_cast<double>(u.size()), benchmark::Counter::kIsIterationInvariantRate);
}
BENCHMARK(BM_PoissonApply)->Args({4, 32})->Args({8, 16})->Args({16, 8})->Args({32, 4});

void BM_SchwarzSweep(benchmark::State& state) {
  const int p = static_cast<int>(state.range(0));
  const auto kind = state.range(1) == 0 ? SmootherKind::additive : SmootherKind::multiplicative;
  const auto mesh = square(128 / p);
  const auto basis = gll_basis(p);
  const PoissonOperator op(basis, mesh);
  SchwarzSmoother s(op, mesh, basis, (p + 7) / 8, {kind, WeightKind::quintic});
  Field u = random_initial_guess(op.layout(), 2);
  const Field f(op.layout());
  for (auto _ : state) {
    s.smooth(u, f, 1);
    benchmark::DoNotOptimize(u.values().data());
  }
  state.SetLabel(kind == SmootherKind::additive ? "add" : "mult");
}
BENCHMARK(BM_SchwarzSweep)->ArgsProduct({{4, 8, 16, 32}, {0, 1}});

void BM_VCycle(benchmark::State& state) {
  const int p = static_cast<int>(state.range(0));
  MultigridOptions o;
  o.order = p;
  o.overlap = OverlapRule::ceil_p8();
  MultigridHierarchy h(square(128 / p), o);
  Field u = random_initial_guess(h.layout(h.top()), 3);
  const Field f(h.layout(h.top()));
  for (auto _ : state) {
    h.v_cycle(u, f);
    u.remove_mean();
    benchmark::DoNotOptimize(u.values().data());
  }
}
BENCHMARK(BM_VCycle)->Arg(4)->Arg(8)->Arg(16)->Arg(32);

}  // namespace
BENCHMARK_MAIN();
