#include <benchmark/benchmark.h>

#include "wavelab/evolution.hpp"
#include "wavelab/resolvent.hpp"

using namespace wavelab;

namespace {

constexpr double pi = std::numbers::pi;

void bm_operator_apply(benchmark::State& state) {
  TorusGrid g(int(state.range(0)));
  SymbolModel m = SymbolModel::p1();
  OperatorApplier op(m, g);
  GridField u = make_bump(g, -pi / 2, 0.0, 0.5);
  std::vector<cplx> out;
  for (auto _ : state) {
    op.apply(u.spec, out);
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(bm_operator_apply)->Arg(64)->Arg(128)->Arg(256);

void bm_resolve_gmres(benchmark::State& state) {
  TorusGrid g(int(state.range(0)));
  SymbolModel m = SymbolModel::p1();
  GridField f = make_bump(g, -pi / 2, 0.0, 0.5);
  ResolventOptions opts;
  opts.force_iterative = true;
  for (auto _ : state) {
    GridField u = resolve(m, 0.0, 0.1, f, opts);
    benchmark::DoNotOptimize(u.spec.data());
  }
}
BENCHMARK(bm_resolve_gmres)->Arg(32)->Arg(64);

void bm_rk4_evolution(benchmark::State& state) {
  TorusGrid g(int(state.range(0)));
  SymbolModel m = SymbolModel::p1();
  GridField f = make_bump(g, -pi / 2, 0.0, 0.5);
  EvolutionConfig cfg;
  cfg.t_final = 1.0;
  cfg.dt = 0.01;
  for (auto _ : state) {
    EvolutionTrace tr = evolve_rk4(m, f, cfg);
    benchmark::DoNotOptimize(tr.times.data());
  }
}
BENCHMARK(bm_rk4_evolution)->Arg(64)->Arg(128);

}  // namespace

BENCHMARK_MAIN();
