#include <benchmark/benchmark.h>

#include "tccsim/engine.hpp"
#include "tccsim/workload.hpp"

using namespace tccsim;

namespace {

const Trace& bench_trace() {
  static const Trace t = [] {
    GeneratorParams p;
    p.n_ops = 200000;
    p.working_set_blocks = 8192;
    p.silent_fraction = 0.37;
    p.seed = 1;
    return generate(p).trace;
  }();
  return t;
}

void BM_Simulate(benchmark::State& state) {
  SimConfig cfg;
  cfg.scheme = static_cast<Scheme>(state.range(0));
  const Trace& t = bench_trace();
  for (auto _ : state) {
    Simulator sim(cfg);
    sim.run(t);
    benchmark::DoNotOptimize(sim.hierarchy().counters().l2_reads);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(t.size()));
  state.SetLabel(std::string(to_string(cfg.scheme)));
}
BENCHMARK(BM_Simulate)->Arg(0)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
