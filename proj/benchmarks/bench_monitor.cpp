#include <benchmark/benchmark.h>

#include "ratmon/case_study.hpp"
#include "ratmon/monitor.hpp"
#include "ratmon/random.hpp"

using namespace ratmon;

static void BM_SynthesizeImperfect(benchmark::State& state) {
  const std::vector<Atom> pool = {"p", "q", "r", "s"};
  Partition classes({{"p", "q"}, {"r"}, {"s"}});
  Rng rng(static_cast<std::uint64_t>(state.range(0)));
  std::vector<Formula> fs;
  for (int i = 0; i < 8; ++i) fs.push_back(random_formula(rng, static_cast<int>(state.range(0)), pool));
  std::size_t i = 0;
  for (auto _ : state) {
    auto m = build_imperfect(fs[i++ % fs.size()], classes);
    benchmark::DoNotOptimize(m);
  }
}
BENCHMARK(BM_SynthesizeImperfect)->DenseRange(1, 7)->Unit(benchmark::kMillisecond);

static void BM_CaseStudySynthesis(benchmark::State& state) {
  VisibilitySpec vs = casestudy::spec();
  Formula f = parse_formula(casestudy::properties()[static_cast<std::size_t>(state.range(0))].text);
  for (auto _ : state) {
    auto m = build_imperfect(f, vs.classes);
    benchmark::DoNotOptimize(m);
  }
}
BENCHMARK(BM_CaseStudySynthesis)->DenseRange(0, 6)->Unit(benchmark::kMillisecond);

static void BM_VerifyPerEvent(benchmark::State& state) {
  VisibilitySpec vs = casestudy::spec();
  auto m = build_imperfect(parse_formula(casestudy::properties()[6].text), vs.classes);
  Rng rng(1);
  std::vector<Atom> atoms(vs.alphabet.begin(), vs.alphabet.end());
  SignedTrace trace;
  for (std::int64_t i = 0; i < state.range(0); ++i) {
    trace.push_back(visible_event(explicit_event(random_plain_event(rng, atoms), vs.alphabet), vs.classes, {}));
  }
  for (auto _ : state) {
    Monitor mon(m);
    for (const auto& e : trace) mon.step(e);
    benchmark::DoNotOptimize(mon.verdict());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_VerifyPerEvent)->RangeMultiplier(10)->Range(100, 10000);

BENCHMARK_MAIN();
