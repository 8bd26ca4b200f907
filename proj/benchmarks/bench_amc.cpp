#include <benchmark/benchmark.h>

#include "amc/check.hpp"
#include "amc/dsl.hpp"
#include "amc/gen.hpp"
#include "amc/kbsc.hpp"
#include "amc/por.hpp"

using namespace amc;

namespace {

std::shared_ptr<const Amas> asvr(uint32_t n, uint32_t k) {
  static std::map<std::pair<uint32_t, uint32_t>, std::shared_ptr<const Amas>> cache;
  auto key = std::make_pair(n, k);
  auto it = cache.find(key);
  if (it == cache.end())
    it = cache.emplace(key, std::make_shared<Amas>(parse_amas(gen_asvr(n, k)))).first;
  return it->second;
}

void BM_BuildModel(benchmark::State& state) {
  auto amas = asvr(static_cast<uint32_t>(state.range(0)), 2);
  for (auto _ : state) {
    Ioicgs m = build_model(amas);
    benchmark::DoNotOptimize(m.state_count());
  }
}
BENCHMARK(BM_BuildModel)->Arg(1)->Arg(2)->Arg(3);

void BM_CheckIr(benchmark::State& state) {
  auto amas = asvr(2, 2);
  Ioicgs m = build_model(amas);
  Formula f = parse_formula("<<Voter1>> G !voted_1_b", *amas);
  for (auto _ : state) {
    CheckResult res = check_ir(m, f, OutcomeMode::Std);
    benchmark::DoNotOptimize(res.verdict);
  }
}
BENCHMARK(BM_CheckIr);

void BM_Reduce(benchmark::State& state) {
  auto amas = asvr(static_cast<uint32_t>(state.range(0)), 2);
  ReductionContext ctx;
  ctx.coalition = {0};
  ctx.props = {*amas->props.find("voted_1_a"), *amas->props.find("voted_1_b")};
  for (auto _ : state) {
    ReducedModel red = reduce(amas, ctx);
    benchmark::DoNotOptimize(red.model.state_count());
  }
}
BENCHMARK(BM_Reduce)->Arg(2)->Arg(3);

void BM_Expand(benchmark::State& state) {
  auto amas = asvr(2, 2);
  auto model = std::make_shared<Ioicgs>(build_model(amas));
  for (auto _ : state) {
    ExpandedAmas ex = assemble_expanded(amas, model);
    benchmark::DoNotOptimize(ex.expansions.size());
  }
}
BENCHMARK(BM_Expand);

}  // namespace

BENCHMARK_MAIN();
