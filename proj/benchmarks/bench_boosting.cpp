// Per-round throughput of the boosters and their learners.

#include <memory>
#include <sstream>
#include <vector>

#include <benchmark/benchmark.h>

#include "ogb/batch.hpp"
#include "ogb/boosting.hpp"
#include "ogb/function_pool.hpp"
#include "ogb/hedge_learner.hpp"
#include "ogb/ogd_learner.hpp"
#include "ogb/stream.hpp"
#include "ogb/stump_learner.hpp"
#include "ogb/synthetic.hpp"

using namespace ogb;

namespace {

constexpr std::size_t kRounds = 4096;

const PlantedStream& planted() {
  static const PlantedStream p = [] {
    auto pool = std::make_shared<RandomFeaturePool>(8, 5, 1);
    return planted_span_stream(pool, random_span_weights(8, 2.0, 2), 0.01, kRounds, 5, 3);
  }();
  return p;
}

const Stream& additive() {
  static const Stream s = make_additive_stream(kRounds, 4);
  return s;
}

// One predict/update per iteration, cycling through the stream.
void drive(benchmark::State& state, Booster& booster, const Stream& stream) {
  std::size_t t = 0;
  for (auto _ : state) {
    const Example& x = stream[t];
    benchmark::DoNotOptimize(booster.predict(x));
    booster.update(x, stream.loss_at(t));
    t = (t + 1) % stream.size();
  }
  state.SetItemsProcessed(state.iterations());
}

void BM_SpanOgd(benchmark::State& state) {
  SpanBoosterOptions o;
  o.stages = static_cast<std::size_t>(state.range(0));
  SpanBooster b([](std::size_t) { return std::make_unique<OgdLearner>(); }, o);
  drive(state, b, planted().stream);
}
BENCHMARK(BM_SpanOgd)->Arg(1)->Arg(10)->Arg(32)->Arg(100);

void BM_SpanStump(benchmark::State& state) {
  SpanBoosterOptions o;
  o.stages = static_cast<std::size_t>(state.range(0));
  SpanBooster b([](std::size_t) { return std::make_unique<StumpLearner>(); }, o);
  drive(state, b, additive());
}
BENCHMARK(BM_SpanStump)->Arg(10)->Arg(20)->Arg(100);

void BM_HullHedge(benchmark::State& state) {
  auto pool = std::make_shared<RandomFeaturePool>(static_cast<std::size_t>(state.range(1)), 5, 7);
  ChBoosterOptions o;
  o.stages = static_cast<std::size_t>(state.range(0));
  ChBooster b([&](std::size_t) { return std::make_unique<HedgeLearner>(pool, HedgeOptions{kRounds}); }, o);
  drive(state, b, planted().stream);
}
BENCHMARK(BM_HullHedge)->Args({10, 8})->Args({10, 64})->Args({32, 64});

void BM_ParseLibsvm(benchmark::State& state) {
  std::ostringstream text;
  serialize_stream(text, additive(), StreamFormat::libsvm);
  const std::string data = text.str();
  for (auto _ : state) {
    std::istringstream in(data);
    benchmark::DoNotOptimize(parse_stream(in, {}));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(additive().size()));
  state.SetBytesProcessed(state.iterations() * static_cast<std::int64_t>(data.size()));
}
BENCHMARK(BM_ParseLibsvm);

void BM_BatchGatedStep(benchmark::State& state) {
  const PlantedBatchProblem p = make_planted_batch(static_cast<std::size_t>(state.range(0)),
                                                   static_cast<std::size_t>(state.range(1)), 2.0, 5);
  BatchIterate f = zero_iterate(p.dictionary);
  for (auto _ : state) {
    f = gated_step(p.functional, p.dictionary, f, 0.1);
    benchmark::DoNotOptimize(f.values.data());
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_BatchGatedStep)->Args({8, 100})->Args({64, 1000});

}  // namespace

BENCHMARK_MAIN();
