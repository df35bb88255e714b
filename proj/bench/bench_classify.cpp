// Serial reference vs OpenMP relationship classifier on random corpora.

#include <random>

#include <benchmark/benchmark.h>

#include "evalrank/relations.hpp"
#include "support/testkit.hpp"

namespace {

evalrank::Corpus corpus_of(std::size_t n) {
  std::mt19937_64 rng(n);
  evalrank::testkit::CorpusShape shape;
  shape.achievements = n;
  shape.key_problems = 8;
  shape.cite_p = 0.05;
  shape.last_year = 1990 + static_cast<int>(n / 10);
  return evalrank::testkit::random_corpus(rng, shape);
}

void BM_ClassifySerial(benchmark::State& state) {
  const auto c = corpus_of(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(evalrank::classify_relationships_serial(c));
  state.SetComplexityN(state.range(0));
}

void BM_ClassifyParallel(benchmark::State& state) {
  const auto c = corpus_of(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(evalrank::classify_relationships(c));
  state.SetComplexityN(state.range(0));
}

}  // namespace

BENCHMARK(BM_ClassifySerial)->RangeMultiplier(4)->Range(64, 1024)->Complexity();
BENCHMARK(BM_ClassifyParallel)->RangeMultiplier(4)->Range(64, 1024)->Complexity();

BENCHMARK_MAIN();
