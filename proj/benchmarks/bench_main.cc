// Copyright 2026 The mtdet Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "mtdet/detector.h"
#include "mtdet/metrics.h"
#include "mtdet/synth.h"

namespace mtdet {
namespace {

SynthCorpus Corpus(std::size_t speakers, std::size_t tests) {
  SynthConfig cfg;
  cfg.n_blacklist = speakers;
  cfg.n_background = 10;
  cfg.n_test = tests;
  cfg.dim = 600;
  cfg.seed = 11;
  return Generate(cfg);
}

void BM_CosineScore(benchmark::State& state) {
  const SynthCorpus corpus = Corpus(state.range(0), 2000);
  const auto models = Enroll(corpus.train_blacklist, corpus.registry);
  const CosineScorer scorer(state.range(1));
  for (auto _ : state) {
    benchmark::DoNotOptimize(scorer.Score(models, corpus.test_mix));
  }
  state.SetItemsProcessed(state.iterations() * models.size() *
                          corpus.test_mix.size());
}
BENCHMARK(BM_CosineScore)->Args({100, 1})->Args({400, 1})->Args({400, 4})->UseRealTime()
    ->Unit(benchmark::kMillisecond);

void BM_TopDetections(benchmark::State& state) {
  const SynthCorpus corpus = Corpus(state.range(0), 2000);
  const auto models = Enroll(corpus.train_blacklist, corpus.registry);
  const ScoreMatrix m = CosineScorer().Score(models, corpus.test_mix);
  for (auto _ : state) benchmark::DoNotOptimize(TopDetections(m));
}
BENCHMARK(BM_TopDetections)->Arg(400)->Unit(benchmark::kMicrosecond);

std::vector<Trial> Trials(std::size_t n) {
  std::mt19937_64 gen(1);
  std::normal_distribution<double> normal;
  std::vector<Trial> trials;
  for (std::size_t i = 0; i < n; ++i) {
    const auto h = GlobalId::FromIndex(1 + gen() % 100);
    std::optional<GlobalId> truth;
    if (i % 2 == 0) truth = gen() % 10 ? h : GlobalId::FromIndex(1 + gen() % 100);
    trials.push_back({normal(gen) + (truth ? 1.0 : 0.0), h, truth});
  }
  return trials;
}

void BM_Top1CurveAndEer(benchmark::State& state) {
  const auto trials = Trials(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(ComputeEer(Top1Curve(trials)));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Top1CurveAndEer)->RangeMultiplier(4)->Range(1 << 10, 1 << 16)
    ->Complexity(benchmark::oNLogN);

}  // namespace
}  // namespace mtdet

BENCHMARK_MAIN();
