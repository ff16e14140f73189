#include <benchmark/benchmark.h>

#include <cstdint>

#include "latentprobe/ann/hnsw.hpp"
#include "latentprobe/ann/ivf.hpp"
#include "latentprobe/ann/lsh.hpp"
#include "latentprobe/embedding_set.hpp"
#include "latentprobe/exact_knn.hpp"
#include "latentprobe/geometry.hpp"
#include "latentprobe/synth.hpp"

namespace lp = latentprobe;

namespace {

lp::EmbeddingSet bench_corpus(std::size_t n, std::size_t d) {
  lp::SynthSpec spec;
  spec.kind = lp::SynthKind::labeled_mixture;
  spec.n = n;
  spec.d = d;
  spec.seed = 17;
  spec.n_classes = 10;
  return lp::generate(spec);
}

void BM_ExactKnn(benchmark::State& state) {
  const auto corpus =
      bench_corpus(static_cast<std::size_t>(state.range(0)), 64);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        lp::exact_knn(corpus, 10, lp::Metric::euclidean, true));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ExactKnn)->Arg(1000)->Arg(2000)->Arg(4000)->Complexity();

void BM_IvfBuild(benchmark::State& state) {
  const auto corpus = bench_corpus(5000, 64);
  for (auto _ : state) {
    benchmark::DoNotOptimize(lp::IvfIndex(corpus, lp::IvfConfig{}));
  }
}
BENCHMARK(BM_IvfBuild);

void BM_IvfSearch(benchmark::State& state) {
  const auto corpus = bench_corpus(5000, 64);
  const lp::IvfIndex index(corpus, lp::IvfConfig{});
  std::size_t q = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(index.search(corpus.row(q), 10));
    q = (q + 1) % corpus.size();
  }
}
BENCHMARK(BM_IvfSearch);

void BM_HnswBuild(benchmark::State& state) {
  auto corpus = bench_corpus(2000, 64);
  corpus = lp::normalize(corpus, lp::NormalizationMode::l2_rows);
  for (auto _ : state) {
    benchmark::DoNotOptimize(lp::HnswIndex(corpus, lp::HnswConfig{}));
  }
}
BENCHMARK(BM_HnswBuild);

void BM_HnswSearch(benchmark::State& state) {
  auto corpus = bench_corpus(5000, 64);
  corpus = lp::normalize(corpus, lp::NormalizationMode::l2_rows);
  const lp::HnswIndex index(corpus, lp::HnswConfig{});
  std::size_t q = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(index.search(corpus.row(q), 10));
    q = (q + 1) % corpus.size();
  }
}
BENCHMARK(BM_HnswSearch);

void BM_LshEncode(benchmark::State& state) {
  const auto corpus = bench_corpus(5000, 64);
  lp::LshConfig cfg;
  cfg.nbits = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(lp::LshIndex(corpus, cfg));
  }
}
BENCHMARK(BM_LshEncode)->Arg(16)->Arg(128)->Arg(1024);

void BM_LshSearch(benchmark::State& state) {
  const auto corpus = bench_corpus(5000, 64);
  lp::LshConfig cfg;
  cfg.nbits = 128;
  const lp::LshIndex index(corpus, cfg);
  std::size_t q = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(index.search(corpus.row(q), 10));
    q = (q + 1) % corpus.size();
  }
}
BENCHMARK(BM_LshSearch);

void BM_GeometryReport(benchmark::State& state) {
  const auto corpus = bench_corpus(2000, 64);
  for (auto _ : state) {
    benchmark::DoNotOptimize(lp::geometry_report(corpus));
  }
}
BENCHMARK(BM_GeometryReport);

}  // namespace

BENCHMARK_MAIN();
