// Micro-benchmarks for the hot paths: the two rankers at growing prefix
// lengths, forest training, the stability metric and the PH detector loop.

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "osfs/drift.hpp"
#include "osfs/forest.hpp"
#include "osfs/ranking.hpp"
#include "osfs/rng.hpp"
#include "osfs/search.hpp"
#include "osfs/stability.hpp"
#include "osfs/synth.hpp"

namespace {

osfs::TraceWindow random_window(std::size_t n, std::int64_t t, std::uint64_t seed) {
  std::vector<std::string> names;
  names.reserve(n);
  for (std::size_t j = 0; j < n; ++j) names.push_back("f" + std::to_string(j));
  osfs::TraceWindow w{osfs::FeatureCatalog(std::move(names))};
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (std::int64_t i = 1; i <= t; ++i) {
    osfs::Sample s;
    s.t = i;
    s.values.reserve(n);
    for (std::size_t j = 0; j < n; ++j) s.values.push_back(u(rng));
    s.target = u(rng);
    w.append(s);
  }
  return w;
}

void BM_RankArr(benchmark::State& state) {
  const auto window = random_window(256, state.range(0), 7);
  for (auto _ : state) {
    benchmark::DoNotOptimize(osfs::rank_arr(window));
  }
}
BENCHMARK(BM_RankArr)->Arg(64)->Arg(256)->Arg(1024);

void BM_RankLs(benchmark::State& state) {
  const auto window = random_window(256, state.range(0), 7);
  for (auto _ : state) {
    benchmark::DoNotOptimize(osfs::rank_ls(window));
  }
}
BENCHMARK(BM_RankLs)->Arg(64)->Arg(256)->Arg(512);

void BM_TrainForest(benchmark::State& state) {
  const auto window = random_window(16, state.range(0), 11);
  const auto set = osfs::make_feature_set(window.catalog().names(), window.length());
  osfs::ForestConfig cfg;
  cfg.tree_count = 25;
  for (auto _ : state) {
    benchmark::DoNotOptimize(osfs::train_forest(window, set, 3, cfg));
  }
}
BENCHMARK(BM_TrainForest)->Arg(256)->Arg(1024);

void BM_FrequencyStability(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  osfs::SelectionHistory history(n, 10);
  std::mt19937_64 rng(5);
  for (int r = 0; r < 10; ++r) {
    std::vector<std::uint8_t> row(n, 0);
    std::vector<std::size_t> idx(n);
    for (std::size_t j = 0; j < n; ++j) idx[j] = j;
    std::shuffle(idx.begin(), idx.end(), rng);
    for (std::size_t j = 0; j < n / 4; ++j) row[idx[j]] = 1;
    history.push(row);
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(osfs::frequency_stability(history));
  }
}
BENCHMARK(BM_FrequencyStability)->Arg(256)->Arg(2048);

void BM_PageHinkley(benchmark::State& state) {
  std::mt19937_64 rng(9);
  std::exponential_distribution<double> ex(10.0);
  std::vector<double> stream(100000);
  for (auto& v : stream) v = ex(rng);
  for (auto _ : state) {
    osfs::PageHinkleyState ph;
    bool any = false;
    for (double v : stream) any |= osfs::page_hinkley_update(ph, v);
    benchmark::DoNotOptimize(any);
  }
}
BENCHMARK(BM_PageHinkley);

void BM_OsfsEndToEnd(benchmark::State& state) {
  osfs::SynthSpec spec;
  spec.n_noise = 100;
  spec.n_informative = 8;
  spec.t_len = 1200;
  spec.seed = 21;
  const auto trace = osfs::synth_trace(spec);
  for (auto _ : state) {
    osfs::WindowSource source(trace.window);
    benchmark::DoNotOptimize(osfs::osfs_arr_sim_ksmall(source));
  }
}
BENCHMARK(BM_OsfsEndToEnd);

}  // namespace

BENCHMARK_MAIN();
