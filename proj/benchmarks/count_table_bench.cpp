// Copyright 2026 The gtadoc Authors
// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include <random>
#include <thread>
#include <vector>

#include "gtadoc/count_table.hpp"
#include "gtadoc/memory_pool.hpp"

namespace {

std::vector<std::uint64_t> zipf_keys(std::size_t n, std::uint64_t universe) {
  std::mt19937_64 rng(42);
  std::vector<double> w(universe);
  for (std::uint64_t i = 0; i < universe; ++i) w[i] = 1.0 / static_cast<double>(i + 1);
  std::discrete_distribution<std::uint64_t> pick(w.begin(), w.end());
  std::vector<std::uint64_t> keys(n);
  for (auto& k : keys) k = pick(rng);
  return keys;
}

void BM_InsertSingleThread(benchmark::State& state) {
  const auto universe = static_cast<std::uint64_t>(state.range(0));
  const auto keys = zipf_keys(1 << 16, universe);
  for (auto _ : state) {
    gtadoc::ConcurrentCountTable table(universe);
    for (std::uint64_t k : keys) table.insert_or_add(k, 1);
    benchmark::DoNotOptimize(table.size());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(keys.size()));
}
BENCHMARK(BM_InsertSingleThread)->Arg(256)->Arg(4096)->Arg(65536);

// Every thread hammers the same table.
void BM_InsertShared(benchmark::State& state) {
  const unsigned threads = static_cast<unsigned>(state.range(0));
  const auto keys = zipf_keys(1 << 18, 8192);
  for (auto _ : state) {
    gtadoc::ConcurrentCountTable table(8192);
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&, t] {
        for (std::size_t i = t; i < keys.size(); i += threads) table.insert_or_add(keys[i], 1);
      });
    }
    for (auto& th : pool) th.join();
    benchmark::DoNotOptimize(table.size());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(keys.size()));
}
BENCHMARK(BM_InsertShared)->Arg(1)->Arg(2)->Arg(4)->Arg(8)->UseRealTime();

void BM_PoolMergeScaled(benchmark::State& state) {
  const auto n = static_cast<std::uint64_t>(state.range(0));
  std::vector<std::uint64_t> bounds{n, n};
  gtadoc::MemoryPool pool(bounds);
  auto src = pool.table(0);
  for (std::uint64_t k = 0; k < n; ++k) src.insert_or_add(k * 7919, k + 1);
  for (auto _ : state) {
    auto dst = pool.table(1);
    dst.merge_scaled(src, 3);
    benchmark::DoNotOptimize(dst.size());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(BM_PoolMergeScaled)->Arg(1024)->Arg(16384);

}  // namespace
