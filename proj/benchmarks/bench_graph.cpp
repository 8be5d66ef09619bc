#include <benchmark/benchmark.h>

#include <random>

#include "lcag/graph.hpp"

namespace {

lcag::Graph random_graph(std::size_t n, std::size_t out_degree, std::uint64_t seed) {
  lcag::Graph g;
  std::vector<lcag::NodeId> ids;
  ids.reserve(n);
  for (std::size_t i = 0; i < n; ++i) ids.push_back(g.create_node({i % 10 == 0 ? "Rare" : "Common"}));
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> any(0, n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < out_degree; ++k) g.create_edge(k % 2 ? "R" : "S", ids[i], ids[any(rng)]);
  }
  return g;
}

void BM_Neighbors(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const lcag::Graph g = random_graph(n, 4, 1);
  const auto ids = g.node_ids();
  std::mt19937_64 rng(2);
  std::uniform_int_distribution<std::size_t> any(0, ids.size() - 1);
  for (auto _ : state) {
    auto nb = g.neighbors(ids[any(rng)], lcag::Direction::both);
    benchmark::DoNotOptimize(nb.data());
  }
}
BENCHMARK(BM_Neighbors)->RangeMultiplier(10)->Range(1000, 1000000);

void BM_NeighborsTyped(benchmark::State& state) {
  const lcag::Graph g = random_graph(100000, 4, 3);
  const auto ids = g.node_ids();
  std::size_t i = 0;
  for (auto _ : state) {
    std::size_t count = 0;
    g.for_each_neighbor(ids[i++ % ids.size()], lcag::Direction::out, "R",
                        [&](lcag::EdgeId, lcag::NodeId) { ++count; });
    benchmark::DoNotOptimize(count);
  }
}
BENCHMARK(BM_NeighborsTyped);

void BM_LabelLookup(benchmark::State& state) {
  const lcag::Graph g = random_graph(static_cast<std::size_t>(state.range(0)), 1, 4);
  for (auto _ : state) benchmark::DoNotOptimize(g.label_cardinality("Rare"));
}
BENCHMARK(BM_LabelLookup)->Arg(1000)->Arg(100000);

void BM_CreateEdge(benchmark::State& state) {
  lcag::Graph g = random_graph(10000, 0, 5);
  const auto ids = g.node_ids();
  std::mt19937_64 rng(6);
  std::uniform_int_distribution<std::size_t> any(0, ids.size() - 1);
  for (auto _ : state) benchmark::DoNotOptimize(g.create_edge("R", ids[any(rng)], ids[any(rng)]));
}
BENCHMARK(BM_CreateEdge);

void BM_RollbackTransaction(benchmark::State& state) {
  lcag::Graph g = random_graph(1000, 2, 7);
  const auto ids = g.node_ids();
  for (auto _ : state) {
    auto tx = g.transaction();
    for (std::size_t i = 0; i < 64; ++i) g.set_property(ids[i], "k", static_cast<std::int64_t>(i));
  }
}
BENCHMARK(BM_RollbackTransaction);

}  // namespace

BENCHMARK_MAIN();
