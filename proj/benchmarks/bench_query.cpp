#include <benchmark/benchmark.h>

#include <random>

#include "lcag/graph.hpp"
#include "lcag/query.hpp"

namespace {

// Chains of Workflow -> Activity -> Flow shaped like ingested inventories.
lcag::Graph inventory(std::size_t workflows) {
  lcag::Graph g;
  std::vector<lcag::NodeId> flows;
  for (std::size_t f = 0; f < 200; ++f) {
    flows.push_back(g.create_node({"Flow"}, {{"name", "flow" + std::to_string(f)}, {"kind", std::string("product")}}));
  }
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<std::size_t> pick(0, flows.size() - 1);
  for (std::size_t w = 0; w < workflows; ++w) {
    auto wf = g.create_node({"Workflow"}, {{"id", "W" + std::to_string(w)}});
    for (std::int64_t s = 0; s < 6; ++s) {
      auto a = g.create_node({"Activity"}, {{"name", "a" + std::to_string(s)}, {"step_index", s}});
      g.create_edge("HAS_STEP", wf, a, {{"index", s}});
      g.create_edge("HAS_INPUT", a, flows[pick(rng)], {{"amount", lcag::Quantity{1.0, "kg", {}}}});
      g.create_edge("HAS_OUTPUT", a, flows[pick(rng)], {{"amount", lcag::Quantity{0.5, "kg", {}}}});
    }
  }
  return g;
}

void BM_ParseQuery(benchmark::State& state) {
  const char* text =
      "MATCH (w:Workflow)-[:HAS_STEP]->(a:Activity)-[o:HAS_OUTPUT]->(f:Flow {name: 'flow7'}) "
      "WHERE a.step_index > 2 RETURN w.id AS workflow, SUM(o.amount) AS yield ORDER BY workflow LIMIT 10";
  for (auto _ : state) benchmark::DoNotOptimize(lcag::parse_query(text));
}
BENCHMARK(BM_ParseQuery);

void BM_YieldQuery(benchmark::State& state) {
  const lcag::Graph g = inventory(static_cast<std::size_t>(state.range(0)));
  const auto ast = lcag::parse_query(
      "MATCH (w:Workflow)-[:HAS_STEP]->(a:Activity)-[o:HAS_OUTPUT]->(f:Flow {name: 'flow7'}) "
      "RETURN w.id AS workflow, SUM(o.amount) AS yield ORDER BY workflow");
  for (auto _ : state) benchmark::DoNotOptimize(lcag::execute_query(ast, g));
}
BENCHMARK(BM_YieldQuery)->Arg(100)->Arg(1000)->Unit(benchmark::kMicrosecond);

void BM_YieldQueryNaive(benchmark::State& state) {
  const lcag::Graph g = inventory(static_cast<std::size_t>(state.range(0)));
  const auto ast = lcag::parse_query(
      "MATCH (w:Workflow)-[:HAS_STEP]->(a:Activity)-[o:HAS_OUTPUT]->(f:Flow {name: 'flow7'}) "
      "RETURN w.id AS workflow, SUM(o.amount) AS yield ORDER BY workflow");
  for (auto _ : state) benchmark::DoNotOptimize(lcag::execute_naive(ast, g));
}
BENCHMARK(BM_YieldQueryNaive)->Arg(10)->Arg(30)->Unit(benchmark::kMicrosecond);

void BM_CountByLabel(benchmark::State& state) {
  const lcag::Graph g = inventory(1000);
  for (auto _ : state) benchmark::DoNotOptimize(lcag::run_query("MATCH (a:Activity) RETURN COUNT(*)", g));
}
BENCHMARK(BM_CountByLabel)->Unit(benchmark::kMicrosecond);

}  // namespace
