#include <benchmark/benchmark.h>

#include "lcag/graph.hpp"
#include "lcag/ingest.hpp"
#include "lcag/snapshot.hpp"

namespace {

const char* kStages[] = {"production", "transportation", "usage", "disposal"};

lcag::TableBundle synthetic_bundle(std::size_t workflows) {
  std::string wf(lcag::table_header(lcag::TableKind::workflow));
  std::string md(lcag::table_header(lcag::TableKind::metadata));
  std::string ref(lcag::table_header(lcag::TableKind::reference));
  wf += "\n";
  md += "\n";
  ref += "\n";
  for (std::size_t w = 0; w < workflows; ++w) {
    const std::string id = "W" + std::to_string(w);
    for (std::size_t s = 0; s < 8; ++s) {
      const std::string step = std::to_string(s);
      const std::string act = "act" + step;
      wf += id + "," + step + "," + act + "," + kStages[s % 4] + ",input,flow" + std::to_string((w + s) % 50) +
            ",intermediate,1.5,kg,uniform,1,2\n";
      wf += id + "," + step + "," + act + "," + kStages[s % 4] + ",output,flow" + std::to_string((w + s + 1) % 50) +
            ",intermediate,1.25,kg,,,\n";
    }
    md += id + ",region,R" + std::to_string(w % 7) + "\n" + id + ",boundary,cradle-to-gate\n";
    ref += id + ",R" + std::to_string(w) + ",Author,Title " + std::to_string(w) + ",2020,\n";
  }
  return {{"workflow", wf}, {"metadata", md}, {"reference", ref}};
}

void BM_IngestBundle(benchmark::State& state) {
  const auto bundle = synthetic_bundle(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    lcag::Graph g;
    benchmark::DoNotOptimize(lcag::ingest_bundle(g, bundle));
  }
}
BENCHMARK(BM_IngestBundle)->Arg(10)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_ReIngest(benchmark::State& state) {
  const auto bundle = synthetic_bundle(100);
  lcag::Graph g;
  lcag::ingest_bundle(g, bundle);
  for (auto _ : state) benchmark::DoNotOptimize(lcag::ingest_bundle(g, bundle));
}
BENCHMARK(BM_ReIngest)->Unit(benchmark::kMillisecond);

void BM_SnapshotRoundTrip(benchmark::State& state) {
  lcag::Graph g;
  lcag::ingest_bundle(g, synthetic_bundle(100));
  for (auto _ : state) benchmark::DoNotOptimize(lcag::read_snapshot(lcag::write_snapshot(g)));
}
BENCHMARK(BM_SnapshotRoundTrip)->Unit(benchmark::kMillisecond);

}  // namespace
