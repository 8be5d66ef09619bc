#include <gtest/gtest.h>

#include <random>

#include "lcag/error.hpp"
#include "lcag/snapshot.hpp"
#include "lcag/triples.hpp"
#include "test_support.hpp"

using namespace lcag;

namespace {

Graph rich_graph(std::uint64_t seed, std::size_t max_nodes) {
  std::mt19937_64 rng(seed);
  testkit::RandomGraphSpec spec;
  spec.max_nodes = max_nodes;
  spec.max_edges = 2 * max_nodes;
  spec.rich_values = true;
  spec.max_props = 3;
  spec.labels = {"Activity", "with space", "é"};
  spec.rel_types = {"HAS_INPUT", "a/b"};
  return testkit::random_graph(rng, spec);
}

// Snapshot --------------------------------------------------------------------

TEST(Snapshot, Layout) {
  Graph g;
  NodeId a = g.create_node({"Flow", "Activity"}, {{"z", std::int64_t{1}}, {"a", std::string("x")}});
  g.create_edge("HAS_OUTPUT", a, a, {{"amount", Quantity{1.0, "kg", Uncertainty::uniform(0.5, 1.5)}}});
  EXPECT_EQ(write_snapshot(g),
            "lcagraph-dump v1\n"
            "counts nodes=1 edges=1\n"
            "{\"kind\":\"node\",\"id\":0,\"labels\":[\"Activity\",\"Flow\"],\"props\":{\"a\":\"x\",\"z\":1}}\n"
            "{\"kind\":\"edge\",\"id\":0,\"rel_type\":\"HAS_OUTPUT\",\"src\":0,\"dst\":0,\"props\":{\"amount\":"
            "{\"q\":1.0,\"u\":\"kg\",\"unc\":{\"kind\":\"uniform\",\"lo\":0.5,\"hi\":1.5}}}}\n");
}

TEST(Snapshot, RoundTripRandomGraphs) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    Graph g = rich_graph(seed, 60);
    const std::string text = write_snapshot(g);
    Graph back = read_snapshot(text);
    ASSERT_EQ(back, g) << "seed " << seed;
    ASSERT_EQ(write_snapshot(back), text);
  }
}

TEST(Snapshot, EmptyGraph) {
  Graph g;
  EXPECT_EQ(read_snapshot(write_snapshot(g)), g);
}

TEST(Snapshot, IdsContinueAfterReload) {
  Graph g;
  g.create_node();
  NodeId b = g.create_node();
  Graph back = read_snapshot(write_snapshot(g));
  EXPECT_GT(back.create_node().value, b.value);
}

TEST(Snapshot, VersionMismatch) {
  EXPECT_THROW(read_snapshot("lcagraph-dump v9\ncounts nodes=0 edges=0\n"), VersionError);
  EXPECT_THROW(read_snapshot("something else\n"), FormatError);
}

TEST(Snapshot, MalformedLineNumber) {
  const std::string text =
      "lcagraph-dump v1\ncounts nodes=2 edges=0\n"
      "{\"kind\":\"node\",\"id\":0,\"labels\":[],\"props\":{}}\n"
      "{\"kind\":\"node\",\"id\":1,\"labels\":[\n";
  try {
    read_snapshot(text);
    FAIL() << "expected FormatError";
  } catch (const FormatError& e) {
    EXPECT_EQ(e.line(), 4u);
  }
}

TEST(Snapshot, CountMismatch) {
  EXPECT_THROW(read_snapshot("lcagraph-dump v1\ncounts nodes=1 edges=0\n"), FormatError);
}

TEST(Snapshot, DanglingEdge) {
  EXPECT_THROW(read_snapshot("lcagraph-dump v1\ncounts nodes=0 edges=1\n"
                             "{\"kind\":\"edge\",\"id\":0,\"rel_type\":\"R\",\"src\":0,\"dst\":1,\"props\":{}}\n"),
               Error);
}

// Triples ---------------------------------------------------------------------

TEST(Triples, Vocabulary) {
  Graph g;
  NodeId a = g.create_node({"Activity"}, {{"name", std::string("fermentation")}});
  NodeId f = g.create_node({"Flow"});
  g.create_edge("HAS_OUTPUT", a, f, {{"amount", Quantity{1.0, "kg", {}}}});
  g.create_edge("NEXT", a, a);
  g.create_node();
  const std::string nt = write_ntriples(to_triples(g));
  EXPECT_NE(nt.find("<urn:lcag:node:0> <urn:lcag:meta:label> <urn:lcag:label:Activity> ."), std::string::npos);
  EXPECT_NE(nt.find("<urn:lcag:node:0> <urn:lcag:prop:name> \"fermentation\"^^<urn:lcag:dt:text> ."),
            std::string::npos);
  EXPECT_NE(nt.find("<urn:lcag:edge:0> <urn:lcag:meta:rel> <urn:lcag:rel:HAS_OUTPUT> ."), std::string::npos);
  EXPECT_NE(nt.find("<urn:lcag:node:0> <urn:lcag:rel:NEXT> <urn:lcag:node:0> ."), std::string::npos);
  EXPECT_NE(nt.find("<urn:lcag:node:2> <urn:lcag:meta:kind> <urn:lcag:meta:Node> ."), std::string::npos);
  // Exchange edges carry properties, so they are reified only.
  EXPECT_EQ(nt.find("<urn:lcag:rel:HAS_OUTPUT> <urn:lcag:node:1>"), std::string::npos);
}

TEST(Triples, RoundTripRandomGraphs) {
  for (std::uint64_t seed = 100; seed < 140; ++seed) {
    Graph g = rich_graph(seed, 30);
    auto triples = to_triples(g);
    ASSERT_EQ(from_triples(triples), g) << "seed " << seed;
    ASSERT_EQ(parse_ntriples(write_ntriples(triples)), triples);
  }
}

TEST(Triples, OutputIsSorted) {
  auto triples = to_triples(rich_graph(5, 20));
  std::vector<std::string> lines;
  for (const auto& t : triples) lines.push_back(to_ntriples_line(t));
  EXPECT_TRUE(std::is_sorted(lines.begin(), lines.end()));
}

TEST(Triples, ForeignVocabularyListsSubjects) {
  std::vector<Triple> triples = {
      {"http://example.org/a", "urn:lcag:meta:kind", Term::iri("urn:lcag:meta:Node")},
      {"urn:lcag:node:0", "urn:lcag:meta:kind", Term::iri("urn:lcag:meta:Node")},
  };
  try {
    from_triples(triples);
    FAIL() << "expected UnsupportedVocabularyError";
  } catch (const UnsupportedVocabularyError& e) {
    EXPECT_EQ(e.subjects(), std::vector<std::string>{"http://example.org/a"});
  }
}

TEST(Triples, IncompleteReification) {
  std::vector<Triple> triples = {
      {"urn:lcag:node:0", "urn:lcag:meta:kind", Term::iri("urn:lcag:meta:Node")},
      {"urn:lcag:edge:0", "urn:lcag:meta:src", Term::iri("urn:lcag:node:0")},
  };
  EXPECT_THROW(from_triples(triples), IntegrityError);
  triples.push_back({"urn:lcag:edge:0", "urn:lcag:meta:rel", Term::iri("urn:lcag:rel:R")});
  triples.push_back({"urn:lcag:edge:0", "urn:lcag:meta:dst", Term::iri("urn:lcag:node:5")});
  EXPECT_THROW(from_triples(triples), IntegrityError);
}

TEST(Triples, ParseRejectsGarbage) {
  EXPECT_THROW(parse_ntriples("<a> <b> .\n"), FormatError);
  EXPECT_TRUE(parse_ntriples("# comment\n\n").empty());
}

}  // namespace
