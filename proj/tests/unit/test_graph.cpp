#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "lcag/error.hpp"
#include "lcag/graph.hpp"
#include "test_support.hpp"

using namespace lcag;

namespace {

std::vector<std::string> label_strings(const NodeView& n) {
  std::vector<std::string> out;
  for (auto l : n.labels()) out.emplace_back(l);
  return out;
}

TEST(Graph, CreateNodeIsIndexedByEveryLabel) {
  Graph g;
  NodeId a = g.create_node({"Activity"}, {{"name", std::string("fermentation")}, {"stage", std::string("production")}});
  NodeId f = g.create_node({"Flow", "Product"}, {{"name", std::string("glucose")}, {"kind", std::string("intermediate")}});
  EXPECT_EQ(g.nodes_with_label("Activity"), std::vector<NodeId>{a});
  EXPECT_EQ(g.nodes_with_label("Flow"), std::vector<NodeId>{f});
  EXPECT_EQ(g.nodes_with_label("Product"), std::vector<NodeId>{f});
  EXPECT_TRUE(g.nodes_with_label("Nope").empty());
  EXPECT_EQ(g.label_cardinality("Flow"), 1u);
  EXPECT_EQ(label_strings(*g.node(f)), (std::vector<std::string>{"Flow", "Product"}));
}

TEST(Graph, DuplicateLabelsCollapse) {
  Graph g;
  NodeId n = g.create_node({"A", "A"});
  EXPECT_EQ(label_strings(*g.node(n)), std::vector<std::string>{"A"});
}

TEST(Graph, RejectsNonFiniteValues) {
  Graph g;
  EXPECT_THROW(g.create_node({"A"}, {{"x", std::numeric_limits<double>::quiet_NaN()}}), ValueError);
  EXPECT_THROW(g.create_node({"A"}, {{"x", Quantity{INFINITY, "kg", {}}}}), ValueError);
  EXPECT_THROW(g.create_node({"A"}, {{"x", RealArray{1.0, NAN}}}), ValueError);
  EXPECT_EQ(g.node_count(), 0u);
}

TEST(Graph, EdgeCarriesExchangeAmount) {
  Graph g;
  NodeId a = g.create_node({"Activity"});
  NodeId f = g.create_node({"Flow"});
  EdgeId e = g.create_edge("HAS_OUTPUT", a, f, {{"amount", Quantity{1.0, "kg", {}}}});
  auto view = g.edge(e);
  ASSERT_TRUE(view);
  EXPECT_EQ(view->rel_type(), "HAS_OUTPUT");
  EXPECT_EQ(view->src(), a);
  EXPECT_EQ(view->dst(), f);
  EXPECT_EQ(std::get<Quantity>(*view->property("amount")), (Quantity{1.0, "kg", {}}));
}

TEST(Graph, EdgeErrors) {
  Graph g;
  NodeId a = g.create_node({"A"});
  EXPECT_THROW(g.create_edge("R", a, NodeId{99}), IntegrityError);
  EXPECT_THROW(g.create_edge("", a, a), ValueError);
  EXPECT_EQ(g.edge_count(), 0u);
}

TEST(Graph, UpdateReportsNotPresent) {
  Graph g;
  NodeId a = g.create_node({"A"}, {{"k", std::int64_t{1}}});
  EXPECT_EQ(g.remove_property(a, "missing"), UpdateOutcome::not_present);
  EXPECT_EQ(g.remove_label(a, "B"), UpdateOutcome::not_present);
  EXPECT_EQ(g.set_property(a, "k", std::int64_t{2}), UpdateOutcome::applied);
  EXPECT_EQ(std::get<std::int64_t>(*g.node(a)->property("k")), 2);
  EXPECT_THROW(g.set_property(NodeId{7}, "k", std::int64_t{1}), NotFoundError);
  EXPECT_THROW(g.set_property(EdgeId{0}, "k", std::int64_t{1}), NotFoundError);
}

TEST(Graph, GetAbsentIsEmpty) {
  Graph g;
  EXPECT_FALSE(g.node(NodeId{0}));
  EXPECT_FALSE(g.edge(EdgeId{3}));
  EXPECT_FALSE(g.get(NodeId{1}));
}

TEST(Graph, NeighborsDirectionsAndSelfLoop) {
  Graph g;
  NodeId a = g.create_node({"A"}), b = g.create_node({"B"});
  EdgeId ab = g.create_edge("R", a, b);
  EdgeId ba = g.create_edge("S", b, a);
  EdgeId aa = g.create_edge("R", a, a);
  auto sorted = [](std::vector<Neighbor> v) {
    std::sort(v.begin(), v.end(), [](auto& x, auto& y) { return x.edge < y.edge; });
    return v;
  };
  EXPECT_EQ(sorted(g.neighbors(a, Direction::out)), (std::vector<Neighbor>{{ab, b}, {aa, a}}));
  EXPECT_EQ(sorted(g.neighbors(a, Direction::in)), (std::vector<Neighbor>{{ba, b}, {aa, a}}));
  EXPECT_EQ(sorted(g.neighbors(a, Direction::both)), (std::vector<Neighbor>{{ab, b}, {ba, b}, {aa, a}}));
  EXPECT_EQ(g.neighbors(a, Direction::both, "S"), (std::vector<Neighbor>{{ba, b}}));
  EXPECT_TRUE(g.neighbors(a, Direction::both, "UNKNOWN").empty());
  EXPECT_EQ(g.degree(a, Direction::both), 3u);
  EXPECT_THROW(g.neighbors(NodeId{42}, Direction::out), NotFoundError);
}

TEST(Graph, DeleteRequiresDetach) {
  Graph g;
  NodeId a = g.create_node({"A"}), b = g.create_node({"B"});
  g.create_edge("R", a, b);
  g.create_edge("R", b, b);
  const Graph before = g;
  EXPECT_THROW(g.remove(b), IntegrityError);
  EXPECT_EQ(g, before);
  EXPECT_EQ(g.remove(b, true), 3u);
  EXPECT_EQ(g.node_count(), 1u);
  EXPECT_EQ(g.edge_count(), 0u);
  EXPECT_TRUE(g.neighbors(a, Direction::both).empty());
  EXPECT_TRUE(g.nodes_with_label("B").empty());
}

TEST(Graph, IdsAreNeverReused) {
  Graph g;
  NodeId a = g.create_node();
  g.remove(a);
  NodeId b = g.create_node();
  EXPECT_NE(a, b);
  EXPECT_GT(b.value, a.value);
}

TEST(Graph, InsertRejectsLiveAndHugeIds) {
  Graph g;
  g.insert_node(NodeId{5}, std::vector<std::string>{"A"}, {});
  EXPECT_THROW(g.insert_node(NodeId{5}, std::vector<std::string>{"A"}, {}), IntegrityError);
  EXPECT_THROW(g.insert_node(NodeId{std::uint64_t{1} << 40}, std::vector<std::string>{"A"}, {}), Error);
  EXPECT_EQ(g.create_node().value, 6u);
}

TEST(Graph, TransactionRollbackRestoresEverything) {
  std::mt19937_64 rng(7);
  Graph g = testkit::random_graph(rng, {});
  const Graph before = g;
  {
    auto tx = g.transaction();
    auto ids = g.node_ids();
    NodeId fresh = g.create_node({"Z"}, {{"p", std::string("new")}});
    if (!ids.empty()) {
      g.create_edge("T", ids.front(), fresh);
      g.add_label(ids.front(), "Q");
      g.set_property(ids.back(), "p9", 1.5);
      g.remove(ids[ids.size() / 2], true);
    }
  }
  EXPECT_EQ(g, before);
  for (const auto& l : {"A", "B", "C", "Z", "Q"}) {
    std::vector<NodeId> scan;
    for (NodeId id : g.node_ids()) {
      if (g.node(id)->has_label(l)) scan.push_back(id);
    }
    EXPECT_EQ(g.nodes_with_label(l), scan) << l;
  }
}

TEST(Graph, CommittedTransactionKeepsChanges) {
  Graph g;
  {
    auto tx = g.transaction();
    g.create_node({"A"});
    tx.commit();
  }
  EXPECT_EQ(g.node_count(), 1u);
}

TEST(Graph, EqualityIgnoresInsertionOrder) {
  Graph a, b;
  a.insert_node(NodeId{0}, std::vector<std::string>{"X", "Y"}, {});
  a.insert_node(NodeId{1}, std::vector<std::string>{"Y"}, {});
  b.insert_node(NodeId{1}, std::vector<std::string>{"Y"}, {});
  b.insert_node(NodeId{0}, std::vector<std::string>{"Y", "X"}, {});
  EXPECT_EQ(a, b);
  b.set_property(NodeId{1}, "k", true);
  EXPECT_NE(a, b);
}

// Property: after random mutation, the label index and adjacency lists agree
// with full scans over the primary storage.
TEST(GraphProperty, IndexesMatchFullScans) {
  std::mt19937_64 rng(11);
  for (int round = 0; round < 20; ++round) {
    Graph g = testkit::random_graph(rng, {200, 400});
    auto ids = g.node_ids();
    for (std::size_t i = 0; i < ids.size(); i += 5) g.remove(ids[i], true);
    ids = g.node_ids();
    for (std::size_t i = 1; i < ids.size(); i += 7) g.add_label(ids[i], "B");
    for (std::size_t i = 2; i < ids.size(); i += 9) g.remove_label(ids[i], "A");

    for (const auto& l : {"A", "B", "C"}) {
      std::vector<NodeId> scan;
      for (NodeId id : g.node_ids()) {
        if (g.node(id)->has_label(l)) scan.push_back(id);
      }
      ASSERT_EQ(g.nodes_with_label(l), scan);
    }
    for (NodeId n : g.node_ids()) {
      std::vector<std::pair<std::uint64_t, std::uint64_t>> scan, got;
      for (EdgeId e : g.edge_ids()) {
        auto v = g.edge(e);
        if (v->src() == n) scan.push_back({e.value, v->dst().value});
        if (v->dst() == n) scan.push_back({e.value, v->src().value});
      }
      scan.erase(std::unique(scan.begin(), scan.end()), scan.end());  // self-loops once
      for (auto nb : g.neighbors(n, Direction::both)) got.push_back({nb.edge.value, nb.other.value});
      std::sort(scan.begin(), scan.end());
      std::sort(got.begin(), got.end());
      ASSERT_EQ(got, scan);
    }
  }
}

}  // namespace
