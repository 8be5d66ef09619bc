#include <gtest/gtest.h>

#include <random>

#include "lcag/quality.hpp"
#include "test_support.hpp"

using namespace lcag;

namespace {

bool has_reason(const FairCheck& c, const std::string& text) {
  for (const auto& r : c.reasons) {
    if (r.find(text) != std::string::npos) return true;
  }
  return false;
}

TEST(Quality, EmptyGraphIsVacuouslyPerfect) {
  auto q = score_quality(Graph{});
  for (const auto* d : q.dimensions()) {
    EXPECT_EQ(d->ratio, 1.0) << d->name;
    EXPECT_EQ(d->denominator, 0u) << d->name;
    EXPECT_TRUE(d->details.empty()) << d->name;
  }
}

TEST(Quality, FixtureScores) {
  const Graph g = testkit::fixture_graph();
  auto q = score_quality(g);
  EXPECT_EQ(q.completeness.numerator, 1u);
  EXPECT_EQ(q.completeness.denominator, 2u);
  EXPECT_EQ(q.completeness.details.size(), 1u);
  EXPECT_EQ(q.traceability.ratio, 1.0);
  EXPECT_EQ(q.precision.ratio, 1.0);
  EXPECT_EQ(q.consistency.denominator, g.node_count() + g.edge_count());
  EXPECT_EQ(q.accuracy_proxy.ratio, 1.0);
}

TEST(Quality, UnitlessAmountIsImprecise) {
  Graph g;
  NodeId a = g.create_node({"Activity"}, {{"name", std::string("a")}});
  NodeId f = g.create_node({"Flow"}, {{"name", std::string("f")}, {"kind", std::string("waste")}});
  g.create_edge("HAS_OUTPUT", a, f, {{"amount", Quantity{1.0, "kg", {}}}});
  EdgeId bare = g.create_edge("HAS_INPUT", a, f, {{"amount", 3.0}});
  g.create_edge("HAS_INPUT", a, f);
  auto q = score_quality(g);
  EXPECT_EQ(q.precision.numerator, 1u);
  EXPECT_EQ(q.precision.denominator, 3u);
  EXPECT_EQ(q.precision.details.size(), 2u);
  EXPECT_NE(std::find(q.precision.details.begin(), q.precision.details.end(), to_string(bare)),
            q.precision.details.end());
}

TEST(Quality, UnknownTermsLowerAccuracy) {
  Graph g;
  NodeId a = g.create_node({"Activity", "Gizmo"}, {{"name", std::string("a")}, {"shade", std::string("blue")}});
  g.create_edge("KNOWS", a, a);
  auto q = score_quality(g);
  EXPECT_EQ(q.accuracy_proxy.denominator, 5u);
  EXPECT_EQ(q.accuracy_proxy.numerator, 2u);
  EXPECT_EQ(q.accuracy_proxy.details.size(), 3u);
}

// Property: every dimension is self-consistent on arbitrary graphs.
TEST(QualityProperty, RatiosMatchCounts) {
  std::mt19937_64 rng(31);
  testkit::RandomGraphSpec spec;
  spec.labels = {"Workflow", "Activity", "Flow", "Reference", "Odd"};
  spec.rel_types = {"HAS_STEP", "HAS_INPUT", "HAS_OUTPUT", "HAS_REFERENCE", "WEIRD"};
  spec.rich_values = true;
  for (int i = 0; i < 50; ++i) {
    Graph g = testkit::random_graph(rng, spec);
    for (const auto* d : score_quality(g).dimensions()) {
      ASSERT_LE(d->numerator, d->denominator) << d->name;
      ASSERT_EQ(d->details.size(), d->denominator - d->numerator) << d->name;
      const double want = d->denominator == 0 ? 1.0 : static_cast<double>(d->numerator) / d->denominator;
      ASSERT_DOUBLE_EQ(d->ratio, want) << d->name;
      ASSERT_GE(d->ratio, 0.0);
      ASSERT_LE(d->ratio, 1.0);
    }
  }
}

TEST(Fair, FixturePasses) {
  auto r = fair_report(testkit::fixture_graph());
  for (const auto* c : r.checks()) EXPECT_TRUE(c->passed) << c->name << "\n" << to_text(r);
  EXPECT_TRUE(r.all_passed());
  EXPECT_FALSE(r.notes.empty());
}

TEST(Fair, EmptyGraphIsNotFindableOrReusable) {
  auto r = fair_report(Graph{});
  EXPECT_FALSE(r.findable.passed);
  EXPECT_TRUE(has_reason(r.findable, "no workflows"));
  EXPECT_FALSE(r.reusable.passed);
  EXPECT_TRUE(has_reason(r.reusable, "no references"));
  EXPECT_TRUE(r.accessible.passed);
  EXPECT_TRUE(r.interoperable.passed);
  EXPECT_FALSE(r.all_passed());
}

TEST(Fair, FailuresNameTheOffender) {
  Graph g = testkit::fixture_graph();
  const NodeId w = g.nodes_with_label("Workflow").front();
  for (auto nb : g.neighbors(w, Direction::out, "HAS_REFERENCE")) g.remove(nb.edge);
  g.create_node({"Mystery"});
  auto r = fair_report(g);
  EXPECT_FALSE(r.reusable.passed);
  EXPECT_TRUE(has_reason(r.reusable, to_string(w)));
  EXPECT_FALSE(r.interoperable.passed);
  EXPECT_TRUE(has_reason(r.interoperable, "unknown_label"));
  EXPECT_TRUE(r.findable.passed);
}

TEST(Fair, RenderingsCoverEveryCheck) {
  auto r = fair_report(Graph{});
  const std::string text = to_text(r), json = to_json(r);
  for (const auto* c : r.checks()) {
    EXPECT_NE(text.find(c->name), std::string::npos);
    EXPECT_NE(json.find("\"" + c->name + "\""), std::string::npos);
  }
  auto q = score_quality(testkit::fixture_graph());
  EXPECT_NE(to_text(q).find("completeness: 0.5000 (1/2)"), std::string::npos);
  EXPECT_NE(to_json(q).find("\"traceability\""), std::string::npos);
}

}  // namespace
