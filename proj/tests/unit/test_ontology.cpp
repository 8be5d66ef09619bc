#include <gtest/gtest.h>

#include <functional>
#include <random>

#include "lcag/error.hpp"
#include "lcag/ontology.hpp"
#include "test_support.hpp"

using namespace lcag;

namespace {

TEST(Schema, BuiltinFlowTaxonomy) {
  const auto* flow = builtin_schema().find_class("Flow");
  ASSERT_NE(flow, nullptr);
  EXPECT_EQ(flow->enum_constraints.at("kind"),
            (std::set<std::string>{"elementary", "intermediate", "product", "waste"}));
}

TEST(Schema, BuiltinExchangeRelations) {
  for (const char* name : {"HAS_INPUT", "HAS_OUTPUT"}) {
    const auto* rel = builtin_schema().find_relation(name);
    ASSERT_NE(rel, nullptr);
    EXPECT_EQ(rel->domain, std::set<std::string>{"Activity"});
    EXPECT_EQ(rel->range, std::set<std::string>{"Flow"});
    ASSERT_EQ(rel->required_props.size(), 1u);
    EXPECT_EQ(rel->required_props[0], (PropertySpec{"amount", ValueKind::quantity}));
  }
}

TEST(Schema, BuiltinStagesAndBoundary) {
  const auto* activity = builtin_schema().find_class("Activity");
  ASSERT_NE(activity, nullptr);
  EXPECT_EQ(activity->enum_constraints.at("stage"),
            (std::set<std::string>{"production", "transportation", "usage", "disposal"}));
  const auto* workflow = builtin_schema().find_class("Workflow");
  ASSERT_NE(workflow, nullptr);
  ASSERT_NE(workflow->find_property("boundary"), nullptr);
  EXPECT_EQ(workflow->find_property("boundary")->kind, ValueKind::text);
}

TEST(Schema, BuiltinIsClosed) {
  EXPECT_NO_THROW(check_schema(builtin_schema()));
  EXPECT_EQ(builtin_schema().classes.size(), 10u);
  EXPECT_EQ(builtin_schema().relations.size(), 11u);
}

TEST(Schema, FormatParseRoundTrip) {
  EXPECT_EQ(parse_schema(format_schema(builtin_schema())), builtin_schema());
}

TEST(Schema, ParseErrorsCarryLineNumbers) {
  auto line_of = [](const std::string& text) -> std::size_t {
    try {
      parse_schema(text);
    } catch (const FormatError& e) {
      return e.line();
    }
    return 0;
  };
  EXPECT_EQ(line_of("schema s/1\nclass A requires x:text\nclass A\n"), 3u);          // duplicate
  EXPECT_EQ(line_of("schema s/1\nclass A\nrel R A -> Missing\n"), 3u);               // dangling
  EXPECT_EQ(line_of("schema s/1\n\nclass A requires x:float\n"), 3u);                // bad kind
  EXPECT_EQ(line_of("schema s/1\nclass A enum k {a}\n"), 2u);                        // undeclared enum key
  EXPECT_EQ(line_of("schema s/1\nwhatever\n"), 2u);
}

TEST(Schema, ParseSmall) {
  auto s = parse_schema(
      "# demo\nschema demo/2\nclass A requires x:int optional y:quantity, z:text enum z {p,q}\nclass B\n"
      "rel R A|B -> B requires w:real\n");
  EXPECT_EQ(s.version, "demo/2");
  ASSERT_EQ(s.classes.size(), 2u);
  EXPECT_EQ(s.classes[0].required_props[0], (PropertySpec{"x", ValueKind::integer}));
  EXPECT_EQ(s.find_relation("R")->domain, (std::set<std::string>{"A", "B"}));
}

TEST(Validate, FixtureIsClean) {
  EXPECT_TRUE(validate_graph(testkit::fixture_graph(), builtin_schema()).empty());
}

struct Injected {
  std::string name;
  std::function<EntityId(Graph&)> inject;
  ViolationKind kind;
};

TEST(Validate, EachKindDetectedAlone) {
  const Graph base = testkit::fixture_graph();
  const NodeId activity = base.nodes_with_label("Activity").front();
  const NodeId flow = base.nodes_with_label("Flow").front();
  const NodeId workflow = base.nodes_with_label("Workflow").front();
  const std::vector<Injected> cases = {
      {"unknown label", [](Graph& g) -> EntityId { return g.create_node({"Mystery"}); }, ViolationKind::unknown_label},
      {"unknown relation", [&](Graph& g) -> EntityId { return g.create_edge("CITES", workflow, flow); },
       ViolationKind::unknown_relation},
      {"domain", [&](Graph& g) -> EntityId { return g.create_edge("NEXT", flow, activity); },
       ViolationKind::domain_violation},
      {"range", [&](Graph& g) -> EntityId { return g.create_edge("NEXT", activity, flow); },
       ViolationKind::range_violation},
      {"missing", [&](Graph& g) -> EntityId { g.remove_property(flow, "kind"); return flow; },
       ViolationKind::missing_required_property},
      {"enum", [&](Graph& g) -> EntityId { g.set_property(flow, "kind", std::string("gas")); return flow; },
       ViolationKind::bad_enum_value},
      {"kind", [&](Graph& g) -> EntityId { g.set_property(workflow, "boundary", 3.0); return workflow; },
       ViolationKind::bad_value_kind},
  };
  for (const auto& c : cases) {
    Graph g = base;
    EntityId target = c.inject(g);
    auto v = validate_graph(g, builtin_schema());
    ASSERT_EQ(v.size(), 1u) << c.name;
    EXPECT_EQ(v[0].kind, c.kind) << c.name;
    EXPECT_EQ(v[0].target, target) << c.name;
    EXPECT_FALSE(v[0].detail.empty());
  }
}

TEST(Validate, MissingEdgePropertyAndWrongKind) {
  Graph g;
  NodeId a = g.create_node({"Activity"}, {{"name", std::string("a")}});
  NodeId f = g.create_node({"Flow"}, {{"name", std::string("f")}, {"kind", std::string("product")}});
  EdgeId e1 = g.create_edge("HAS_INPUT", a, f);
  EdgeId e2 = g.create_edge("HAS_OUTPUT", a, f, {{"amount", 2.0}});
  auto v = validate_graph(g, builtin_schema());
  ASSERT_EQ(v.size(), 2u);
  EXPECT_EQ(v[0].kind, ViolationKind::missing_required_property);
  EXPECT_EQ(v[0].target, EntityId{e1});
  EXPECT_EQ(v[1].kind, ViolationKind::bad_value_kind);
  EXPECT_EQ(v[1].target, EntityId{e2});
}

TEST(Validate, MultiLabelNodesUseTheUnionOfClasses) {
  Graph g;
  g.create_node({"Agent", "Location"}, {{"name", std::string("lab")}, {"code", std::string("CN")}});
  g.create_node({"Agent", "Extra"}, {{"name", std::string("x")}});
  EXPECT_TRUE(validate_graph(g, builtin_schema()).empty());
}

TEST(Validate, OutputIsSortedAndCitesLiveEntities) {
  std::mt19937_64 rng(9);
  testkit::RandomGraphSpec spec;
  spec.labels = {"Activity", "Flow", "Nope"};
  spec.rel_types = {"HAS_INPUT", "NEXT", "ODD"};
  Graph g = testkit::random_graph(rng, spec);
  auto v = validate_graph(g, builtin_schema());
  EXPECT_TRUE(std::is_sorted(v.begin(), v.end(), [](const Violation& a, const Violation& b) {
    return std::tie(a.target, a.kind, a.detail) < std::tie(b.target, b.kind, b.detail);
  }));
  for (const auto& x : v) EXPECT_TRUE(g.get(x.target).has_value());
}

}  // namespace
