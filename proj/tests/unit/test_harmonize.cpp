#include <gtest/gtest.h>

#include "lcag/error.hpp"
#include "lcag/harmonize.hpp"
#include "test_support.hpp"

using namespace lcag;

namespace {

std::size_t error_line(const std::string& csv) {
  try {
    parse_mappings(csv);
  } catch (const FormatError& e) {
    return e.line();
  }
  return 0;
}

const std::string kHeader = "source_ontology,source_term,kind,canonical_term,direction\n";

TEST(Mappings, BuiltinLookups) {
  const auto& t = builtin_mappings();
  const auto* inflow = t.lookup("Zhang2015", "hasInflow", TermKind::relation);
  ASSERT_NE(inflow, nullptr);
  EXPECT_EQ(inflow->canonical_term, "HAS_INPUT");
  EXPECT_EQ(inflow->direction, MappingDirection::forward);
  const auto* input_of = t.lookup("LciO", "Input_Of", TermKind::relation);
  ASSERT_NE(input_of, nullptr);
  EXPECT_EQ(input_of->canonical_term, "HAS_INPUT");
  EXPECT_EQ(input_of->direction, MappingDirection::reverse);
  EXPECT_EQ(t.lookup("LciO", "hasInflow", TermKind::relation), nullptr);
  EXPECT_EQ(t.lookup("Zhang2015", "hasInflow", TermKind::class_term), nullptr);
  EXPECT_TRUE(t.ontologies().contains("Wang2022"));
  EXPECT_TRUE(t.ontologies().contains("Saad2023"));
}

TEST(Mappings, BuiltinIsConflictFree) {
  for (const auto& c : detect_conflicts(builtin_mappings())) ADD_FAILURE() << c.detail;
}

TEST(Mappings, FormatParseRoundTrip) {
  EXPECT_EQ(parse_mappings(format_mappings(builtin_mappings())), builtin_mappings());
}

TEST(Mappings, ParseDefaultsRelationsToForward) {
  auto t = parse_mappings(kHeader + "X,p,relation,NEXT,\nX,A,class,Activity,\n");
  ASSERT_EQ(t.entries.size(), 2u);
  EXPECT_EQ(t.entries[0].direction, MappingDirection::forward);
  EXPECT_EQ(t.entries[1].kind, TermKind::class_term);
}

TEST(Mappings, ParseErrorsCarryLineNumbers) {
  EXPECT_EQ(error_line("a,b,c\n"), 1u);
  EXPECT_EQ(error_line(kHeader + "X,A,class,Activity,\nX,A,class,Flow,\n"), 3u);
  EXPECT_EQ(error_line(kHeader + "X,A,class,Activity,reverse\n"), 2u);
  EXPECT_EQ(error_line(kHeader + "X,A,class,Activity,forward\n"), 2u);
  EXPECT_EQ(error_line(kHeader + "X,r,relation,NEXT,sideways\n"), 2u);
  EXPECT_EQ(error_line(kHeader + "X,A,thing,Activity,\n"), 2u);
  EXPECT_EQ(error_line(kHeader + "\nX,A,class\n"), 3u);
  EXPECT_EQ(error_line(kHeader + "X,,class,Activity,\n"), 2u);
  // Same term under different kinds is fine.
  EXPECT_EQ(error_line(kHeader + "X,a,class,Activity,\nX,a,property,name,\n"), 0u);
}

TEST(Conflicts, EachKindReported) {
  MappingTable t;
  t.entries = {
      {"X", "Proc", TermKind::class_term, "Activity", MappingDirection::forward},
      {"X", "Proc", TermKind::class_term, "Activity", MappingDirection::forward},
      {"Y", "in", TermKind::relation, "HAS_INPUT", MappingDirection::forward},
      {"Z", "in", TermKind::relation, "HAS_INPUT", MappingDirection::reverse},
      {"Y", "bogus", TermKind::relation, "NOT_A_REL", MappingDirection::forward},
  };
  std::multiset<Conflict::Kind> kinds;
  for (const auto& c : detect_conflicts(t)) {
    kinds.insert(c.kind);
    EXPECT_FALSE(c.detail.empty());
    EXPECT_FALSE(c.entries.empty());
  }
  EXPECT_EQ(kinds, (std::multiset<Conflict::Kind>{Conflict::Kind::duplicate_source_term,
                                                  Conflict::Kind::divergent_targets,
                                                  Conflict::Kind::unknown_canonical_term}));
}

TEST(Conflicts, SameTargetAcrossOntologiesIsNotDivergent) {
  MappingTable t;
  t.entries = {
      {"X", "Process", TermKind::class_term, "Activity", MappingDirection::forward},
      {"Y", "Process", TermKind::class_term, "Activity", MappingDirection::forward},
  };
  EXPECT_TRUE(detect_conflicts(t).empty());
}

TEST(Translate, ReversesLciOEdgesAndKeepsIds) {
  Graph g;
  NodeId a = g.create_node({"Activity"}, {{"name", std::string("a")}});
  NodeId f = g.create_node({"Flow"}, {{"name", std::string("f")}, {"kind", std::string("product")}});
  EdgeId e = g.create_edge("Input_Of", f, a, {{"amount", Quantity{2.0, "kg", {}}}});
  auto r = translate_graph(g, builtin_mappings(), builtin_schema(), "LciO");
  auto out = r.graph.edge(e);
  ASSERT_TRUE(out);
  EXPECT_EQ(out->rel_type(), "HAS_INPUT");
  EXPECT_EQ(out->src(), a);
  EXPECT_EQ(out->dst(), f);
  EXPECT_EQ(out->props(), g.edge(e)->props());
  EXPECT_EQ(r.report.edges_reversed, 1u);
  EXPECT_EQ(r.report.relations_rewritten, 1u);
  EXPECT_TRUE(r.report.untranslated.empty());
  EXPECT_TRUE(validate_graph(r.graph, builtin_schema()).empty());
}

TEST(Translate, UnmappedTermsPassThroughAndAreReported) {
  Graph g;
  NodeId a = g.create_node({"Process", "Gadget"}, {{"name", std::string("a")}, {"colour", std::string("red")}});
  g.create_edge("Has_values", a, a);
  auto r = translate_graph(g, builtin_mappings(), builtin_schema(), "Zhang2015");
  EXPECT_EQ(r.report.untranslated, (std::set<std::string>{"label:Gadget", "prop:colour", "rel:Has_values"}));
  EXPECT_TRUE(r.graph.node(a)->has_label("Activity"));
  EXPECT_TRUE(r.graph.node(a)->has_label("Gadget"));
  EXPECT_EQ(r.graph.nodes_with_label("Process").size(), 0u);
}

TEST(Translate, OntologyFilterIgnoresOtherEntries) {
  Graph g;
  NodeId a = g.create_node({"UnitProcess"});
  auto r = translate_graph(g, builtin_mappings(), builtin_schema(), "Zhang2015");
  EXPECT_TRUE(r.graph.node(a)->has_label("UnitProcess"));
  auto all = translate_graph(g, builtin_mappings());
  EXPECT_TRUE(all.graph.node(a)->has_label("Activity"));
}

TEST(Translate, UnknownCanonicalTermThrows) {
  MappingTable t;
  t.entries = {{"X", "p", TermKind::relation, "NOT_A_REL", MappingDirection::forward}};
  Graph g;
  EXPECT_THROW(translate_graph(g, t), MappingError);
}

TEST(Translate, DivergentTermInUseThrows) {
  MappingTable t;
  t.entries = {
      {"X", "in", TermKind::relation, "HAS_INPUT", MappingDirection::forward},
      {"Y", "in", TermKind::relation, "HAS_INPUT", MappingDirection::reverse},
  };
  Graph g;
  NodeId a = g.create_node({"Activity"});
  g.create_edge("in", a, a);
  EXPECT_THROW(translate_graph(g, t), MappingError);
  EXPECT_NO_THROW(translate_graph(g, t, builtin_schema(), "X"));
}

TEST(Translate, ExistingCanonicalPropertyWins) {
  Graph g;
  NodeId w = g.create_node({"Workflow"}, {{"boundary", std::string("gate")}, {"hasBoundary", std::string("grave")}});
  auto r = translate_graph(g, builtin_mappings(), builtin_schema(), "Zhang2015");
  EXPECT_EQ(std::get<std::string>(*r.graph.node(w)->property("boundary")), "gate");
  EXPECT_EQ(r.graph.node(w)->property("hasBoundary"), nullptr);
  EXPECT_EQ(r.report.collisions.size(), 1u);
}

// Property: two vocabularies describing the same inventory translate to the
// same graph.
TEST(TranslateProperty, ZhangAndWangConverge) {
  Graph zhang, wang;
  for (Graph* g : {&zhang, &wang}) {
    const bool z = g == &zhang;
    NodeId w = g->create_node({"Workflow"}, {{"id", std::string("W1")},
                                             {z ? "hasBoundary" : "boundary", std::string("cradle-to-gate")}});
    NodeId a = g->create_node({"Process"}, {{"name", std::string("fermentation")}});
    NodeId in = g->create_node({"Flow"}, {{"name", std::string("glucose")}, {"kind", std::string("intermediate")}});
    NodeId out = g->create_node({"Flow"}, {{"name", std::string("ethanol")}, {"kind", std::string("product")}});
    g->create_edge("HAS_STEP", w, a);
    g->create_edge(z ? "hasInflow" : "hasInputFlow", a, in, {{"amount", Quantity{2.0, "kg", {}}}});
    g->create_edge(z ? "hasOutflow" : "hasOutputFlow", a, out, {{"amount", Quantity{1.0, "kg", {}}}});
  }
  ASSERT_NE(testkit::structural_signature(zhang), testkit::structural_signature(wang));
  auto tz = translate_graph(zhang, builtin_mappings());
  auto tw = translate_graph(wang, builtin_mappings());
  EXPECT_EQ(testkit::structural_signature(tz.graph), testkit::structural_signature(tw.graph));
  EXPECT_TRUE(tz.report.untranslated.empty());
  EXPECT_TRUE(tw.report.untranslated.empty());
}

TEST(TranslateProperty, CanonicalGraphIsAFixedPoint) {
  const Graph g = testkit::fixture_graph();
  auto r = translate_graph(g, builtin_mappings());
  EXPECT_EQ(r.graph, g);
  EXPECT_EQ(r.report.labels_rewritten + r.report.relations_rewritten + r.report.properties_rewritten, 0u);
}

}  // namespace
