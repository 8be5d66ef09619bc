#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>
#include <sstream>

#include "lcag/error.hpp"
#include "lcag/ingest.hpp"
#include "lcag/ontology.hpp"
#include "lcag/snapshot.hpp"
#include "test_support.hpp"

using namespace lcag;

namespace {

const std::string kWorkflowHeader =
    "workflow_id,step_index,activity_name,stage,direction,flow_name,flow_kind,amount,unit,unc_kind,unc_a,unc_b\n";

std::string shuffle_rows(const std::string& csv, std::mt19937_64& rng) {
  std::istringstream in(csv);
  std::string header, line;
  std::getline(in, header);
  std::vector<std::string> rows;
  while (std::getline(in, line)) {
    if (!line.empty()) rows.push_back(line);
  }
  std::shuffle(rows.begin(), rows.end(), rng);
  std::string out = header + "\n";
  for (const auto& r : rows) out += r + "\n";
  return out;
}

TEST(Tables, WrongHeaderIsAFormatError) {
  EXPECT_THROW(parse_workflow_table("workflow_id,step\nW1,0\n"), FormatError);
  EXPECT_THROW(parse_metadata_table(""), FormatError);
  EXPECT_NO_THROW(parse_reference_table(std::string(table_header(TableKind::reference)) + "\n"));
}

TEST(Tables, RowErrorsKeepGoodRows) {
  auto parsed = parse_workflow_table(kWorkflowHeader +
                                     "W1,0,mix,production,input,water,elementary,1,kg,,,\n"
                                     "W1,0,mix,production,input,water,elementary,1,kg,,,\n"
                                     "W1,x,mix,production,input,salt,elementary,1,kg,,,\n"
                                     "W1,1,cook,cooking,output,soup,product,1,kg,,,\n"
                                     "W1,1,cook,usage,output,soup,product,NaN,kg,,,\n"
                                     "W1,1,cook,usage,output,soup,product,1,kg,uniform,2,1\n"
                                     "W1,2,serve,,output,soup,product,1,kg,,,\n");
  ASSERT_EQ(parsed.rows.size(), 2u);
  EXPECT_EQ(parsed.rows[1].line, 8u);
  EXPECT_FALSE(parsed.rows[1].stage.has_value());
  std::vector<std::size_t> lines;
  for (const auto& e : parsed.errors) {
    lines.push_back(e.line);
    EXPECT_EQ(e.table, "workflow");
  }
  EXPECT_EQ(lines, (std::vector<std::size_t>{3, 4, 5, 6, 7}));
}

TEST(Tables, UncertaintyColumns) {
  auto parsed = parse_workflow_table(kWorkflowHeader +
                                     "W1,0,mix,production,input,water,elementary,1,kg,normal,1,0.1\n"
                                     "W1,0,mix,production,input,salt,elementary,1,kg,,2,\n");
  ASSERT_EQ(parsed.rows.size(), 1u);
  EXPECT_EQ(parsed.rows[0].uncertainty, Uncertainty::normal(1.0, 0.1));
  ASSERT_EQ(parsed.errors.size(), 1u);
}

TEST(Tables, MetadataIdKeyIsRejected) {
  auto parsed = parse_metadata_table("workflow_id,key,value\nW1,id,W2\nW1,title,x\n");
  ASSERT_EQ(parsed.errors.size(), 1u);
  EXPECT_EQ(parsed.errors[0].line, 2u);
  ASSERT_EQ(parsed.rows.size(), 1u);
}

TEST(Tables, KindNamesRoundTrip) {
  for (TableKind k : {TableKind::workflow, TableKind::metadata, TableKind::agent, TableKind::reference}) {
    EXPECT_EQ(parse_table_kind(to_string(k)), k);
  }
  EXPECT_FALSE(parse_table_kind("lci").has_value());
}

TEST(Statements, OneNextPerConsecutiveStepPair) {
  auto parsed = parse_workflow_table(kWorkflowHeader +
                                     "W1,0,mix,production,input,water,elementary,1,kg,,,\n"
                                     "W1,0,mix,production,output,dough,intermediate,1,kg,,,\n"
                                     "W1,1,bake,production,input,dough,intermediate,1,kg,,,\n"
                                     "W1,1,bake,production,output,bread,product,1,kg,,,\n");
  auto statements = build_workflow_statements(parsed.rows);
  std::size_t next = 0;
  for (const auto& s : statements) {
    if (s.op == Statement::Op::merge_edge && s.rel_type == "NEXT") ++next;
  }
  EXPECT_EQ(next, 1u);

  Graph g;
  apply_statements(g, statements);
  auto mix = g.nodes_with_label("Activity");
  ASSERT_EQ(mix.size(), 2u);
  EXPECT_EQ(g.neighbors(mix[0], Direction::out, "NEXT").size() + g.neighbors(mix[1], Direction::out, "NEXT").size(), 1u);
}

TEST(Statements, RenderIsCypherLike) {
  auto s = build_metadata_statements(parse_metadata_table("workflow_id,key,value\nW1,region,CA-BC\n").rows);
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(render_statement(s[0]).rfind("MERGE (n:Location", 0), 0u);
  EXPECT_NE(render_statement(s[1]).find("LOCATED_IN"), std::string::npos);
}

TEST(Ingest, FixtureBuildsTwoConformingWorkflows) {
  Graph g = testkit::fixture_graph();
  EXPECT_EQ(g.nodes_with_label("Workflow").size(), 2u);
  EXPECT_EQ(g.nodes_with_label("Activity").size(), 11u);
  EXPECT_TRUE(validate_graph(g, builtin_schema()).empty());
}

TEST(Ingest, NodesCreatedEqualsDistinctKeys) {
  const auto bundle = testkit::fixture_bundle();
  auto rows = parse_workflow_table(bundle.at("workflow")).rows;
  std::set<std::string> workflows, flows;
  std::set<std::tuple<std::string, std::int64_t, std::string>> activities;
  for (const auto& r : rows) {
    workflows.insert(r.workflow_id);
    flows.insert(r.flow_name + "\n" + r.flow_kind);
    activities.emplace(r.workflow_id, r.step_index, r.activity_name);
  }
  Graph g;
  auto summary = apply_statements(g, build_workflow_statements(rows));
  EXPECT_EQ(summary.nodes_created, workflows.size() + flows.size() + activities.size());
  EXPECT_TRUE(summary.row_errors.empty());
}

TEST(Ingest, SecondRunChangesNothing) {
  Graph g;
  auto first = ingest_bundle(g, testkit::fixture_bundle());
  EXPECT_GT(first.nodes_created, 0u);
  const std::string dump = write_snapshot(g);
  auto second = ingest_bundle(g, testkit::fixture_bundle());
  EXPECT_EQ(second.nodes_created, 0u);
  EXPECT_EQ(second.edges_created, 0u);
  EXPECT_EQ(second.props_set, 0u);
  EXPECT_EQ(second.nodes_matched, first.nodes_created + first.nodes_matched);
  EXPECT_EQ(write_snapshot(g), dump);
}

TEST(IngestProperty, RowOrderDoesNotMatter) {
  const auto bundle = testkit::fixture_bundle();
  Graph reference;
  ingest_bundle(reference, bundle);
  const std::string dump = write_snapshot(reference);
  std::mt19937_64 rng(3);
  for (int i = 0; i < 10; ++i) {
    TableBundle shuffled;
    for (const auto& [name, text] : bundle) shuffled[name] = shuffle_rows(text, rng);
    Graph g;
    ingest_bundle(g, shuffled);
    ASSERT_EQ(write_snapshot(g), dump) << "permutation " << i;
  }
}

TEST(Ingest, DanglingWorkflowReferenceIsARowError) {
  Graph g;
  ingest_bundle(g, testkit::fixture_bundle());
  const Graph before = g;
  auto summary = ingest_bundle(g, {{"reference", "workflow_id,reference_id,author,title,year,doi\n"
                                                 "W9,R9,\"Doe, J.\",Nothing,2020,\n"}});
  ASSERT_EQ(summary.row_errors.size(), 1u);
  EXPECT_EQ(summary.row_errors[0].table, "reference");
  EXPECT_EQ(summary.row_errors[0].line, 2u);
  // The reference node itself is still merged.
  EXPECT_EQ(g.nodes_with_label("Reference").size(), before.nodes_with_label("Reference").size() + 1);
}

TEST(Ingest, BadTableAbortsWholeBundle) {
  Graph g;
  auto bundle = testkit::fixture_bundle();
  bundle["agent"] = "nope\n";
  EXPECT_THROW(ingest_bundle(g, bundle), FormatError);
  EXPECT_EQ(g.node_count(), 0u);
  bundle = testkit::fixture_bundle();
  bundle["lci"] = "a,b\n";
  EXPECT_THROW(ingest_bundle(g, bundle), FormatError);
  EXPECT_EQ(g.node_count(), 0u);
}

TEST(Ingest, HandlerExceptionRollsBack) {
  Graph g;
  g.create_node({"Keep"});
  const Graph before = g;
  TableRegistry registry = TableRegistry::builtin();
  registry.register_kind("poison", [](std::string_view) {
    TableOutput out;
    Statement s;
    s.op = Statement::Op::merge_node;
    s.node = {"Bad", {{"x", std::numeric_limits<double>::quiet_NaN()}}};
    s.table = "poison";
    out.statements.push_back(s);
    return out;
  });
  auto bundle = testkit::fixture_bundle();
  bundle["poison"] = "";
  EXPECT_ANY_THROW(ingest_bundle(g, bundle, registry));
  EXPECT_EQ(g, before);
}

TEST(Registry, ExtraTableKind) {
  TableRegistry registry = TableRegistry::builtin();
  EXPECT_EQ(registry.names(), (std::vector<std::string>{"workflow", "metadata", "agent", "reference"}));
  registry.register_kind("impact", [](std::string_view text) {
    TableOutput out;
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t n = 0;
    while (std::getline(in, line)) {
      if (++n == 1 || line.empty()) continue;
      Statement s;
      s.op = Statement::Op::merge_node;
      s.node = {"ImpactCategory", {{"name", line}}};
      s.table = "impact";
      s.line = n;
      out.statements.push_back(std::move(s));
    }
    return out;
  });
  EXPECT_THROW(registry.register_kind("impact", {}), Error);
  EXPECT_NE(registry.find("impact"), nullptr);

  auto bundle = testkit::fixture_bundle();
  bundle["impact"] = "name\nclimate change\nacidification\n";
  Graph g;
  auto summary = ingest_bundle(g, bundle, registry);
  EXPECT_EQ(g.nodes_with_label("ImpactCategory").size(), 2u);
  EXPECT_TRUE(summary.row_errors.empty());
  EXPECT_TRUE(validate_graph(g, builtin_schema()).empty());
}

}  // namespace
