#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "lcag/graph.hpp"

namespace lcag {

// Unified tables -------------------------------------------------------------
//
// All four tables share `workflow_id`, which is how rows in one table refer
// to entities created by another. Exact CSV headers:
//
//   workflow:  workflow_id,step_index,activity_name,stage,direction,flow_name,
//              flow_kind,amount,unit,unc_kind,unc_a,unc_b
//   metadata:  workflow_id,key,value
//   agent:     workflow_id,agent_id,agent_name,feature_key,feature_value
//   reference: workflow_id,reference_id,author,title,year,doi

enum class TableKind { workflow, metadata, agent, reference };

std::string_view to_string(TableKind kind);
std::optional<TableKind> parse_table_kind(std::string_view name);
std::string_view table_header(TableKind kind);

struct WorkflowRow {
  std::size_t line = 0;
  std::string workflow_id;
  std::int64_t step_index = 0;
  std::string activity_name;
  std::optional<std::string> stage;  // production|transportation|usage|disposal
  bool is_output = false;
  std::string flow_name;
  std::string flow_kind;  // elementary|intermediate|product|waste
  double amount = 0.0;
  std::string unit;
  Uncertainty uncertainty;
};

/// Reserved keys: region, functional_unit_desc, functional_unit_amount,
/// functional_unit_unit, boundary, valid_from, valid_to. Other keys become
/// plain workflow properties.
struct MetadataRow {
  std::size_t line = 0;
  std::string workflow_id;
  std::string key;
  std::string value;
};

struct AgentRow {
  std::size_t line = 0;
  std::string workflow_id;
  std::string agent_id;
  std::string agent_name;
  std::optional<std::string> feature_key;
  std::optional<std::string> feature_value;
};

struct ReferenceRow {
  std::size_t line = 0;
  std::string workflow_id;
  std::string reference_id;
  std::string author;
  std::string title;
  std::optional<std::int64_t> year;
  std::optional<std::string> doi;
};

struct RowError {
  std::string table;
  std::size_t line = 0;
  std::string message;
  bool operator==(const RowError&) const = default;
};

template <typename Row>
struct ParsedRows {
  std::vector<Row> rows;
  std::vector<RowError> errors;
};

/// Each parser returns valid rows in file order and one RowError per
/// invalid row. A wrong header throws FormatError.
ParsedRows<WorkflowRow> parse_workflow_table(std::string_view csv_text);
ParsedRows<MetadataRow> parse_metadata_table(std::string_view csv_text);
ParsedRows<AgentRow> parse_agent_table(std::string_view csv_text);
ParsedRows<ReferenceRow> parse_reference_table(std::string_view csv_text);

using ParsedTable = std::variant<ParsedRows<WorkflowRow>, ParsedRows<MetadataRow>, ParsedRows<AgentRow>,
                                 ParsedRows<ReferenceRow>>;

ParsedTable parse_table(TableKind kind, std::string_view csv_text);

// Statements -----------------------------------------------------------------

/// Selects nodes carrying `label` whose properties include every entry of
/// `props`. For merge_node the props are the identifying key.
struct NodeMatch {
  std::string label;
  PropertyMap props;
  bool operator==(const NodeMatch&) const = default;
};

/// One graph mutation generated from a table row.
///
///   merge_node: match `node` or create it (labels {label}, props key+payload),
///               then write `payload`.
///   merge_edge: for every (src, dst) pair matched by `node` and `target`,
///               reuse the `rel_type` edge between them or create it, then
///               write `payload`. No matching endpoint is a row error.
///   set_prop:   write `payload` on every node matched by `node`; none
///               matched is a row error.
struct Statement {
  enum class Op { merge_node, merge_edge, set_prop };

  Op op = Op::merge_node;
  NodeMatch node;
  std::string rel_type;
  NodeMatch target;
  PropertyMap payload;
  std::string table;
  std::size_t line = 0;

  bool operator==(const Statement&) const = default;
};

/// Cypher-like rendering, e.g.
///   MERGE (n:Workflow {id: "W1"})
///   MATCH (a:Activity {...}), (b:Flow {...}) MERGE (a)-[r:HAS_OUTPUT]->(b) SET r.amount = ...
std::string render_statement(const Statement& statement);

/// Deterministic statements for a parsed table. Rows are ordered by content
/// first, so any permutation of a table yields the same statement list.
std::vector<Statement> build_statements(const ParsedTable& table);
std::vector<Statement> build_workflow_statements(const std::vector<WorkflowRow>& rows);
std::vector<Statement> build_metadata_statements(const std::vector<MetadataRow>& rows);
std::vector<Statement> build_agent_statements(const std::vector<AgentRow>& rows);
std::vector<Statement> build_reference_statements(const std::vector<ReferenceRow>& rows);

struct IngestSummary {
  std::size_t nodes_created = 0;
  std::size_t nodes_matched = 0;
  std::size_t edges_created = 0;
  std::size_t edges_matched = 0;
  /// Property writes that changed the stored value (new keys included).
  std::size_t props_set = 0;
  std::vector<RowError> row_errors;

  IngestSummary& operator+=(const IngestSummary& other);
};

/// Applies all statements inside one graph transaction: either every
/// statement takes effect or, on an exception, none does.
IngestSummary apply_statements(Graph& graph, const std::vector<Statement>& statements);

// Bundles --------------------------------------------------------------------

struct TableOutput {
  std::vector<Statement> statements;
  std::vector<RowError> row_errors;
};

/// Parses one table and builds its statements. Throws FormatError for a
/// table-level problem such as a wrong header.
using TableHandler = std::function<TableOutput(std::string_view csv_text)>;

/// Table kinds known to ingest_bundle, applied in registration order.
class TableRegistry {
 public:
  /// workflow, metadata, agent, reference.
  static TableRegistry builtin();

  void register_kind(std::string name, TableHandler handler);
  const TableHandler* find(std::string_view name) const;
  std::vector<std::string> names() const;

 private:
  std::vector<std::pair<std::string, TableHandler>> kinds_;
};

/// Table name -> CSV text.
using TableBundle = std::map<std::string, std::string, std::less<>>;

/// Parses every table first (any FormatError aborts before the graph is
/// touched), then applies all statements atomically in registry order.
IngestSummary ingest_bundle(Graph& graph, const TableBundle& bundle,
                            const TableRegistry& registry = TableRegistry::builtin());

}  // namespace lcag
