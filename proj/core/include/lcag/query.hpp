#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "lcag/error.hpp"
#include "lcag/graph.hpp"

namespace lcag {

/// A cell of a query result; monostate is null.
using Value = std::variant<std::monostate, std::string, std::int64_t, double, bool, RealArray, Quantity, NodeId, EdgeId>;

Value to_value(const PropertyValue& v);

/// Compares the way `=`/`<` do inside queries: ints and reals numerically,
/// quantities by magnitude when units match, a quantity against a bare number
/// by magnitude. Null or mismatched kinds are unordered (nullopt).
std::optional<std::partial_ordering> compare_values(const Value& a, const Value& b);

/// Total order used for sorting and grouping: null last, then by kind
/// (bool, number, text, quantity, array, node, edge), then by value.
std::strong_ordering order_values(const Value& a, const Value& b);

std::string format_cell(const Value& v);

class QuerySyntaxError : public Error {
 public:
  QuerySyntaxError(std::size_t line, std::size_t column, const std::string& message)
      : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// Well-formed text that is not a valid query: unbound variables, an
/// aggregate inside WHERE, a variable used both as node and edge, ...
class QuerySemanticError : public Error {
 public:
  using Error::Error;
};

/// Raised while evaluating, e.g. SUM over text or over mixed units.
class QueryRuntimeError : public Error {
 public:
  using Error::Error;
};

// AST ------------------------------------------------------------------------

struct NodePattern {
  std::optional<std::string> var;
  std::vector<std::string> labels;
  PropertyMap props;
};

enum class EdgeDirection { right, left, undirected };

struct EdgePattern {
  std::optional<std::string> var;
  std::optional<std::string> rel_type;
  EdgeDirection direction = EdgeDirection::right;
};

/// nodes.size() == edges.size() + 1; edges[i] joins nodes[i] and nodes[i+1].
struct PathPattern {
  std::vector<NodePattern> nodes;
  std::vector<EdgePattern> edges;
};

enum class CompareOp { eq, ne, lt, le, gt, ge };

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  enum class Kind { literal, variable, property, compare, logical_and, logical_or, logical_not };

  Kind kind = Kind::literal;
  Value literal;
  std::string name;  // variable name (variable, property)
  std::string key;   // property key
  CompareOp op = CompareOp::eq;
  std::vector<ExprPtr> args;
};

enum class Aggregate { none, count, sum, avg, min, max };

struct ReturnItem {
  Aggregate aggregate = Aggregate::none;
  ExprPtr expr;  // null only for COUNT(*)
  std::string column;
};

struct OrderKey {
  std::size_t item = 0;  // index into QueryAst::items
  bool descending = false;
};

struct QueryAst {
  std::vector<PathPattern> patterns;
  ExprPtr where;
  bool distinct = false;
  std::vector<ReturnItem> items;
  std::vector<OrderKey> order_by;
  std::optional<std::int64_t> limit;

  bool has_aggregates() const;
};

/// Grammar:
///
///   [MATCH pattern ("," pattern)* [WHERE expr]]
///   RETURN [DISTINCT] item ("," item)* [ORDER BY key [ASC|DESC] ("," ...)*] [LIMIT n]
///
///   pattern: (v:Label:Label {k: literal}) -[e:TYPE]-> (w) <-[:TYPE]- () -[]- ()
///   item:    expr [AS name] | COUNT(*) | COUNT|SUM|AVG|MIN|MAX(expr) [AS name]
///   expr:    OR / AND / NOT, = <> < <= > >=, v.key, v, literals, parentheses
///
/// ORDER BY keys name a return item by alias, by identical expression text or
/// by 1-based position. Keywords are case-insensitive.
QueryAst parse_query(std::string_view text);

// Planning -------------------------------------------------------------------

/// A pattern node after merging every occurrence of the same variable.
struct QueryNode {
  std::optional<std::string> var;
  std::vector<std::string> labels;
  std::vector<std::pair<std::string, PropertyValue>> props;
};

/// Left-pointing edges are stored with src/dst swapped.
struct QueryEdge {
  std::optional<std::string> var;
  std::optional<std::string> rel_type;
  std::size_t src = 0;
  std::size_t dst = 0;
  bool directed = true;
};

struct PlanStep {
  enum class Kind { scan, expand, filter };

  Kind kind = Kind::scan;
  std::size_t node = 0;  // scan: node to bind; expand: node expanded from
  std::size_t edge = 0;  // expand
  /// scan: label index used, if any.
  std::optional<std::string> label;
  /// expand: the far endpoint was already bound, so the step only picks edges.
  bool closes_cycle = false;
  ExprPtr filter;
};

struct GraphStatistics {
  std::map<std::string, std::size_t, std::less<>> label_cardinality;
  std::size_t node_count = 0;

  static GraphStatistics of(const Graph& graph);
  std::size_t cardinality(std::string_view label) const;
};

struct Plan {
  QueryAst ast;
  std::vector<QueryNode> nodes;
  std::vector<QueryEdge> edges;
  std::vector<PlanStep> steps;

  std::string describe() const;
};

/// Seeds at the labeled node with the smallest label cardinality (first in
/// text order on ties; the first node when none is labeled), expands
/// breadth-first along pattern edges, and places each WHERE conjunct right
/// after the step that binds its last variable.
Plan plan_query(const QueryAst& ast, const GraphStatistics& stats);

// Execution ------------------------------------------------------------------

struct ResultTable {
  std::vector<std::string> columns;
  std::vector<std::vector<Value>> rows;

  std::string to_csv() const;
  /// One JSON object per row, keys in column order.
  std::string to_json_lines() const;
};

ResultTable execute_plan(const Plan& plan, const Graph& graph);
ResultTable execute_query(const QueryAst& ast, const Graph& graph);

/// Reference evaluator: binds pattern nodes in text order by full scans, then
/// matches each pattern edge against the full edge list, then applies WHERE.
ResultTable execute_naive(const QueryAst& ast, const Graph& graph);

ResultTable run_query(std::string_view text, const Graph& graph);

}  // namespace lcag
