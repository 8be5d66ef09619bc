#pragma once

#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "lcag/graph.hpp"
#include "lcag/query.hpp"

// Brute-force reference for the query engine. Nothing here goes through the
// library's parser, planner or evaluator: each query template carries its own
// hand-written semantics over an all-bindings enumeration.
namespace lcag::testkit {

struct OracleNode {
  std::optional<std::string> label;
  std::optional<std::pair<std::string, Value>> equals;
};

struct OracleEdge {
  std::size_t src = 0;
  std::size_t dst = 0;
  std::optional<std::string> rel;
  bool directed = true;
};

struct Binding {
  std::vector<NodeId> nodes;
  std::vector<EdgeId> edges;
};

/// Every assignment of graph nodes to pattern nodes and pairwise distinct
/// graph edges to pattern edges that satisfies labels, inline equalities,
/// types and endpoints.
void for_each_binding(const Graph& graph, const std::vector<OracleNode>& nodes, const std::vector<OracleEdge>& edges,
                      const std::function<void(const Binding&)>& fn);

Value prop_of(const Graph& graph, NodeId id, const std::string& key);
Value prop_of(const Graph& graph, EdgeId id, const std::string& key);

/// Two-valued comparisons: false whenever a side is null or the kinds differ.
bool oracle_eq(const Value& a, const Value& b);
bool oracle_lt(const Value& a, const Value& b);

/// Total order used for sorting: booleans, numbers, text, quantities,
/// arrays, nodes, edges, then null.
int oracle_cmp(const Value& a, const Value& b);
bool row_less(const std::vector<Value>& a, const std::vector<Value>& b);

struct OracleResult {
  bool runtime_error = false;
  bool ordered = false;
  std::vector<std::vector<Value>> rows;
};

struct QueryCase {
  std::string shape;
  std::string text;
  std::function<OracleResult(const Graph&)> expected;
};

/// Int/text properties p0..p2, an int `w` on about half the nodes, and
/// int/text edge properties q0..q1; labels A/B/C, types R/S.
Graph random_query_graph(std::mt19937_64& rng, std::size_t max_nodes = 50, std::size_t max_edges = 120);

/// One instance of each query shape with freshly drawn labels, types, keys
/// and constants.
std::vector<QueryCase> query_cases(std::mt19937_64& rng);

/// Exact comparison (multiset, or sequence for ordered results). On
/// mismatch returns a description.
std::optional<std::string> compare_result(const OracleResult& expected, const ResultTable& actual);

}  // namespace lcag::testkit
