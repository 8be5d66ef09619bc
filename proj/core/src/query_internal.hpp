#pragma once

#include <string>
#include <vector>

#include "lcag/query.hpp"

namespace lcag::query {

std::string render_expr(const Expr& e);
void collect_variables(const Expr& e, std::vector<std::string>& out);

/// Top-level AND operands, left to right.
std::vector<ExprPtr> split_conjuncts(const ExprPtr& e);

struct QueryGraph {
  std::vector<QueryNode> nodes;
  std::vector<QueryEdge> edges;
};

/// Merges repeated node variables and normalizes edge directions.
QueryGraph compile_patterns(const QueryAst& ast);

}  // namespace lcag::query
