#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>

#include "lcag/query.hpp"
#include "query_internal.hpp"

namespace lcag {

namespace {

constexpr std::uint64_t kUnbound = std::numeric_limits<std::uint64_t>::max();

struct Binding {
  std::vector<std::uint64_t> nodes;
  std::vector<std::uint64_t> edges;
};

struct VarSlot {
  bool is_edge = false;
  std::size_t index = 0;
};

std::string describe_value(const Value& v) {
  static constexpr std::string_view kNames[] = {"null", "text", "int", "real", "bool", "realarray", "quantity",
                                                "node", "edge"};
  std::string out(kNames[v.index()]);
  if (!std::holds_alternative<std::monostate>(v)) out += " " + format_cell(v);
  return out;
}

bool apply_compare(CompareOp op, const Value& a, const Value& b) {
  auto c = compare_values(a, b);
  if (!c || *c == std::partial_ordering::unordered) return false;
  switch (op) {
    case CompareOp::eq:
      return *c == 0;
    case CompareOp::ne:
      return *c != 0;
    case CompareOp::lt:
      return *c < 0;
    case CompareOp::le:
      return *c <= 0;
    case CompareOp::gt:
      return *c > 0;
    case CompareOp::ge:
      return *c >= 0;
  }
  return false;
}

/// Truth of a predicate value: null is false, non-booleans are an error.
bool truth(const Value& v, std::string_view where) {
  if (std::holds_alternative<std::monostate>(v)) return false;
  if (const auto* b = std::get_if<bool>(&v)) return *b;
  throw QueryRuntimeError(std::string(where) + " expects a boolean, got " + describe_value(v));
}

/// Pattern structure plus variable lookup shared by both evaluators.
class Context {
 public:
  Context(const Graph& graph, std::vector<QueryNode> nodes, std::vector<QueryEdge> edges)
      : graph(graph), nodes(std::move(nodes)), edges(std::move(edges)) {
    for (std::size_t i = 0; i < this->nodes.size(); ++i) {
      if (this->nodes[i].var) vars_[*this->nodes[i].var] = {false, i};
    }
    for (std::size_t i = 0; i < this->edges.size(); ++i) {
      if (this->edges[i].var) vars_[*this->edges[i].var] = {true, i};
    }
  }

  Binding empty_binding() const {
    return {std::vector<std::uint64_t>(nodes.size(), kUnbound), std::vector<std::uint64_t>(edges.size(), kUnbound)};
  }

  bool node_matches(std::size_t q, NodeId id) const {
    auto view = graph.node(id);
    if (!view) return false;
    for (const auto& l : nodes[q].labels) {
      if (!view->has_label(l)) return false;
    }
    for (const auto& [key, wanted] : nodes[q].props) {
      const PropertyValue* have = view->property(key);
      if (have == nullptr || !apply_compare(CompareOp::eq, to_value(*have), to_value(wanted))) return false;
    }
    return true;
  }

  static bool edge_used(const Binding& b, std::uint64_t edge) {
    return std::find(b.edges.begin(), b.edges.end(), edge) != b.edges.end();
  }

  Value eval(const Expr& e, const Binding& b) const {
    switch (e.kind) {
      case Expr::Kind::literal:
        return e.literal;
      case Expr::Kind::variable: {
        const VarSlot& s = vars_.at(e.name);
        if (s.is_edge) return EdgeId{b.edges[s.index]};
        return NodeId{b.nodes[s.index]};
      }
      case Expr::Kind::property: {
        const VarSlot& s = vars_.at(e.name);
        const PropertyValue* p = s.is_edge ? graph.edge(EdgeId{b.edges[s.index]})->property(e.key)
                                           : graph.node(NodeId{b.nodes[s.index]})->property(e.key);
        return p == nullptr ? Value{} : to_value(*p);
      }
      case Expr::Kind::compare:
        return apply_compare(e.op, eval(*e.args[0], b), eval(*e.args[1], b));
      case Expr::Kind::logical_and: {
        bool l = truth(eval(*e.args[0], b), "AND");
        bool r = truth(eval(*e.args[1], b), "AND");
        return l && r;
      }
      case Expr::Kind::logical_or: {
        bool l = truth(eval(*e.args[0], b), "OR");
        bool r = truth(eval(*e.args[1], b), "OR");
        return l || r;
      }
      case Expr::Kind::logical_not:
        return !truth(eval(*e.args[0], b), "NOT");
    }
    return {};
  }

  const Graph& graph;
  std::vector<QueryNode> nodes;
  std::vector<QueryEdge> edges;

 private:
  std::map<std::string, VarSlot, std::less<>> vars_;
};

// Projection ------------------------------------------------------------------

struct RowLess {
  bool operator()(const std::vector<Value>& a, const std::vector<Value>& b) const {
    for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) {
      if (auto c = order_values(a[i], b[i]); c != 0) return c < 0;
    }
    return a.size() < b.size();
  }
};

bool value_less(const Value& a, const Value& b) { return order_values(a, b) < 0; }

/// Values feeding SUM/AVG: all numbers, or all quantities in one unit.
struct NumericFold {
  bool any_real = false;
  std::optional<std::string> unit;
  std::vector<Value> values;  // sorted, non-null
};

NumericFold classify(std::string_view agg, std::vector<Value> values) {
  NumericFold f;
  bool any_quantity = false;
  bool any_number = false;
  for (const auto& v : values) {
    if (const auto* q = std::get_if<Quantity>(&v)) {
      if (f.unit && *f.unit != q->unit) {
        throw QueryRuntimeError(std::string(agg) + " over mixed units: " + *f.unit + " and " + q->unit);
      }
      f.unit = q->unit;
      any_quantity = true;
    } else if (std::holds_alternative<std::int64_t>(v)) {
      any_number = true;
    } else if (std::holds_alternative<double>(v)) {
      any_number = true;
      f.any_real = true;
    } else {
      throw QueryRuntimeError(std::string(agg) + " expects numbers or quantities, got " + describe_value(v));
    }
    if (any_quantity && any_number) {
      throw QueryRuntimeError(std::string(agg) + " mixes quantities and plain numbers at " + describe_value(v));
    }
  }
  // Sorting first makes the floating-point fold independent of match order.
  std::sort(values.begin(), values.end(), value_less);
  f.values = std::move(values);
  return f;
}

double magnitude(const Value& v) {
  if (const auto* q = std::get_if<Quantity>(&v)) return q->magnitude;
  if (const auto* i = std::get_if<std::int64_t>(&v)) return static_cast<double>(*i);
  return std::get<double>(v);
}

Value finite_or_error(double x, std::string_view agg) {
  if (!std::isfinite(x)) throw QueryRuntimeError(std::string(agg) + " overflowed");
  return x;
}

Value fold_sum(std::vector<Value> values) {
  NumericFold f = classify("SUM", std::move(values));
  if (f.unit) {
    double total = 0.0;
    for (const auto& v : f.values) total += magnitude(v);
    if (!std::isfinite(total)) throw QueryRuntimeError("SUM overflowed");
    return Quantity{total, *f.unit, {}};
  }
  if (f.any_real) {
    double total = 0.0;
    for (const auto& v : f.values) total += magnitude(v);
    return finite_or_error(total, "SUM");
  }
  std::int64_t total = 0;
  for (const auto& v : f.values) {
    if (__builtin_add_overflow(total, std::get<std::int64_t>(v), &total)) {
      throw QueryRuntimeError("SUM overflowed 64-bit integers");
    }
  }
  return total;
}

Value fold_avg(std::vector<Value> values) {
  NumericFold f = classify("AVG", std::move(values));
  if (f.values.empty()) return {};
  double total = 0.0;
  for (const auto& v : f.values) total += magnitude(v);
  double mean = total / static_cast<double>(f.values.size());
  if (!std::isfinite(mean)) throw QueryRuntimeError("AVG overflowed");
  if (f.unit) return Quantity{mean, *f.unit, {}};
  return mean;
}

Value fold_extreme(std::string_view agg, const std::vector<Value>& values, bool want_max) {
  if (values.empty()) return {};
  const Value* best = &values.front();
  for (const auto& v : values) {
    auto c = compare_values(v, *best);
    if (!c || *c == std::partial_ordering::unordered) {
      throw QueryRuntimeError(std::string(agg) + " over incomparable values " + describe_value(*best) + " and " +
                              describe_value(v));
    }
    bool better = want_max ? *c > 0 : *c < 0;
    bool tie_break = *c == 0 && order_values(v, *best) < 0;
    if (better || tie_break) best = &v;
  }
  return *best;
}

class Projector {
 public:
  Projector(const QueryAst& ast, const Context& ctx) : ast_(ast), ctx_(ctx), aggregating_(ast.has_aggregates()) {}

  void add(const Binding& b) {
    if (!aggregating_) {
      std::vector<Value> row;
      row.reserve(ast_.items.size());
      for (const auto& item : ast_.items) row.push_back(ctx_.eval(*item.expr, b));
      rows_.push_back(std::move(row));
      return;
    }
    std::vector<Value> key;
    for (const auto& item : ast_.items) {
      if (item.aggregate == Aggregate::none) key.push_back(ctx_.eval(*item.expr, b));
    }
    auto [it, inserted] = group_index_.try_emplace(key, groups_.size());
    if (inserted) groups_.push_back(Group{key, std::vector<std::vector<Value>>(ast_.items.size()), 0});
    Group& g = groups_[it->second];
    ++g.rows;
    for (std::size_t i = 0; i < ast_.items.size(); ++i) {
      const auto& item = ast_.items[i];
      if (item.aggregate == Aggregate::none || !item.expr) continue;
      Value v = ctx_.eval(*item.expr, b);
      if (!std::holds_alternative<std::monostate>(v)) g.inputs[i].push_back(std::move(v));
    }
  }

  ResultTable finish() {
    ResultTable table;
    for (const auto& item : ast_.items) table.columns.push_back(item.column);

    if (aggregating_) {
      const bool grouped = std::any_of(ast_.items.begin(), ast_.items.end(),
                                       [](const ReturnItem& i) { return i.aggregate == Aggregate::none; });
      if (groups_.empty() && !grouped) groups_.push_back(Group{{}, std::vector<std::vector<Value>>(ast_.items.size()), 0});
      for (auto& g : groups_) rows_.push_back(aggregate_row(g));
    }

    if (ast_.distinct) {
      std::set<std::vector<Value>, RowLess> seen;
      std::vector<std::vector<Value>> unique;
      for (auto& r : rows_) {
        if (seen.insert(r).second) unique.push_back(std::move(r));
      }
      rows_ = std::move(unique);
    }

    if (!ast_.order_by.empty()) {
      std::stable_sort(rows_.begin(), rows_.end(), [&](const auto& a, const auto& b) {
        for (const auto& key : ast_.order_by) {
          const Value& x = a[key.item];
          const Value& y = b[key.item];
          bool xn = std::holds_alternative<std::monostate>(x);
          bool yn = std::holds_alternative<std::monostate>(y);
          if (xn != yn) return yn;
          if (xn) continue;
          auto c = order_values(x, y);
          if (c != 0) return key.descending ? c > 0 : c < 0;
        }
        return RowLess{}(a, b);
      });
    }

    if (ast_.limit && static_cast<std::uint64_t>(*ast_.limit) < rows_.size()) {
      rows_.resize(static_cast<std::size_t>(*ast_.limit));
    }
    table.rows = std::move(rows_);
    return table;
  }

 private:
  struct Group {
    std::vector<Value> key;
    std::vector<std::vector<Value>> inputs;
    std::size_t rows = 0;
  };

  std::vector<Value> aggregate_row(Group& g) const {
    std::vector<Value> row;
    std::size_t k = 0;
    for (std::size_t i = 0; i < ast_.items.size(); ++i) {
      const auto& item = ast_.items[i];
      switch (item.aggregate) {
        case Aggregate::none:
          row.push_back(g.key[k++]);
          break;
        case Aggregate::count:
          row.push_back(static_cast<std::int64_t>(item.expr ? g.inputs[i].size() : g.rows));
          break;
        case Aggregate::sum:
          row.push_back(fold_sum(std::move(g.inputs[i])));
          break;
        case Aggregate::avg:
          row.push_back(fold_avg(std::move(g.inputs[i])));
          break;
        case Aggregate::min:
          row.push_back(fold_extreme("MIN", g.inputs[i], false));
          break;
        case Aggregate::max:
          row.push_back(fold_extreme("MAX", g.inputs[i], true));
          break;
      }
    }
    return row;
  }

  const QueryAst& ast_;
  const Context& ctx_;
  bool aggregating_;
  std::vector<std::vector<Value>> rows_;
  std::map<std::vector<Value>, std::size_t, RowLess> group_index_;
  std::vector<Group> groups_;
};

// Planned evaluation -----------------------------------------------------------

class PlannedRun {
 public:
  PlannedRun(const Plan& plan, const Context& ctx, Projector& out) : plan_(plan), ctx_(ctx), out_(out) {}

  void run() {
    Binding b = ctx_.empty_binding();
    step(0, b);
  }

 private:
  void step(std::size_t i, Binding& b) {
    if (i == plan_.steps.size()) {
      out_.add(b);
      return;
    }
    const PlanStep& s = plan_.steps[i];
    switch (s.kind) {
      case PlanStep::Kind::scan: {
        std::vector<NodeId> candidates = s.label ? ctx_.graph.nodes_with_label(*s.label) : ctx_.graph.node_ids();
        for (NodeId id : candidates) {
          if (!ctx_.node_matches(s.node, id)) continue;
          b.nodes[s.node] = id.value;
          step(i + 1, b);
        }
        b.nodes[s.node] = kUnbound;
        return;
      }
      case PlanStep::Kind::expand: {
        const QueryEdge& qe = ctx_.edges[s.edge];
        const std::size_t far = qe.src == s.node ? qe.dst : qe.src;
        Direction dir = !qe.directed ? Direction::both : qe.src == s.node ? Direction::out : Direction::in;
        std::optional<std::string_view> rel;
        if (qe.rel_type) rel = *qe.rel_type;
        std::vector<Neighbor> hits;
        ctx_.graph.for_each_neighbor(NodeId{b.nodes[s.node]}, dir, rel,
                                     [&](EdgeId e, NodeId other) { hits.push_back({e, other}); });
        for (const Neighbor& n : hits) {
          if (Context::edge_used(b, n.edge.value)) continue;
          if (s.closes_cycle) {
            if (b.nodes[far] != n.other.value) continue;
          } else if (!ctx_.node_matches(far, n.other)) {
            continue;
          }
          b.edges[s.edge] = n.edge.value;
          if (!s.closes_cycle) b.nodes[far] = n.other.value;
          step(i + 1, b);
        }
        b.edges[s.edge] = kUnbound;
        if (!s.closes_cycle) b.nodes[far] = kUnbound;
        return;
      }
      case PlanStep::Kind::filter:
        if (truth(ctx_.eval(*s.filter, b), "WHERE")) step(i + 1, b);
        return;
    }
  }

  const Plan& plan_;
  const Context& ctx_;
  Projector& out_;
};

// Naive evaluation -------------------------------------------------------------

class NaiveRun {
 public:
  NaiveRun(const QueryAst& ast, const Context& ctx, Projector& out)
      : ast_(ast), ctx_(ctx), out_(out), all_nodes_(ctx.graph.node_ids()), all_edges_(ctx.graph.edge_ids()) {}

  void run() {
    Binding b = ctx_.empty_binding();
    bind_node(0, b);
  }

 private:
  void bind_node(std::size_t q, Binding& b) {
    if (q == ctx_.nodes.size()) return bind_edge(0, b);
    for (NodeId id : all_nodes_) {
      if (!ctx_.node_matches(q, id)) continue;
      b.nodes[q] = id.value;
      bind_node(q + 1, b);
    }
    b.nodes[q] = kUnbound;
  }

  void bind_edge(std::size_t q, Binding& b) {
    if (q == ctx_.edges.size()) {
      if (!ast_.where || truth(ctx_.eval(*ast_.where, b), "WHERE")) out_.add(b);
      return;
    }
    const QueryEdge& qe = ctx_.edges[q];
    const std::uint64_t s = b.nodes[qe.src];
    const std::uint64_t d = b.nodes[qe.dst];
    for (EdgeId id : all_edges_) {
      auto e = ctx_.graph.edge(id);
      if (qe.rel_type && e->rel_type() != *qe.rel_type) continue;
      bool forward = e->src().value == s && e->dst().value == d;
      bool backward = e->src().value == d && e->dst().value == s;
      if (!(forward || (!qe.directed && backward))) continue;
      if (Context::edge_used(b, id.value)) continue;
      b.edges[q] = id.value;
      bind_edge(q + 1, b);
    }
    b.edges[q] = kUnbound;
  }

  const QueryAst& ast_;
  const Context& ctx_;
  Projector& out_;
  std::vector<NodeId> all_nodes_;
  std::vector<EdgeId> all_edges_;
};

}  // namespace

ResultTable execute_plan(const Plan& plan, const Graph& graph) {
  Context ctx(graph, plan.nodes, plan.edges);
  Projector projector(plan.ast, ctx);
  PlannedRun(plan, ctx, projector).run();
  return projector.finish();
}

ResultTable execute_query(const QueryAst& ast, const Graph& graph) {
  return execute_plan(plan_query(ast, GraphStatistics::of(graph)), graph);
}

ResultTable execute_naive(const QueryAst& ast, const Graph& graph) {
  auto qg = query::compile_patterns(ast);
  Context ctx(graph, std::move(qg.nodes), std::move(qg.edges));
  Projector projector(ast, ctx);
  NaiveRun(ast, ctx, projector).run();
  return projector.finish();
}

ResultTable run_query(std::string_view text, const Graph& graph) { return execute_query(parse_query(text), graph); }

}  // namespace lcag
