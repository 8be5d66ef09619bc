#include <algorithm>
#include <deque>
#include <limits>
#include <map>
#include <set>

#include "lcag/query.hpp"
#include "query_internal.hpp"

namespace lcag {

namespace query {

std::vector<ExprPtr> split_conjuncts(const ExprPtr& e) {
  std::vector<ExprPtr> out;
  if (!e) return out;
  if (e->kind == Expr::Kind::logical_and) {
    for (const auto& a : e->args) {
      auto part = split_conjuncts(a);
      out.insert(out.end(), part.begin(), part.end());
    }
  } else {
    out.push_back(e);
  }
  return out;
}

QueryGraph compile_patterns(const QueryAst& ast) {
  QueryGraph g;
  std::map<std::string, std::size_t> by_var;

  auto add_node = [&](const NodePattern& p) {
    std::size_t index = 0;
    if (p.var && by_var.contains(*p.var)) {
      index = by_var[*p.var];
    } else {
      index = g.nodes.size();
      g.nodes.push_back({p.var, {}, {}});
      if (p.var) by_var[*p.var] = index;
    }
    QueryNode& n = g.nodes[index];
    for (const auto& l : p.labels) {
      if (std::find(n.labels.begin(), n.labels.end(), l) == n.labels.end()) n.labels.push_back(l);
    }
    for (const auto& kv : p.props) n.props.push_back(kv);
    return index;
  };

  for (const auto& path : ast.patterns) {
    std::size_t prev = add_node(path.nodes[0]);
    for (std::size_t i = 0; i < path.edges.size(); ++i) {
      std::size_t cur = add_node(path.nodes[i + 1]);
      const EdgePattern& ep = path.edges[i];
      QueryEdge e;
      e.var = ep.var;
      e.rel_type = ep.rel_type;
      e.directed = ep.direction != EdgeDirection::undirected;
      e.src = ep.direction == EdgeDirection::left ? cur : prev;
      e.dst = ep.direction == EdgeDirection::left ? prev : cur;
      g.edges.push_back(std::move(e));
      prev = cur;
    }
  }
  return g;
}

}  // namespace query

GraphStatistics GraphStatistics::of(const Graph& graph) {
  GraphStatistics s;
  for (auto& [label, count] : graph.label_counts()) s.label_cardinality.emplace(label, count);
  s.node_count = graph.node_count();
  return s;
}

std::size_t GraphStatistics::cardinality(std::string_view label) const {
  auto it = label_cardinality.find(label);
  return it == label_cardinality.end() ? 0 : it->second;
}

Plan plan_query(const QueryAst& ast, const GraphStatistics& stats) {
  Plan plan;
  plan.ast = ast;
  auto qg = query::compile_patterns(ast);
  plan.nodes = std::move(qg.nodes);
  plan.edges = std::move(qg.edges);

  std::vector<bool> node_bound(plan.nodes.size(), false);
  std::vector<bool> edge_bound(plan.edges.size(), false);
  std::map<std::string, std::pair<bool, std::size_t>> vars;  // name -> (is_edge, index)
  for (std::size_t i = 0; i < plan.nodes.size(); ++i) {
    if (plan.nodes[i].var) vars[*plan.nodes[i].var] = {false, i};
  }
  for (std::size_t i = 0; i < plan.edges.size(); ++i) {
    if (plan.edges[i].var) vars[*plan.edges[i].var] = {true, i};
  }

  struct Pending {
    ExprPtr expr;
    std::vector<std::pair<bool, std::size_t>> needs;
    bool placed = false;
  };
  std::vector<Pending> pending;
  for (const auto& c : query::split_conjuncts(ast.where)) {
    Pending p{c, {}, false};
    std::vector<std::string> used;
    query::collect_variables(*c, used);
    for (const auto& v : used) p.needs.push_back(vars.at(v));
    pending.push_back(std::move(p));
  }

  auto place_filters = [&] {
    for (auto& p : pending) {
      if (p.placed) continue;
      bool ready = std::all_of(p.needs.begin(), p.needs.end(), [&](const auto& need) {
        return need.first ? edge_bound[need.second] : node_bound[need.second];
      });
      if (!ready) continue;
      PlanStep s;
      s.kind = PlanStep::Kind::filter;
      s.filter = p.expr;
      plan.steps.push_back(std::move(s));
      p.placed = true;
    }
  };

  place_filters();
  while (true) {
    std::optional<std::size_t> seed;
    std::optional<std::string> seed_label;
    std::size_t best = std::numeric_limits<std::size_t>::max();
    for (std::size_t i = 0; i < plan.nodes.size(); ++i) {
      if (node_bound[i]) continue;
      if (!seed) seed = i;
      for (const auto& l : plan.nodes[i].labels) {
        std::size_t c = stats.cardinality(l);
        if (c < best) {
          best = c;
          seed = i;
          seed_label = l;
        }
      }
    }
    if (!seed) break;

    PlanStep scan;
    scan.kind = PlanStep::Kind::scan;
    scan.node = *seed;
    scan.label = seed_label;
    plan.steps.push_back(std::move(scan));
    node_bound[*seed] = true;
    place_filters();

    std::deque<std::size_t> frontier{*seed};
    while (!frontier.empty()) {
      std::size_t n = frontier.front();
      frontier.pop_front();
      for (std::size_t e = 0; e < plan.edges.size(); ++e) {
        const QueryEdge& qe = plan.edges[e];
        if (edge_bound[e] || (qe.src != n && qe.dst != n)) continue;
        std::size_t other = qe.src == n ? qe.dst : qe.src;
        PlanStep step;
        step.kind = PlanStep::Kind::expand;
        step.node = n;
        step.edge = e;
        step.closes_cycle = node_bound[other];
        plan.steps.push_back(std::move(step));
        edge_bound[e] = true;
        if (!node_bound[other]) {
          node_bound[other] = true;
          frontier.push_back(other);
        }
        place_filters();
      }
    }
  }
  return plan;
}

std::string Plan::describe() const {
  auto node_name = [&](std::size_t i) {
    std::string out = "n" + std::to_string(i);
    if (nodes[i].var) out += "(" + *nodes[i].var + ")";
    return out;
  };
  std::string out;
  for (const auto& s : steps) {
    switch (s.kind) {
      case PlanStep::Kind::scan:
        out += "scan " + node_name(s.node) + (s.label ? " by label " + *s.label : " over all nodes");
        break;
      case PlanStep::Kind::expand: {
        const QueryEdge& e = edges[s.edge];
        std::size_t other = e.src == s.node ? e.dst : e.src;
        out += "expand e" + std::to_string(s.edge) + (e.rel_type ? ":" + *e.rel_type : "") + " from " +
               node_name(s.node) + (s.closes_cycle ? " to bound " : " to ") + node_name(other);
        break;
      }
      case PlanStep::Kind::filter:
        out += "filter " + query::render_expr(*s.filter);
        break;
    }
    out += "\n";
  }
  return out;
}

}  // namespace lcag
