#include "lcag/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>
#include <tuple>
#include <unordered_map>

#include "lcag/csv.hpp"
#include "lcag/error.hpp"
#include "value_codec.hpp"

namespace lcag {

namespace {

constexpr std::string_view kWorkflowHeader =
    "workflow_id,step_index,activity_name,stage,direction,flow_name,flow_kind,amount,unit,unc_kind,unc_a,unc_b";
constexpr std::string_view kMetadataHeader = "workflow_id,key,value";
constexpr std::string_view kAgentHeader = "workflow_id,agent_id,agent_name,feature_key,feature_value";
constexpr std::string_view kReferenceHeader = "workflow_id,reference_id,author,title,year,doi";

const std::set<std::string, std::less<>> kStages = {"production", "transportation", "usage", "disposal"};
const std::set<std::string, std::less<>> kFlowKinds = {"elementary", "intermediate", "product", "waste"};

/// Thrown inside a row parser; becomes a RowError for that row.
struct RowProblem {
  std::string message;
};

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

std::optional<double> to_real(std::string_view text) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double v = 0.0;
  auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc() || end != text.data() + text.size() || !std::isfinite(v)) {
    return std::nullopt;
  }
  return v;
}

std::optional<std::int64_t> to_int(std::string_view text) {
  text = trim(text);
  std::int64_t v = 0;
  auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc() || end != text.data() + text.size()) return std::nullopt;
  return v;
}

const std::string& required(const std::vector<std::string>& fields, std::size_t i, std::string_view header) {
  if (fields[i].empty()) throw RowProblem{"empty " + std::string(header)};
  return fields[i];
}

std::optional<std::string> optional_field(const std::vector<std::string>& fields, std::size_t i) {
  if (fields[i].empty()) return std::nullopt;
  return fields[i];
}

double real_field(const std::vector<std::string>& fields, std::size_t i, std::string_view header) {
  auto v = to_real(fields[i]);
  if (!v) throw RowProblem{std::string(header) + " is not a finite number: \"" + fields[i] + "\""};
  return *v;
}

std::vector<std::string> split_header(std::string_view header) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    auto comma = header.find(',', start);
    out.emplace_back(header.substr(start, comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

/// Shared driver: header check, field-count check, per-row conversion, and a
/// uniqueness key per row.
template <typename Row, typename Convert, typename Key>
ParsedRows<Row> parse_rows(TableKind kind, std::string_view text, Convert convert, Key key) {
  const std::string table(to_string(kind));
  const auto header = split_header(table_header(kind));
  const auto records = csv::parse(text);
  if (records.empty()) throw FormatError(1, table + " table: missing header");
  if (records.front().fields != header) {
    throw FormatError(records.front().line,
                      table + " table: expected header \"" + std::string(table_header(kind)) + "\", got \"" +
                          csv::join(records.front().fields) + "\"");
  }

  ParsedRows<Row> out;
  std::set<decltype(key(std::declval<const Row&>()))> seen;
  for (std::size_t r = 1; r < records.size(); ++r) {
    const auto& rec = records[r];
    try {
      if (rec.fields.size() != header.size()) {
        throw RowProblem{"expected " + std::to_string(header.size()) + " fields, got " +
                         std::to_string(rec.fields.size())};
      }
      Row row = convert(rec.fields);
      row.line = rec.line;
      if (!seen.insert(key(row)).second) throw RowProblem{"duplicate row key"};
      out.rows.push_back(std::move(row));
    } catch (const RowProblem& p) {
      out.errors.push_back({table, rec.line, p.message});
    } catch (const ValueError& e) {
      out.errors.push_back({table, rec.line, e.what()});
    }
  }
  return out;
}

// Statement construction ------------------------------------------------------

NodeMatch workflow_match(const std::string& id) { return {"Workflow", {{"id", id}}}; }

NodeMatch activity_match(const WorkflowRow& r) {
  return {"Activity", {{"workflow_id", r.workflow_id}, {"step_index", r.step_index}, {"name", r.activity_name}}};
}

NodeMatch flow_match(const WorkflowRow& r) { return {"Flow", {{"name", r.flow_name}, {"kind", r.flow_kind}}}; }

std::string render_props(const PropertyMap& props) {
  std::string out = "{";
  bool first = true;
  for (const auto& [k, v] : props) {
    if (!first) out += ", ";
    first = false;
    out += k + ": " + detail::dump_compact(detail::value_to_json(v));
  }
  return out + "}";
}

std::string render_match(std::string_view var, const NodeMatch& m) {
  std::string out = "(" + std::string(var) + ":" + m.label;
  if (!m.props.empty()) out += " " + render_props(m.props);
  return out + ")";
}

std::string render_sets(std::string_view var, const PropertyMap& payload) {
  std::string out;
  for (const auto& [k, v] : payload) {
    out += out.empty() ? " SET " : ", ";
    out += std::string(var) + "." + k + " = " + detail::dump_compact(detail::value_to_json(v));
  }
  return out;
}

/// Drops exact repeats (ignoring provenance) while keeping first-seen order.
class StatementList {
 public:
  void push(Statement s) {
    if (seen_.insert(render_statement(s)).second) list_.push_back(std::move(s));
  }
  std::vector<Statement> take() { return std::move(list_); }

 private:
  std::set<std::string> seen_;
  std::vector<Statement> list_;
};

Statement merge_node(NodeMatch node, PropertyMap payload, std::string_view table, std::size_t line) {
  Statement s;
  s.op = Statement::Op::merge_node;
  s.node = std::move(node);
  s.payload = std::move(payload);
  s.table = table;
  s.line = line;
  return s;
}

Statement merge_edge(NodeMatch src, std::string rel, NodeMatch dst, PropertyMap payload, std::string_view table,
                     std::size_t line) {
  Statement s;
  s.op = Statement::Op::merge_edge;
  s.node = std::move(src);
  s.rel_type = std::move(rel);
  s.target = std::move(dst);
  s.payload = std::move(payload);
  s.table = table;
  s.line = line;
  return s;
}

Statement set_prop(NodeMatch node, PropertyMap payload, std::string_view table, std::size_t line) {
  Statement s;
  s.op = Statement::Op::set_prop;
  s.node = std::move(node);
  s.payload = std::move(payload);
  s.table = table;
  s.line = line;
  return s;
}

auto uncertainty_tuple(const Uncertainty& u) { return std::make_tuple(u.kind(), u.lo(), u.hi()); }

// Application -------------------------------------------------------------------

/// Lookup of nodes by (label, subset of properties), built lazily per
/// (label, key names) and kept current as the apply call creates and edits
/// nodes.
class MatchIndex {
 public:
  explicit MatchIndex(const Graph& graph) : graph_(graph) {}

  const std::vector<NodeId>& find(const NodeMatch& m) {
    static const std::vector<NodeId> kNone;
    auto& cache = cache_for(m.label, names_of(m.props));
    auto it = cache.find(key_string(m.props));
    return it == cache.end() ? kNone : it->second;
  }

  void added(NodeId id, const std::string& label, const PropertyMap& props) {
    for (auto& [sig, cache] : caches_) {
      if (sig.first != label) continue;
      if (auto key = key_of(props, sig.second)) cache[*key].push_back(id);
    }
  }

  /// A write to `key` on a node of `label` may move it between buckets.
  void touched(const std::string& label, const std::string& key) {
    std::erase_if(caches_, [&](const auto& entry) {
      const auto& [sig, cache] = entry;
      return sig.first == label && std::find(sig.second.begin(), sig.second.end(), key) != sig.second.end();
    });
  }

 private:
  using Signature = std::pair<std::string, std::vector<std::string>>;
  using Cache = std::unordered_map<std::string, std::vector<NodeId>>;

  static std::vector<std::string> names_of(const PropertyMap& props) {
    std::vector<std::string> names;
    for (const auto& [k, v] : props) names.push_back(k);
    return names;
  }

  static std::string key_string(const PropertyMap& props) {
    return detail::dump_compact(detail::props_to_json(props));
  }

  static std::optional<std::string> key_of(const PropertyMap& props, const std::vector<std::string>& names) {
    PropertyMap picked;
    for (const auto& n : names) {
      auto it = props.find(n);
      if (it == props.end()) return std::nullopt;
      picked.emplace(n, it->second);
    }
    return key_string(picked);
  }

  Cache& cache_for(const std::string& label, std::vector<std::string> names) {
    Signature sig{label, std::move(names)};
    auto it = caches_.find(sig);
    if (it != caches_.end()) return it->second;
    Cache cache;
    for (NodeId id : graph_.nodes_with_label(label)) {
      if (auto key = key_of(graph_.node(id)->props(), sig.second)) cache[*key].push_back(id);
    }
    return caches_.emplace(std::move(sig), std::move(cache)).first->second;
  }

  const Graph& graph_;
  std::map<Signature, Cache> caches_;
};

class Applier {
 public:
  Applier(Graph& graph, IngestSummary& summary) : graph_(graph), index_(graph), summary_(summary) {}

  void apply(const Statement& s) {
    switch (s.op) {
      case Statement::Op::merge_node:
        merge_node(s);
        break;
      case Statement::Op::merge_edge:
        merge_edge(s);
        break;
      case Statement::Op::set_prop:
        set_prop(s);
        break;
    }
  }

 private:
  void merge_node(const Statement& s) {
    std::vector<NodeId> hits = index_.find(s.node);
    if (hits.empty()) {
      PropertyMap props = s.node.props;
      for (const auto& [k, v] : s.payload) props.insert_or_assign(k, v);
      const std::size_t n = props.size();
      NodeId id = graph_.create_node({s.node.label}, props);
      index_.added(id, s.node.label, props);
      ++summary_.nodes_created;
      summary_.props_set += n;
      return;
    }
    for (NodeId id : hits) {
      ++summary_.nodes_matched;
      write(id, s.node.label, s.payload);
    }
  }

  void merge_edge(const Statement& s) {
    std::vector<NodeId> srcs = index_.find(s.node);
    std::vector<NodeId> dsts = index_.find(s.target);
    if (srcs.empty() || dsts.empty()) {
      const NodeMatch& missing = srcs.empty() ? s.node : s.target;
      summary_.row_errors.push_back({s.table, s.line,
                                     s.rel_type + " skipped: no " + missing.label + " node matches " +
                                         render_props(missing.props)});
      return;
    }
    for (NodeId src : srcs) {
      for (NodeId dst : dsts) {
        std::optional<EdgeId> existing;
        graph_.for_each_neighbor(src, Direction::out, s.rel_type, [&](EdgeId e, NodeId other) {
          if (!existing && other == dst) existing = e;
        });
        if (existing) {
          ++summary_.edges_matched;
          for (const auto& [k, v] : s.payload) {
            const PropertyValue* old = graph_.edge(*existing)->property(k);
            if (old != nullptr && *old == v) continue;
            graph_.set_property(*existing, k, v);
            ++summary_.props_set;
          }
        } else {
          graph_.create_edge(s.rel_type, src, dst, s.payload);
          ++summary_.edges_created;
          summary_.props_set += s.payload.size();
        }
      }
    }
  }

  void set_prop(const Statement& s) {
    std::vector<NodeId> hits = index_.find(s.node);
    if (hits.empty()) {
      summary_.row_errors.push_back(
          {s.table, s.line, "no " + s.node.label + " node matches " + render_props(s.node.props)});
      return;
    }
    for (NodeId id : hits) write(id, s.node.label, s.payload);
  }

  void write(NodeId id, const std::string& label, const PropertyMap& payload) {
    for (const auto& [k, v] : payload) {
      const PropertyValue* old = graph_.node(id)->property(k);
      if (old != nullptr && *old == v) continue;
      graph_.set_property(id, k, v);
      index_.touched(label, k);
      ++summary_.props_set;
    }
  }

  Graph& graph_;
  MatchIndex index_;
  IngestSummary& summary_;
};

}  // namespace

std::string_view to_string(TableKind kind) {
  switch (kind) {
    case TableKind::workflow:
      return "workflow";
    case TableKind::metadata:
      return "metadata";
    case TableKind::agent:
      return "agent";
    case TableKind::reference:
      return "reference";
  }
  return "?";
}

std::optional<TableKind> parse_table_kind(std::string_view name) {
  for (TableKind k : {TableKind::workflow, TableKind::metadata, TableKind::agent, TableKind::reference}) {
    if (to_string(k) == name) return k;
  }
  return std::nullopt;
}

std::string_view table_header(TableKind kind) {
  switch (kind) {
    case TableKind::workflow:
      return kWorkflowHeader;
    case TableKind::metadata:
      return kMetadataHeader;
    case TableKind::agent:
      return kAgentHeader;
    case TableKind::reference:
      return kReferenceHeader;
  }
  return {};
}

ParsedRows<WorkflowRow> parse_workflow_table(std::string_view csv_text) {
  auto convert = [](const std::vector<std::string>& f) {
    WorkflowRow r;
    r.workflow_id = required(f, 0, "workflow_id");
    auto step = to_int(f[1]);
    if (!step || *step < 0) throw RowProblem{"step_index is not a non-negative integer: \"" + f[1] + "\""};
    r.step_index = *step;
    r.activity_name = required(f, 2, "activity_name");
    r.stage = optional_field(f, 3);
    if (r.stage && !kStages.contains(*r.stage)) throw RowProblem{"unknown stage \"" + *r.stage + "\""};
    if (f[4] == "input") {
      r.is_output = false;
    } else if (f[4] == "output") {
      r.is_output = true;
    } else {
      throw RowProblem{"direction must be input or output, got \"" + f[4] + "\""};
    }
    r.flow_name = required(f, 5, "flow_name");
    r.flow_kind = required(f, 6, "flow_kind");
    if (!kFlowKinds.contains(r.flow_kind)) throw RowProblem{"unknown flow_kind \"" + r.flow_kind + "\""};
    r.amount = real_field(f, 7, "amount");
    r.unit = required(f, 8, "unit");
    if (f[9].empty()) {
      if (!f[10].empty() || !f[11].empty()) throw RowProblem{"unc_a/unc_b given without unc_kind"};
    } else {
      double a = real_field(f, 10, "unc_a");
      double b = real_field(f, 11, "unc_b");
      if (f[9] == "uniform") {
        r.uncertainty = Uncertainty::uniform(a, b);
      } else if (f[9] == "normal") {
        r.uncertainty = Uncertainty::normal(a, b);
      } else {
        throw RowProblem{"unc_kind must be uniform or normal, got \"" + f[9] + "\""};
      }
    }
    return r;
  };
  auto key = [](const WorkflowRow& r) {
    return std::make_tuple(r.workflow_id, r.step_index, r.is_output, r.flow_name);
  };
  return parse_rows<WorkflowRow>(TableKind::workflow, csv_text, convert, key);
}

ParsedRows<MetadataRow> parse_metadata_table(std::string_view csv_text) {
  auto convert = [](const std::vector<std::string>& f) {
    MetadataRow r;
    r.workflow_id = required(f, 0, "workflow_id");
    r.key = required(f, 1, "key");
    r.value = f[2];
    if (r.key == "id") throw RowProblem{"key \"id\" is the workflow identifier and cannot be set"};
    if (r.key == "functional_unit_amount" && !to_real(r.value)) {
      throw RowProblem{"functional_unit_amount is not a finite number: \"" + r.value + "\""};
    }
    if ((r.key == "region" || r.key == "functional_unit_unit") && r.value.empty()) {
      throw RowProblem{"empty value for " + r.key};
    }
    return r;
  };
  // Repeated keys are legal (several regions); only exact repeats are not.
  auto key = [](const MetadataRow& r) { return std::make_tuple(r.workflow_id, r.key, r.value); };
  return parse_rows<MetadataRow>(TableKind::metadata, csv_text, convert, key);
}

ParsedRows<AgentRow> parse_agent_table(std::string_view csv_text) {
  auto convert = [](const std::vector<std::string>& f) {
    AgentRow r;
    r.workflow_id = required(f, 0, "workflow_id");
    r.agent_id = required(f, 1, "agent_id");
    r.agent_name = required(f, 2, "agent_name");
    r.feature_key = optional_field(f, 3);
    r.feature_value = optional_field(f, 4);
    if (!r.feature_key && r.feature_value) throw RowProblem{"feature_value given without feature_key"};
    return r;
  };
  auto key = [](const AgentRow& r) {
    return std::make_tuple(r.agent_id, r.feature_key.value_or(""), r.feature_key ? std::string() : r.workflow_id);
  };
  return parse_rows<AgentRow>(TableKind::agent, csv_text, convert, key);
}

ParsedRows<ReferenceRow> parse_reference_table(std::string_view csv_text) {
  auto convert = [](const std::vector<std::string>& f) {
    ReferenceRow r;
    r.workflow_id = required(f, 0, "workflow_id");
    r.reference_id = required(f, 1, "reference_id");
    r.author = required(f, 2, "author");
    r.title = required(f, 3, "title");
    if (!f[4].empty()) {
      r.year = to_int(f[4]);
      if (!r.year) throw RowProblem{"year is not an integer: \"" + f[4] + "\""};
    }
    r.doi = optional_field(f, 5);
    return r;
  };
  auto key = [](const ReferenceRow& r) { return r.reference_id; };
  return parse_rows<ReferenceRow>(TableKind::reference, csv_text, convert, key);
}

ParsedTable parse_table(TableKind kind, std::string_view csv_text) {
  switch (kind) {
    case TableKind::workflow:
      return parse_workflow_table(csv_text);
    case TableKind::metadata:
      return parse_metadata_table(csv_text);
    case TableKind::agent:
      return parse_agent_table(csv_text);
    case TableKind::reference:
      return parse_reference_table(csv_text);
  }
  throw Error("unknown table kind");
}

std::string render_statement(const Statement& s) {
  switch (s.op) {
    case Statement::Op::merge_node:
      return "MERGE " + render_match("n", s.node) + render_sets("n", s.payload);
    case Statement::Op::merge_edge:
      return "MATCH " + render_match("a", s.node) + ", " + render_match("b", s.target) + " MERGE (a)-[r:" +
             s.rel_type + "]->(b)" + render_sets("r", s.payload);
    case Statement::Op::set_prop:
      return "MATCH " + render_match("n", s.node) + render_sets("n", s.payload);
  }
  return {};
}

std::vector<Statement> build_workflow_statements(const std::vector<WorkflowRow>& input) {
  const std::string_view table = "workflow";
  std::vector<WorkflowRow> rows = input;
  auto order = [](const WorkflowRow& r) {
    return std::make_tuple(std::cref(r.workflow_id), r.step_index, std::cref(r.activity_name), r.is_output,
                           std::cref(r.flow_name), std::cref(r.flow_kind), std::cref(r.stage), r.amount,
                           std::cref(r.unit), uncertainty_tuple(r.uncertainty));
  };
  std::sort(rows.begin(), rows.end(), [&](const WorkflowRow& a, const WorkflowRow& b) { return order(a) < order(b); });

  StatementList out;
  // workflow -> step index -> activity rows (first row per activity)
  std::map<std::string, std::map<std::int64_t, std::map<std::string, const WorkflowRow*>>> steps;
  for (const auto& r : rows) {
    out.push(merge_node(workflow_match(r.workflow_id), {}, table, r.line));
    PropertyMap activity_payload;
    if (r.stage) activity_payload.emplace("stage", *r.stage);
    out.push(merge_node(activity_match(r), std::move(activity_payload), table, r.line));
    out.push(merge_node(flow_match(r), {}, table, r.line));
    out.push(merge_edge(workflow_match(r.workflow_id), "HAS_STEP", activity_match(r),
                        {{"index", r.step_index}}, table, r.line));
    out.push(merge_edge(activity_match(r), r.is_output ? "HAS_OUTPUT" : "HAS_INPUT", flow_match(r),
                        {{"amount", Quantity{r.amount, r.unit, r.uncertainty}}}, table, r.line));
    steps[r.workflow_id][r.step_index].emplace(r.activity_name, &r);
  }
  for (const auto& [workflow, by_index] : steps) {
    for (auto it = by_index.begin(); it != by_index.end(); ++it) {
      auto next = std::next(it);
      if (next == by_index.end()) break;
      for (const auto& [from_name, from] : it->second) {
        for (const auto& [to_name, to] : next->second) {
          out.push(merge_edge(activity_match(*from), "NEXT", activity_match(*to), {}, table, to->line));
        }
      }
    }
  }
  return out.take();
}

std::vector<Statement> build_metadata_statements(const std::vector<MetadataRow>& input) {
  const std::string_view table = "metadata";
  std::vector<MetadataRow> rows = input;
  std::sort(rows.begin(), rows.end(), [](const MetadataRow& a, const MetadataRow& b) {
    return std::tie(a.workflow_id, a.key, a.value) < std::tie(b.workflow_id, b.key, b.value);
  });

  struct FunctionalUnitParts {
    std::size_t line = 0;
    std::optional<std::string> description;
    std::optional<double> amount;
    std::optional<std::string> unit;
  };
  std::map<std::string, FunctionalUnitParts> units;

  StatementList out;
  for (const auto& r : rows) {
    if (r.key == "region") {
      NodeMatch location{"Location", {{"code", r.value}}};
      out.push(merge_node(location, {}, table, r.line));
      out.push(merge_edge(workflow_match(r.workflow_id), "LOCATED_IN", location, {}, table, r.line));
    } else if (r.key == "functional_unit_desc" || r.key == "functional_unit_amount" ||
               r.key == "functional_unit_unit") {
      auto& fu = units[r.workflow_id];
      if (fu.line == 0) fu.line = r.line;
      if (r.key == "functional_unit_desc") fu.description = r.value;
      if (r.key == "functional_unit_amount") fu.amount = to_real(r.value);
      if (r.key == "functional_unit_unit") fu.unit = r.value;
    } else {
      out.push(set_prop(workflow_match(r.workflow_id), {{r.key, r.value}}, table, r.line));
    }
  }
  for (const auto& [workflow, fu] : units) {
    NodeMatch node{"FunctionalUnit", {{"workflow_id", workflow}}};
    PropertyMap payload;
    payload.emplace("description", fu.description.value_or(""));
    if (fu.amount) payload.emplace("amount", Quantity{*fu.amount, fu.unit.value_or("1"), {}});
    out.push(merge_node(node, std::move(payload), table, fu.line));
    out.push(merge_edge(workflow_match(workflow), "HAS_FUNCTIONAL_UNIT", node, {}, table, fu.line));
  }
  return out.take();
}

std::vector<Statement> build_agent_statements(const std::vector<AgentRow>& input) {
  const std::string_view table = "agent";
  std::vector<AgentRow> rows = input;
  std::sort(rows.begin(), rows.end(), [](const AgentRow& a, const AgentRow& b) {
    return std::tie(a.agent_id, a.workflow_id, a.feature_key, a.agent_name, a.feature_value) <
           std::tie(b.agent_id, b.workflow_id, b.feature_key, b.agent_name, b.feature_value);
  });

  StatementList out;
  for (const auto& r : rows) {
    NodeMatch agent{"Agent", {{"agent_id", r.agent_id}}};
    out.push(merge_node(agent, {{"name", r.agent_name}}, table, r.line));
    out.push(merge_edge(agent, "PERFORMS", {"Activity", {{"workflow_id", r.workflow_id}}}, {}, table, r.line));
    if (r.feature_key) {
      NodeMatch parameter{"Parameter", {{"owner", r.agent_id}, {"name", *r.feature_key}}};
      PropertyMap payload;
      const std::string value = r.feature_value.value_or("");
      if (auto x = to_real(value)) {
        payload.emplace("value", *x);
      } else {
        payload.emplace("text", value);
      }
      out.push(merge_node(parameter, std::move(payload), table, r.line));
      out.push(merge_edge(agent, "HAS_PARAMETER", parameter, {}, table, r.line));
    }
  }
  return out.take();
}

std::vector<Statement> build_reference_statements(const std::vector<ReferenceRow>& input) {
  const std::string_view table = "reference";
  std::vector<ReferenceRow> rows = input;
  std::sort(rows.begin(), rows.end(), [](const ReferenceRow& a, const ReferenceRow& b) {
    return std::tie(a.reference_id, a.workflow_id, a.author, a.title, a.year, a.doi) <
           std::tie(b.reference_id, b.workflow_id, b.author, b.title, b.year, b.doi);
  });

  StatementList out;
  for (const auto& r : rows) {
    NodeMatch reference{"Reference", {{"reference_id", r.reference_id}}};
    PropertyMap payload{{"author", r.author}, {"title", r.title}};
    if (r.year) payload.emplace("year", *r.year);
    if (r.doi) payload.emplace("doi", *r.doi);
    out.push(merge_node(reference, std::move(payload), table, r.line));
    out.push(merge_edge(workflow_match(r.workflow_id), "HAS_REFERENCE", reference, {}, table, r.line));
  }
  return out.take();
}

std::vector<Statement> build_statements(const ParsedTable& table) {
  return std::visit(
      [](const auto& parsed) -> std::vector<Statement> {
        using Row = typename std::decay_t<decltype(parsed.rows)>::value_type;
        if constexpr (std::is_same_v<Row, WorkflowRow>) {
          return build_workflow_statements(parsed.rows);
        } else if constexpr (std::is_same_v<Row, MetadataRow>) {
          return build_metadata_statements(parsed.rows);
        } else if constexpr (std::is_same_v<Row, AgentRow>) {
          return build_agent_statements(parsed.rows);
        } else {
          return build_reference_statements(parsed.rows);
        }
      },
      table);
}

IngestSummary& IngestSummary::operator+=(const IngestSummary& other) {
  nodes_created += other.nodes_created;
  nodes_matched += other.nodes_matched;
  edges_created += other.edges_created;
  edges_matched += other.edges_matched;
  props_set += other.props_set;
  row_errors.insert(row_errors.end(), other.row_errors.begin(), other.row_errors.end());
  return *this;
}

IngestSummary apply_statements(Graph& graph, const std::vector<Statement>& statements) {
  IngestSummary summary;
  auto tx = graph.transaction();
  Applier applier(graph, summary);
  for (const auto& s : statements) applier.apply(s);
  tx.commit();
  return summary;
}

TableRegistry TableRegistry::builtin() {
  TableRegistry registry;
  for (TableKind kind : {TableKind::workflow, TableKind::metadata, TableKind::agent, TableKind::reference}) {
    registry.register_kind(std::string(to_string(kind)), [kind](std::string_view text) {
      ParsedTable parsed = parse_table(kind, text);
      TableOutput out;
      out.statements = build_statements(parsed);
      out.row_errors = std::visit([](auto& p) { return std::move(p.errors); }, parsed);
      return out;
    });
  }
  return registry;
}

void TableRegistry::register_kind(std::string name, TableHandler handler) {
  if (find(name) != nullptr) throw Error("table kind already registered: " + name);
  kinds_.emplace_back(std::move(name), std::move(handler));
}

const TableHandler* TableRegistry::find(std::string_view name) const {
  for (const auto& [n, h] : kinds_) {
    if (n == name) return &h;
  }
  return nullptr;
}

std::vector<std::string> TableRegistry::names() const {
  std::vector<std::string> out;
  for (const auto& [n, h] : kinds_) out.push_back(n);
  return out;
}

IngestSummary ingest_bundle(Graph& graph, const TableBundle& bundle, const TableRegistry& registry) {
  for (const auto& [name, text] : bundle) {
    if (registry.find(name) == nullptr) throw FormatError(0, "unknown table kind: " + name);
  }

  std::vector<TableOutput> outputs;
  for (const auto& name : registry.names()) {
    auto it = bundle.find(name);
    if (it == bundle.end()) continue;
    outputs.push_back((*registry.find(name))(it->second));
  }

  IngestSummary summary;
  auto tx = graph.transaction();
  for (const auto& out : outputs) {
    IngestSummary part;
    Applier applier(graph, part);
    for (const auto& s : out.statements) applier.apply(s);
    part.row_errors.insert(part.row_errors.begin(), out.row_errors.begin(), out.row_errors.end());
    summary += part;
  }
  tx.commit();
  return summary;
}

}  // namespace lcag
