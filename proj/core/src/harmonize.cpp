#include "lcag/harmonize.hpp"

#include <map>
#include <tuple>

#include "lcag/csv.hpp"
#include "lcag/error.hpp"

namespace lcag {

namespace {

constexpr std::string_view kMappingHeader = "source_ontology,source_term,kind,canonical_term,direction";

constexpr std::string_view kBuiltinMappings = R"(source_ontology,source_term,kind,canonical_term,direction
Wang2022,Process,class,Activity,
Wang2022,FlowProperty,class,FlowQuantity,
Wang2022,hasInputFlow,relation,HAS_INPUT,forward
Wang2022,hasOutputFlow,relation,HAS_OUTPUT,forward
Zhang2015,Process,class,Activity,
Zhang2015,hasInflow,relation,HAS_INPUT,forward
Zhang2015,hasOutflow,relation,HAS_OUTPUT,forward
Zhang2015,hasQuantity,relation,HAS_QUANTITY,forward
Zhang2015,hasBoundary,property,boundary,
Kuczenski2016,hasInputs,relation,HAS_INPUT,forward
Kuczenski2016,hasOutputs,relation,HAS_OUTPUT,forward
LciO,Input_Of,relation,HAS_INPUT,reverse
LciO,Output_Of,relation,HAS_OUTPUT,reverse
LciO,has_Destination,relation,HAS_INPUT,reverse
LciO,has_source,relation,HAS_OUTPUT,reverse
Ghose2022,flow,class,Flow,
Ghose2022,activity,class,Activity,
Ghose2022,agent,class,Agent,
Ghose2022,performs,relation,PERFORMS,forward
Ghose2022,isInputOf,relation,HAS_INPUT,reverse
Saad2023,UnitProcess,class,Activity,
Saad2023,IntermediateFlow,class,Flow,
Saad2023,ReferenceProduct,class,Flow,
Saad2023,Has_flow,relation,HAS_OUTPUT,forward
)";

std::optional<TermKind> parse_term_kind(std::string_view text) {
  if (text == "class") return TermKind::class_term;
  if (text == "relation") return TermKind::relation;
  if (text == "property") return TermKind::property;
  return std::nullopt;
}

bool canonical_exists(const SchemaDef& schema, const MappingEntry& e) {
  switch (e.kind) {
    case TermKind::class_term:
      return schema.find_class(e.canonical_term) != nullptr;
    case TermKind::relation:
      return schema.find_relation(e.canonical_term) != nullptr;
    case TermKind::property:
      return schema.declares_property(e.canonical_term);
  }
  return false;
}

std::string describe(const MappingEntry& e) {
  std::string out = e.source_ontology + ":" + e.source_term + " (" + std::string(to_string(e.kind)) + ") -> " +
                    e.canonical_term;
  if (e.kind == TermKind::relation) out += " [" + std::string(to_string(e.direction)) + "]";
  return out;
}

/// Resolves (term, kind) to a single entry, honouring the ontology filter.
class Resolver {
 public:
  Resolver(const MappingTable& table, std::optional<std::string_view> ontology) {
    for (const auto& e : table.entries) {
      if (ontology && e.source_ontology != *ontology) continue;
      by_term_[{e.source_term, e.kind}].push_back(&e);
    }
  }

  const MappingEntry* find(const std::string& term, TermKind kind) const {
    auto it = by_term_.find({term, kind});
    if (it == by_term_.end()) return nullptr;
    const MappingEntry* first = it->second.front();
    for (const auto* other : it->second) {
      if (other->canonical_term != first->canonical_term || other->direction != first->direction) {
        throw MappingError("term '" + term + "' (" + std::string(to_string(kind)) +
                           ") maps to divergent targets: " + describe(*first) + " vs " + describe(*other));
      }
    }
    return first;
  }

 private:
  std::map<std::pair<std::string, TermKind>, std::vector<const MappingEntry*>> by_term_;
};

}  // namespace

std::string_view to_string(TermKind kind) {
  switch (kind) {
    case TermKind::class_term:
      return "class";
    case TermKind::relation:
      return "relation";
    case TermKind::property:
      return "property";
  }
  return "class";
}

std::string_view to_string(MappingDirection direction) {
  return direction == MappingDirection::forward ? "forward" : "reverse";
}

std::string_view to_string(Conflict::Kind kind) {
  switch (kind) {
    case Conflict::Kind::duplicate_source_term:
      return "duplicate_source_term";
    case Conflict::Kind::divergent_targets:
      return "divergent_targets";
    case Conflict::Kind::unknown_canonical_term:
      return "unknown_canonical_term";
  }
  return "unknown";
}

const MappingEntry* MappingTable::lookup(std::string_view ontology, std::string_view term, TermKind kind) const {
  for (const auto& e : entries) {
    if (e.source_ontology == ontology && e.source_term == term && e.kind == kind) return &e;
  }
  return nullptr;
}

std::set<std::string> MappingTable::ontologies() const {
  std::set<std::string> out;
  for (const auto& e : entries) out.insert(e.source_ontology);
  return out;
}

const MappingTable& builtin_mappings() {
  static const MappingTable table = parse_mappings(kBuiltinMappings);
  return table;
}

MappingTable parse_mappings(std::string_view csv_text) {
  const auto records = csv::parse(csv_text);
  if (records.empty()) throw FormatError(1, "missing header; expected '" + std::string(kMappingHeader) + "'");
  if (csv::join(records.front().fields) != kMappingHeader) {
    throw FormatError(records.front().line, "wrong header; expected '" + std::string(kMappingHeader) + "'");
  }
  MappingTable table;
  std::set<std::tuple<std::string, std::string, TermKind>> keys;
  for (std::size_t i = 1; i < records.size(); ++i) {
    const auto& rec = records[i];
    if (rec.fields.size() != 5) {
      throw FormatError(rec.line, "expected 5 fields, found " + std::to_string(rec.fields.size()));
    }
    MappingEntry e;
    e.source_ontology = rec.fields[0];
    e.source_term = rec.fields[1];
    e.canonical_term = rec.fields[3];
    if (e.source_ontology.empty() || e.source_term.empty() || e.canonical_term.empty()) {
      throw FormatError(rec.line, "source_ontology, source_term and canonical_term must be non-empty");
    }
    const auto kind = parse_term_kind(rec.fields[2]);
    if (!kind) throw FormatError(rec.line, "kind must be class, relation or property, got '" + rec.fields[2] + "'");
    e.kind = *kind;
    const auto& dir = rec.fields[4];
    if (dir == "reverse") {
      if (e.kind != TermKind::relation) {
        throw FormatError(rec.line, "direction 'reverse' is only valid for relation rows");
      }
      e.direction = MappingDirection::reverse;
    } else if (dir == "forward") {
      if (e.kind != TermKind::relation) {
        throw FormatError(rec.line, "direction must be blank for " + std::string(to_string(e.kind)) + " rows");
      }
    } else if (!dir.empty()) {
      throw FormatError(rec.line, "direction must be forward, reverse or blank, got '" + dir + "'");
    }
    if (!keys.emplace(e.source_ontology, e.source_term, e.kind).second) {
      throw FormatError(rec.line, "duplicate mapping for (" + e.source_ontology + ", " + e.source_term + ", " +
                                      std::string(to_string(e.kind)) + ")");
    }
    table.entries.push_back(std::move(e));
  }
  return table;
}

std::string format_mappings(const MappingTable& table) {
  std::string out = std::string(kMappingHeader) + "\n";
  for (const auto& e : table.entries) {
    out += csv::join({e.source_ontology, e.source_term, std::string(to_string(e.kind)), e.canonical_term,
                      e.kind == TermKind::relation ? std::string(to_string(e.direction)) : std::string()});
    out += '\n';
  }
  return out;
}

std::vector<Conflict> detect_conflicts(const MappingTable& table, const SchemaDef& schema) {
  std::vector<Conflict> out;

  std::map<std::tuple<std::string, std::string, TermKind>, std::vector<const MappingEntry*>> by_key;
  std::map<std::pair<std::string, TermKind>, std::vector<const MappingEntry*>> by_term;
  for (const auto& e : table.entries) {
    by_key[{e.source_ontology, e.source_term, e.kind}].push_back(&e);
    by_term[{e.source_term, e.kind}].push_back(&e);
  }

  for (const auto& [key, group] : by_key) {
    if (group.size() < 2) continue;
    Conflict c{Conflict::Kind::duplicate_source_term, {}, {}};
    for (const auto* e : group) c.entries.push_back(*e);
    c.detail = std::get<0>(key) + " declares '" + std::get<1>(key) + "' (" +
               std::string(to_string(std::get<2>(key))) + ") " + std::to_string(group.size()) + " times";
    out.push_back(std::move(c));
  }

  for (const auto& [key, group] : by_term) {
    std::set<std::pair<std::string, MappingDirection>> targets;
    for (const auto* e : group) targets.emplace(e->canonical_term, e->direction);
    if (targets.size() < 2) continue;
    Conflict c{Conflict::Kind::divergent_targets, {}, {}};
    for (const auto* e : group) c.entries.push_back(*e);
    c.detail = "'" + key.first + "' (" + std::string(to_string(key.second)) + ") maps to " +
               std::to_string(targets.size()) + " different targets";
    out.push_back(std::move(c));
  }

  for (const auto& e : table.entries) {
    if (canonical_exists(schema, e)) continue;
    out.push_back({Conflict::Kind::unknown_canonical_term, {e},
                   describe(e) + ": target is not declared by schema " + schema.version});
  }
  return out;
}

TranslationResult translate_graph(const Graph& graph, const MappingTable& table, const SchemaDef& schema,
                                  std::optional<std::string_view> ontology) {
  for (const auto& e : table.entries) {
    if (ontology && e.source_ontology != *ontology) continue;
    if (!canonical_exists(schema, e)) {
      throw MappingError("unknown_canonical_term: " + describe(e) + " targets a term schema " + schema.version +
                         " does not declare");
    }
  }
  const Resolver resolver(table, ontology);
  TranslationResult result;
  TranslationReport& report = result.report;

  auto rewrite_props = [&](const PropertyMap& props, const std::string& who) {
    PropertyMap out;
    // Keys that are not remapped claim their slot first, so an existing
    // canonical key keeps its value when a source key maps onto it.
    std::vector<std::pair<std::string, const PropertyValue*>> mapped;
    for (const auto& [key, value] : props) {
      if (const auto* e = resolver.find(key, TermKind::property)) {
        mapped.emplace_back(e->canonical_term, &value);
        ++report.properties_rewritten;
      } else {
        if (!schema.declares_property(key)) report.untranslated.insert("prop:" + key);
        out.emplace(key, value);
      }
    }
    for (const auto& [key, value] : mapped) {
      if (!out.emplace(key, *value).second) {
        report.collisions.push_back(who + ": mapped property '" + key + "' collides with an existing value; kept existing");
      }
    }
    return out;
  };

  for (NodeId id : graph.node_ids()) {
    const auto node = *graph.node(id);
    const auto labels = node.labels();
    std::set<std::string> passthrough;
    std::vector<std::string> mapped;
    for (auto label : labels) {
      const std::string l(label);
      if (const auto* e = resolver.find(l, TermKind::class_term)) {
        mapped.push_back(e->canonical_term);
        ++report.labels_rewritten;
      } else {
        if (!schema.find_class(l)) report.untranslated.insert("label:" + l);
        passthrough.insert(l);
      }
    }
    std::set<std::string> out_labels = passthrough;
    for (const auto& c : mapped) {
      if (!out_labels.insert(c).second && passthrough.contains(c)) {
        report.collisions.push_back(to_string(id) + ": mapped label '" + c +
                                    "' already present; source label dropped");
      }
    }
    const std::vector<std::string> label_vec(out_labels.begin(), out_labels.end());
    result.graph.insert_node(id, label_vec, rewrite_props(node.props(), to_string(id)));
  }

  for (EdgeId id : graph.edge_ids()) {
    const auto edge = *graph.edge(id);
    std::string rel(edge.rel_type());
    NodeId src = edge.src();
    NodeId dst = edge.dst();
    if (const auto* e = resolver.find(rel, TermKind::relation)) {
      rel = e->canonical_term;
      ++report.relations_rewritten;
      if (e->direction == MappingDirection::reverse) {
        std::swap(src, dst);
        ++report.edges_reversed;
      }
    } else if (!schema.find_relation(rel)) {
      report.untranslated.insert("rel:" + rel);
    }
    result.graph.insert_edge(id, rel, src, dst, rewrite_props(edge.props(), to_string(id)));
  }

  result.graph.reserve_ids(graph.next_node_id(), graph.next_edge_id());
  return result;
}

}  // namespace lcag
