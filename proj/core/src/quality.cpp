#include "lcag/quality.hpp"

#include <algorithm>
#include <cstdio>
#include <set>

#include "lcag/error.hpp"
#include "lcag/snapshot.hpp"
#include "lcag/triples.hpp"
#include "value_codec.hpp"

namespace lcag {

namespace {

const std::array<std::string_view, 4> kStages = {"production", "transportation", "usage", "disposal"};

QualityDimension finish(std::string name, std::size_t denominator, std::vector<std::string> offenders) {
  QualityDimension d;
  d.name = std::move(name);
  d.denominator = denominator;
  d.numerator = denominator - offenders.size();
  d.ratio = denominator == 0 ? 1.0 : static_cast<double>(d.numerator) / static_cast<double>(denominator);
  d.details = std::move(offenders);
  return d;
}

QualityDimension accuracy_proxy(const Graph& graph, const SchemaDef& schema) {
  std::set<std::string> terms;
  std::vector<std::string> unknown;
  auto see = [&](std::string term, bool known) {
    if (terms.insert(term).second && !known) unknown.push_back(std::move(term));
  };
  for (NodeId id : graph.node_ids()) {
    auto n = graph.node(id);
    for (auto label : n->labels()) see("label:" + std::string(label), schema.find_class(label) != nullptr);
    for (const auto& [key, v] : n->props()) see("prop:" + key, schema.declares_property(key));
  }
  for (EdgeId id : graph.edge_ids()) {
    auto e = graph.edge(id);
    see("rel:" + std::string(e->rel_type()), schema.find_relation(e->rel_type()) != nullptr);
    for (const auto& [key, v] : e->props()) see("prop:" + key, schema.declares_property(key));
  }
  std::sort(unknown.begin(), unknown.end());
  return finish("accuracy_proxy", terms.size(), std::move(unknown));
}

QualityDimension completeness(const Graph& graph) {
  auto workflows = graph.nodes_with_label("Workflow");
  std::vector<std::string> incomplete;
  for (NodeId w : workflows) {
    std::set<std::string> stages;
    graph.for_each_neighbor(w, Direction::out, "HAS_STEP", [&](EdgeId, NodeId activity) {
      const PropertyValue* stage = graph.node(activity)->property("stage");
      if (stage != nullptr) {
        if (const auto* s = std::get_if<std::string>(stage)) stages.insert(*s);
      }
    });
    bool covered = true;
    for (auto s : kStages) covered = covered && stages.contains(std::string(s));
    if (!covered) incomplete.push_back(to_string(w));
  }
  return finish("completeness", workflows.size(), std::move(incomplete));
}

QualityDimension consistency(const Graph& graph, const SchemaDef& schema) {
  std::set<EntityId> offenders;
  for (const auto& v : validate_graph(graph, schema)) offenders.insert(v.target);
  std::vector<std::string> details;
  for (const auto& id : offenders) details.push_back(to_string(id));
  return finish("consistency", graph.node_count() + graph.edge_count(), std::move(details));
}

QualityDimension precision(const Graph& graph) {
  std::size_t exchanges = 0;
  std::vector<std::string> imprecise;
  for (EdgeId id : graph.edge_ids()) {
    auto e = graph.edge(id);
    if (e->rel_type() != "HAS_INPUT" && e->rel_type() != "HAS_OUTPUT") continue;
    ++exchanges;
    const PropertyValue* amount = e->property("amount");
    const auto* q = amount ? std::get_if<Quantity>(amount) : nullptr;
    if (q == nullptr || q->unit.empty()) imprecise.push_back(to_string(id));
  }
  return finish("precision", exchanges, std::move(imprecise));
}

QualityDimension traceability(const Graph& graph) {
  auto workflows = graph.nodes_with_label("Workflow");
  std::vector<std::string> untraced;
  for (NodeId w : workflows) {
    if (graph.neighbors(w, Direction::out, "HAS_REFERENCE").empty()) untraced.push_back(to_string(w));
  }
  return finish("traceability", workflows.size(), std::move(untraced));
}

const std::string* text_property(const NodeView& n, std::string_view key) {
  const PropertyValue* v = n.property(key);
  if (v == nullptr) return nullptr;
  const auto* s = std::get_if<std::string>(v);
  return s != nullptr && !s->empty() ? s : nullptr;
}

FairCheck findable(const Graph& graph) {
  FairCheck c{"findable", true, {}};
  auto workflows = graph.nodes_with_label("Workflow");
  if (workflows.empty()) c.reasons.push_back("no workflows");
  for (NodeId w : workflows) {
    auto n = graph.node(w);
    if (text_property(*n, "id") == nullptr) c.reasons.push_back(to_string(w) + " has no id");
    bool described = n->props().size() > (n->property("id") ? 1u : 0u) ||
                     !graph.neighbors(w, Direction::out, "LOCATED_IN").empty() ||
                     !graph.neighbors(w, Direction::out, "HAS_FUNCTIONAL_UNIT").empty();
    if (!described) c.reasons.push_back(to_string(w) + " has no metadata");
  }
  c.passed = c.reasons.empty();
  return c;
}

FairCheck accessible(const Graph& graph) {
  FairCheck c{"accessible", true, {}};
  try {
    if (read_snapshot(write_snapshot(graph)) != graph) c.reasons.push_back("snapshot does not read back equal");
  } catch (const Error& e) {
    c.reasons.push_back(std::string("snapshot export failed: ") + e.what());
  }
  c.passed = c.reasons.empty();
  return c;
}

FairCheck interoperable(const Graph& graph, const SchemaDef& schema) {
  FairCheck c{"interoperable", true, {}};
  auto violations = validate_graph(graph, schema);
  constexpr std::size_t kShown = 5;
  for (std::size_t i = 0; i < violations.size() && i < kShown; ++i) {
    const auto& v = violations[i];
    c.reasons.push_back(std::string(to_string(v.kind)) + " on " + to_string(v.target) + ": " + v.detail);
  }
  if (violations.size() > kShown) {
    c.reasons.push_back(std::to_string(violations.size() - kShown) + " more violations");
  }
  try {
    if (from_triples(to_triples(graph)) != graph) c.reasons.push_back("triple export does not round-trip");
  } catch (const Error& e) {
    c.reasons.push_back(std::string("triple export failed: ") + e.what());
  }
  c.passed = c.reasons.empty();
  return c;
}

FairCheck reusable(const Graph& graph, const QualityDimension& trace) {
  FairCheck c{"reusable (reproducibility)", true, {}};
  auto references = graph.nodes_with_label("Reference");
  if (references.empty()) c.reasons.push_back("no references");
  for (const auto& w : trace.details) c.reasons.push_back(w + " has no HAS_REFERENCE edge");
  for (NodeId r : references) {
    auto n = graph.node(r);
    if (text_property(*n, "author") == nullptr) c.reasons.push_back(to_string(r) + " has no author");
    if (text_property(*n, "title") == nullptr) c.reasons.push_back(to_string(r) + " has no title");
  }
  c.passed = c.reasons.empty();
  return c;
}

detail::ojson dimension_json(const QualityDimension& d) {
  detail::ojson j = detail::ojson::object();
  j["ratio"] = d.ratio;
  j["numerator"] = d.numerator;
  j["denominator"] = d.denominator;
  j["details"] = d.details;
  return j;
}

std::string ratio_text(double ratio) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", ratio);
  return buf;
}

}  // namespace

QualityReport score_quality(const Graph& graph, const SchemaDef& schema) {
  QualityReport r;
  r.accuracy_proxy = accuracy_proxy(graph, schema);
  r.completeness = completeness(graph);
  r.consistency = consistency(graph, schema);
  r.precision = precision(graph);
  r.traceability = traceability(graph);
  return r;
}

bool FairReport::all_passed() const {
  for (const auto* c : checks()) {
    if (!c->passed) return false;
  }
  return true;
}

FairReport fair_report(const Graph& graph, const SchemaDef& schema) {
  FairReport r;
  r.findable = findable(graph);
  r.accessible = accessible(graph);
  r.interoperable = interoperable(graph, schema);
  r.reusable = reusable(graph, traceability(graph));

  auto workflows = graph.nodes_with_label("Workflow");
  std::size_t licensed = 0;
  for (NodeId w : workflows) {
    if (text_property(*graph.node(w), "license") != nullptr) ++licensed;
  }
  r.notes.push_back("license recorded on " + std::to_string(licensed) + " of " + std::to_string(workflows.size()) +
                    " workflows");
  return r;
}

std::string to_text(const QualityReport& report) {
  std::string out;
  for (const auto* d : report.dimensions()) {
    out += d->name + ": " + ratio_text(d->ratio) + " (" + std::to_string(d->numerator) + "/" +
           std::to_string(d->denominator) + ")\n";
    for (const auto& x : d->details) out += "  - " + x + "\n";
  }
  return out;
}

std::string to_json(const QualityReport& report) {
  detail::ojson j = detail::ojson::object();
  for (const auto* d : report.dimensions()) j[d->name] = dimension_json(*d);
  return detail::dump_compact(j);
}

std::string to_text(const FairReport& report) {
  std::string out;
  for (const auto* c : report.checks()) {
    out += c->name + ": " + (c->passed ? "pass" : "fail") + "\n";
    for (const auto& reason : c->reasons) out += "  - " + reason + "\n";
  }
  for (const auto& n : report.notes) out += "note: " + n + "\n";
  return out;
}

std::string to_json(const FairReport& report) {
  detail::ojson j = detail::ojson::object();
  for (const auto* c : report.checks()) {
    detail::ojson check = detail::ojson::object();
    check["passed"] = c->passed;
    check["reasons"] = c->reasons;
    j[c->name] = check;
  }
  j["notes"] = report.notes;
  return detail::dump_compact(j);
}

}  // namespace lcag
