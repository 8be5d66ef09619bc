#pragma once

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "lcag/graph.hpp"
#include "lcag/ontology.hpp"

namespace lcag {

enum class TermKind { class_term, relation, property };
enum class MappingDirection { forward, reverse };

std::string_view to_string(TermKind kind);
std::string_view to_string(MappingDirection direction);

/// Maps one source-ontology term onto the canonical schema. `reverse` is
/// only meaningful for relations and swaps the edge endpoints.
struct MappingEntry {
  std::string source_ontology;
  std::string source_term;
  TermKind kind = TermKind::class_term;
  std::string canonical_term;
  MappingDirection direction = MappingDirection::forward;

  bool operator==(const MappingEntry&) const = default;
};

/// Entries in declaration order. parse_mappings guarantees unique
/// (source_ontology, source_term, kind) keys; hand-built tables may not, and
/// detect_conflicts reports them.
struct MappingTable {
  std::vector<MappingEntry> entries;

  const MappingEntry* lookup(std::string_view ontology, std::string_view term, TermKind kind) const;
  std::set<std::string> ontologies() const;
  bool operator==(const MappingTable&) const = default;
};

/// Term mappings for the source ontologies this project harmonizes:
/// Wang2022, Zhang2015, Kuczenski2016, LciO, Ghose2022 and Saad2023.
const MappingTable& builtin_mappings();

/// Header `source_ontology,source_term,kind,canonical_term,direction`;
/// direction is blank for class/property rows and defaults to forward for
/// relations. Throws FormatError with the offending line number.
MappingTable parse_mappings(std::string_view csv_text);
std::string format_mappings(const MappingTable& table);

struct Conflict {
  enum class Kind { duplicate_source_term, divergent_targets, unknown_canonical_term };
  Kind kind;
  std::vector<MappingEntry> entries;
  std::string detail;
};

std::string_view to_string(Conflict::Kind kind);

/// duplicate_source_term: two entries share (ontology, term, kind).
/// divergent_targets: one (term, kind) maps to different targets or
///   directions, across any ontologies.
/// unknown_canonical_term: the target is not declared by `schema`.
std::vector<Conflict> detect_conflicts(const MappingTable& table, const SchemaDef& schema = builtin_schema());

struct TranslationReport {
  /// Terms left as-is that the schema does not know, as "label:X",
  /// "rel:X" or "prop:X".
  std::set<std::string> untranslated;
  /// Per-entity notes where a rewritten term met an existing canonical one.
  std::vector<std::string> collisions;
  std::size_t labels_rewritten = 0;
  std::size_t relations_rewritten = 0;
  std::size_t edges_reversed = 0;
  std::size_t properties_rewritten = 0;
};

struct TranslationResult {
  Graph graph;
  TranslationReport report;
};

/// Rewrites labels, relationship types and property keys through the table.
/// Node and edge ids are preserved; unmapped terms pass through. When
/// `ontology` is set only that ontology's entries apply. Throws MappingError
/// if the table targets a term the schema lacks, or if a term used by the
/// graph maps to divergent targets.
TranslationResult translate_graph(const Graph& graph, const MappingTable& table,
                                  const SchemaDef& schema = builtin_schema(),
                                  std::optional<std::string_view> ontology = std::nullopt);

}  // namespace lcag
