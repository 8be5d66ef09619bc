#pragma once

#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "lcag/error.hpp"
#include "lcag/graph.hpp"

namespace lcag {

struct PropertySpec {
  std::string key;
  ValueKind kind = ValueKind::text;
  bool operator==(const PropertySpec&) const = default;
};

/// A node class; its name is the node label it governs.
struct ClassDef {
  std::string name;
  std::vector<PropertySpec> required_props;
  std::vector<PropertySpec> optional_props;
  std::map<std::string, std::set<std::string>> enum_constraints;

  const PropertySpec* find_property(std::string_view key) const;
  bool operator==(const ClassDef&) const = default;
};

/// An edge type with the classes its endpoints must carry.
struct RelationDef {
  std::string name;
  std::set<std::string> domain;
  std::set<std::string> range;
  std::vector<PropertySpec> required_props;

  bool operator==(const RelationDef&) const = default;
};

struct SchemaDef {
  std::string version;
  std::vector<ClassDef> classes;
  std::vector<RelationDef> relations;

  const ClassDef* find_class(std::string_view name) const;
  const RelationDef* find_relation(std::string_view name) const;
  /// True when any class or relation declares the key.
  bool declares_property(std::string_view key) const;

  bool operator==(const SchemaDef&) const = default;
};

/// Raised for schema documents that are not internally closed.
class SchemaError : public FormatError {
 public:
  using FormatError::FormatError;
};

/// Throws SchemaError on duplicate names, dangling domain/range classes, or
/// enum constraints on undeclared keys.
void check_schema(const SchemaDef& schema);

/// The canonical harmonized LCA schema.
///
/// Classes: Workflow, Activity, Flow, FlowQuantity, Agent, FunctionalUnit,
/// ImpactCategory, Location, Reference, Parameter. Relations: HAS_STEP, NEXT,
/// HAS_INPUT, HAS_OUTPUT, HAS_QUANTITY, PERFORMS, LOCATED_IN, HAS_REFERENCE,
/// HAS_FUNCTIONAL_UNIT, CONTRIBUTES_TO, HAS_PARAMETER.
const SchemaDef& builtin_schema();

/// Line-oriented DSL, `#` starts a comment:
///
///   schema <version>
///   class <Name> [requires k:kind, ...] [optional k:kind, ...] [enum k {v1,v2}]
///   rel <TYPE> <Class>[|<Class>] -> <Class>[|<Class>] [requires k:kind, ...]
///
/// kinds: text|int|real|bool|realarray|quantity. Errors carry line numbers.
SchemaDef parse_schema(std::string_view text);

/// Renders a schema in the DSL; parse_schema(format_schema(s)) == s.
std::string format_schema(const SchemaDef& schema);

enum class ViolationKind {
  unknown_label,
  unknown_relation,
  domain_violation,
  range_violation,
  missing_required_property,
  bad_enum_value,
  bad_value_kind,
};

std::string_view to_string(ViolationKind kind);

struct Violation {
  ViolationKind kind;
  EntityId target;
  std::string detail;

  bool operator==(const Violation&) const = default;
};

/// Checks every node and edge. Nodes validate against the union of the
/// classes matching their labels; a node with no schema-known label yields a
/// single unknown_label. Output is sorted by entity (nodes first, by id), then
/// kind, then detail.
std::vector<Violation> validate_graph(const Graph& graph, const SchemaDef& schema);

}  // namespace lcag
