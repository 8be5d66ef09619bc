#include "lcag/ontology.hpp"

#include <algorithm>
#include <sstream>
#include <tuple>

namespace lcag {

namespace {

constexpr std::string_view kBuiltinSchema = R"(# Canonical LCA inventory schema.
schema lcag-core/1

class Workflow requires id:text optional boundary:text, valid_from:text, valid_to:text, title:text
class Activity requires name:text optional stage:text, workflow_id:text, step_index:int enum stage {production, transportation, usage, disposal}
class Flow requires name:text, kind:text enum kind {elementary, intermediate, product, waste}
class FlowQuantity requires name:text optional unit:text
class Agent requires name:text optional agent_id:text
class FunctionalUnit requires description:text optional amount:quantity, workflow_id:text
class ImpactCategory requires name:text optional method:text, unit:text
class Location requires code:text optional name:text
class Reference requires reference_id:text, author:text, title:text optional year:int, doi:text
class Parameter requires name:text optional value:real, text:text, owner:text

rel HAS_STEP Workflow -> Activity requires index:int
rel NEXT Activity -> Activity
rel HAS_INPUT Activity -> Flow requires amount:quantity
rel HAS_OUTPUT Activity -> Flow requires amount:quantity
rel HAS_QUANTITY Flow -> FlowQuantity
rel PERFORMS Agent -> Activity
rel LOCATED_IN Workflow|Activity -> Location
rel HAS_REFERENCE Workflow -> Reference
rel HAS_FUNCTIONAL_UNIT Workflow -> FunctionalUnit
rel CONTRIBUTES_TO Flow|Activity -> ImpactCategory
rel HAS_PARAMETER Activity|Agent -> Parameter
)";

// Tokenizer for one DSL line ---------------------------------------------------

struct Token {
  enum class Kind { word, punct, end };
  Kind kind;
  std::string text;
  std::size_t column;
};

bool word_char(char c) {
  return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_' || c == '.' ||
         c == '/' || c == '-';
}

std::vector<Token> tokenize(std::string_view line, std::size_t line_no) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    const char c = line[i];
    if (c == ' ' || c == '\t' || c == '\r') {
      ++i;
    } else if (c == '#') {
      break;
    } else if (c == '-' && i + 1 < line.size() && line[i + 1] == '>') {
      out.push_back({Token::Kind::punct, "->", i + 1});
      i += 2;
    } else if (c == ':' || c == ',' || c == '{' || c == '}' || c == '|') {
      out.push_back({Token::Kind::punct, std::string(1, c), i + 1});
      ++i;
    } else if (c == '"') {
      const std::size_t start = i++;
      std::string text;
      while (i < line.size() && line[i] != '"') text += line[i++];
      if (i >= line.size()) throw SchemaError(line_no, "unterminated quoted value at column " + std::to_string(start + 1));
      ++i;
      out.push_back({Token::Kind::word, std::move(text), start + 1});
    } else if (word_char(c)) {
      const std::size_t start = i;
      while (i < line.size() && word_char(line[i]) && !(line[i] == '-' && i + 1 < line.size() && line[i + 1] == '>')) {
        ++i;
      }
      out.push_back({Token::Kind::word, std::string(line.substr(start, i - start)), start + 1});
    } else {
      throw SchemaError(line_no, std::string("unexpected character '") + c + "' at column " + std::to_string(i + 1));
    }
  }
  out.push_back({Token::Kind::end, "", line.size() + 1});
  return out;
}

class LineCursor {
 public:
  LineCursor(std::vector<Token> tokens, std::size_t line) : tokens_(std::move(tokens)), line_(line) {}

  const Token& peek() const { return tokens_[pos_]; }
  bool at_end() const { return peek().kind == Token::Kind::end; }
  bool peek_punct(std::string_view p) const { return peek().kind == Token::Kind::punct && peek().text == p; }
  bool peek_word(std::string_view w) const { return peek().kind == Token::Kind::word && peek().text == w; }

  [[noreturn]] void fail(const std::string& expected) const {
    const Token& t = peek();
    const std::string found = t.kind == Token::Kind::end ? "end of line" : "'" + t.text + "'";
    throw SchemaError(line_, "expected " + expected + " but found " + found + " at column " + std::to_string(t.column));
  }

  std::string word(const std::string& what) {
    if (peek().kind != Token::Kind::word) fail(what);
    return tokens_[pos_++].text;
  }

  void punct(std::string_view p) {
    if (!peek_punct(p)) fail("'" + std::string(p) + "'");
    ++pos_;
  }

  std::size_t line() const { return line_; }

 private:
  std::vector<Token> tokens_;
  std::size_t line_;
  std::size_t pos_ = 0;
};

std::vector<PropertySpec> parse_prop_list(LineCursor& c) {
  std::vector<PropertySpec> out;
  while (true) {
    PropertySpec spec;
    spec.key = c.word("property key");
    c.punct(":");
    const auto kind_text = c.word("value kind");
    const auto kind = parse_value_kind(kind_text);
    if (!kind) {
      throw SchemaError(c.line(), "unknown value kind '" + kind_text +
                                      "' (expected text|int|real|bool|realarray|quantity)");
    }
    spec.kind = *kind;
    out.push_back(std::move(spec));
    if (!c.peek_punct(",")) break;
    c.punct(",");
  }
  return out;
}

std::set<std::string> parse_class_union(LineCursor& c) {
  std::set<std::string> out;
  out.insert(c.word("class name"));
  while (c.peek_punct("|")) {
    c.punct("|");
    out.insert(c.word("class name"));
  }
  return out;
}

ClassDef parse_class(LineCursor& c) {
  ClassDef def;
  def.name = c.word("class name");
  while (!c.at_end()) {
    if (c.peek_word("requires")) {
      c.word("requires");
      auto props = parse_prop_list(c);
      def.required_props.insert(def.required_props.end(), props.begin(), props.end());
    } else if (c.peek_word("optional")) {
      c.word("optional");
      auto props = parse_prop_list(c);
      def.optional_props.insert(def.optional_props.end(), props.begin(), props.end());
    } else if (c.peek_word("enum")) {
      c.word("enum");
      const auto key = c.word("enum property key");
      c.punct("{");
      std::set<std::string> values;
      values.insert(c.word("enum value"));
      while (c.peek_punct(",")) {
        c.punct(",");
        values.insert(c.word("enum value"));
      }
      c.punct("}");
      if (!def.enum_constraints.emplace(key, std::move(values)).second) {
        throw SchemaError(c.line(), "duplicate enum constraint on '" + key + "'");
      }
    } else {
      c.fail("'requires', 'optional' or 'enum'");
    }
  }
  return def;
}

RelationDef parse_relation(LineCursor& c) {
  RelationDef def;
  def.name = c.word("relation type");
  def.domain = parse_class_union(c);
  c.punct("->");
  def.range = parse_class_union(c);
  while (!c.at_end()) {
    if (!c.peek_word("requires")) c.fail("'requires'");
    c.word("requires");
    auto props = parse_prop_list(c);
    def.required_props.insert(def.required_props.end(), props.begin(), props.end());
  }
  return def;
}

void check_schema_impl(const SchemaDef& schema, const std::vector<std::size_t>* class_lines,
                       const std::vector<std::size_t>* rel_lines) {
  auto line_of = [](const std::vector<std::size_t>* lines, std::size_t i) -> std::size_t {
    return lines ? (*lines)[i] : 0;
  };
  std::set<std::string_view> class_names;
  for (std::size_t i = 0; i < schema.classes.size(); ++i) {
    const auto& cls = schema.classes[i];
    if (cls.name.empty()) throw SchemaError(line_of(class_lines, i), "class name must be non-empty");
    if (!class_names.insert(cls.name).second) {
      throw SchemaError(line_of(class_lines, i), "duplicate class declaration '" + cls.name + "'");
    }
    std::set<std::string_view> keys;
    for (const auto* list : {&cls.required_props, &cls.optional_props}) {
      for (const auto& p : *list) {
        if (!keys.insert(p.key).second) {
          throw SchemaError(line_of(class_lines, i), "class " + cls.name + " declares property '" + p.key + "' twice");
        }
      }
    }
    for (const auto& [key, values] : cls.enum_constraints) {
      const auto* spec = cls.find_property(key);
      if (spec == nullptr) {
        throw SchemaError(line_of(class_lines, i),
                          "class " + cls.name + " constrains undeclared property '" + key + "'");
      }
      if (spec->kind != ValueKind::text) {
        throw SchemaError(line_of(class_lines, i), "enum constraint on non-text property '" + key + "'");
      }
      if (values.empty()) throw SchemaError(line_of(class_lines, i), "enum constraint on '" + key + "' is empty");
    }
  }
  std::set<std::string_view> rel_names;
  for (std::size_t i = 0; i < schema.relations.size(); ++i) {
    const auto& rel = schema.relations[i];
    if (rel.name.empty()) throw SchemaError(line_of(rel_lines, i), "relation name must be non-empty");
    if (!rel_names.insert(rel.name).second) {
      throw SchemaError(line_of(rel_lines, i), "duplicate relation declaration '" + rel.name + "'");
    }
    if (rel.domain.empty() || rel.range.empty()) {
      throw SchemaError(line_of(rel_lines, i), "relation " + rel.name + " needs a domain and a range");
    }
    for (const auto* side : {&rel.domain, &rel.range}) {
      for (const auto& cls : *side) {
        if (!class_names.contains(cls)) {
          throw SchemaError(line_of(rel_lines, i),
                            "relation " + rel.name + " references undeclared class '" + cls + "'");
        }
      }
    }
    std::set<std::string_view> keys;
    for (const auto& p : rel.required_props) {
      if (!keys.insert(p.key).second) {
        throw SchemaError(line_of(rel_lines, i), "relation " + rel.name + " declares property '" + p.key + "' twice");
      }
    }
  }
}

std::string join_set(const std::set<std::string>& items, std::string_view sep) {
  std::string out;
  for (const auto& item : items) {
    if (!out.empty()) out += sep;
    out += item;
  }
  return out;
}

std::string format_props(const std::vector<PropertySpec>& props) {
  std::string out;
  for (const auto& p : props) {
    if (!out.empty()) out += ", ";
    out += p.key + ":" + std::string(to_string(p.kind));
  }
  return out;
}

bool needs_quotes(const std::string& word) {
  return word.empty() || !std::all_of(word.begin(), word.end(), word_char) || word.find("->") != std::string::npos;
}

}  // namespace

const PropertySpec* ClassDef::find_property(std::string_view key) const {
  for (const auto* list : {&required_props, &optional_props}) {
    for (const auto& p : *list) {
      if (p.key == key) return &p;
    }
  }
  return nullptr;
}

const ClassDef* SchemaDef::find_class(std::string_view name) const {
  for (const auto& c : classes) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

const RelationDef* SchemaDef::find_relation(std::string_view name) const {
  for (const auto& r : relations) {
    if (r.name == name) return &r;
  }
  return nullptr;
}

bool SchemaDef::declares_property(std::string_view key) const {
  for (const auto& c : classes) {
    if (c.find_property(key)) return true;
  }
  for (const auto& r : relations) {
    for (const auto& p : r.required_props) {
      if (p.key == key) return true;
    }
  }
  return false;
}

void check_schema(const SchemaDef& schema) { check_schema_impl(schema, nullptr, nullptr); }

SchemaDef parse_schema(std::string_view text) {
  SchemaDef schema;
  std::vector<std::size_t> class_lines;
  std::vector<std::size_t> rel_lines;
  bool have_version = false;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto nl = text.find('\n', start);
    const std::string_view line = text.substr(start, nl == std::string_view::npos ? nl : nl - start);
    ++line_no;

    LineCursor c(tokenize(line, line_no), line_no);
    if (!c.at_end()) {
      const auto directive = c.word("'class', 'rel' or 'schema'");
      if (directive == "class") {
        schema.classes.push_back(parse_class(c));
        class_lines.push_back(line_no);
      } else if (directive == "rel") {
        schema.relations.push_back(parse_relation(c));
        rel_lines.push_back(line_no);
      } else if (directive == "schema") {
        if (have_version) throw SchemaError(line_no, "duplicate schema version directive");
        schema.version = c.word("schema version");
        if (!c.at_end()) c.fail("end of line");
        have_version = true;
      } else {
        throw SchemaError(line_no, "unknown directive '" + directive + "' (expected class, rel or schema)");
      }
    }
    if (nl == std::string_view::npos) break;
    start = nl + 1;
  }
  check_schema_impl(schema, &class_lines, &rel_lines);
  return schema;
}

std::string format_schema(const SchemaDef& schema) {
  std::ostringstream out;
  if (!schema.version.empty()) out << "schema " << schema.version << '\n';
  for (const auto& cls : schema.classes) {
    out << "class " << cls.name;
    if (!cls.required_props.empty()) out << " requires " << format_props(cls.required_props);
    if (!cls.optional_props.empty()) out << " optional " << format_props(cls.optional_props);
    for (const auto& [key, values] : cls.enum_constraints) {
      out << " enum " << key << " {";
      bool first = true;
      for (const auto& v : values) {
        if (!first) out << ", ";
        first = false;
        if (needs_quotes(v)) {
          out << '"' << v << '"';
        } else {
          out << v;
        }
      }
      out << '}';
    }
    out << '\n';
  }
  for (const auto& rel : schema.relations) {
    out << "rel " << rel.name << ' ' << join_set(rel.domain, "|") << " -> " << join_set(rel.range, "|");
    if (!rel.required_props.empty()) out << " requires " << format_props(rel.required_props);
    out << '\n';
  }
  return out.str();
}

const SchemaDef& builtin_schema() {
  static const SchemaDef schema = parse_schema(kBuiltinSchema);
  return schema;
}

std::string_view to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::unknown_label:
      return "unknown_label";
    case ViolationKind::unknown_relation:
      return "unknown_relation";
    case ViolationKind::domain_violation:
      return "domain_violation";
    case ViolationKind::range_violation:
      return "range_violation";
    case ViolationKind::missing_required_property:
      return "missing_required_property";
    case ViolationKind::bad_enum_value:
      return "bad_enum_value";
    case ViolationKind::bad_value_kind:
      return "bad_value_kind";
  }
  return "unknown";
}

namespace {

std::string kinds_text(const std::set<ValueKind>& kinds) {
  std::string out;
  for (auto k : kinds) {
    if (!out.empty()) out += "|";
    out += to_string(k);
  }
  return out;
}

void check_props(const PropertyMap& props, const std::map<std::string, std::set<ValueKind>>& required,
                 const std::map<std::string, std::set<ValueKind>>& optional, const EntityId& target,
                 std::vector<Violation>& out) {
  for (const auto& [key, kinds] : required) {
    auto it = props.find(key);
    if (it == props.end()) {
      out.push_back({ViolationKind::missing_required_property, target,
                     "missing required property '" + key + "' (" + kinds_text(kinds) + ")"});
    } else if (!kinds.contains(kind_of(it->second))) {
      out.push_back({ViolationKind::bad_value_kind, target,
                     "property '" + key + "' is " + std::string(to_string(kind_of(it->second))) + ", expected " +
                         kinds_text(kinds)});
    }
  }
  for (const auto& [key, kinds] : optional) {
    if (required.contains(key)) continue;
    auto it = props.find(key);
    if (it != props.end() && !kinds.contains(kind_of(it->second))) {
      out.push_back({ViolationKind::bad_value_kind, target,
                     "property '" + key + "' is " + std::string(to_string(kind_of(it->second))) + ", expected " +
                         kinds_text(kinds)});
    }
  }
}

std::string labels_text(const std::vector<std::string_view>& labels) {
  if (labels.empty()) return "node has no labels";
  std::string out = "no schema class for labels {";
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (i) out += ", ";
    out += labels[i];
  }
  return out + "}";
}

}  // namespace

std::vector<Violation> validate_graph(const Graph& graph, const SchemaDef& schema) {
  std::vector<Violation> out;

  for (NodeId id : graph.node_ids()) {
    const auto node = *graph.node(id);
    const auto labels = node.labels();
    std::vector<const ClassDef*> classes;
    for (auto label : labels) {
      if (const auto* cls = schema.find_class(label)) classes.push_back(cls);
    }
    if (classes.empty()) {
      out.push_back({ViolationKind::unknown_label, id, labels_text(labels)});
      continue;
    }
    std::map<std::string, std::set<ValueKind>> required;
    std::map<std::string, std::set<ValueKind>> optional;
    for (const auto* cls : classes) {
      for (const auto& p : cls->required_props) required[p.key].insert(p.kind);
      for (const auto& p : cls->optional_props) optional[p.key].insert(p.kind);
    }
    check_props(node.props(), required, optional, id, out);

    std::set<std::string> enum_reported;
    for (const auto* cls : classes) {
      for (const auto& [key, allowed] : cls->enum_constraints) {
        const auto* value = node.property(key);
        if (value == nullptr || enum_reported.contains(key)) continue;
        const auto* text = std::get_if<std::string>(value);
        if (text == nullptr) continue;  // reported as bad_value_kind
        if (!allowed.contains(*text)) {
          enum_reported.insert(key);
          out.push_back({ViolationKind::bad_enum_value, id,
                         "property '" + key + "' = '" + *text + "' is not one of {" + join_set(allowed, ", ") +
                             "} (class " + cls->name + ")"});
        }
      }
    }
  }

  for (EdgeId id : graph.edge_ids()) {
    const auto edge = *graph.edge(id);
    const auto* rel = schema.find_relation(edge.rel_type());
    if (rel == nullptr) {
      out.push_back({ViolationKind::unknown_relation, id,
                     "relationship type '" + std::string(edge.rel_type()) + "' is not declared"});
      continue;
    }
    auto carries_any = [&](NodeId n, const std::set<std::string>& classes) {
      const auto node = *graph.node(n);
      return std::any_of(classes.begin(), classes.end(), [&](const std::string& c) { return node.has_label(c); });
    };
    if (!carries_any(edge.src(), rel->domain)) {
      out.push_back({ViolationKind::domain_violation, id,
                     rel->name + " source " + to_string(edge.src()) + " is not one of {" + join_set(rel->domain, ", ") +
                         "}"});
    }
    if (!carries_any(edge.dst(), rel->range)) {
      out.push_back({ViolationKind::range_violation, id,
                     rel->name + " destination " + to_string(edge.dst()) + " is not one of {" +
                         join_set(rel->range, ", ") + "}"});
    }
    std::map<std::string, std::set<ValueKind>> required;
    for (const auto& p : rel->required_props) required[p.key].insert(p.kind);
    check_props(edge.props(), required, {}, id, out);
  }

  std::sort(out.begin(), out.end(), [](const Violation& a, const Violation& b) {
    return std::tie(a.target, a.kind, a.detail) < std::tie(b.target, b.kind, b.detail);
  });
  return out;
}

}  // namespace lcag
