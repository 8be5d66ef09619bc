#include "lcag/triples.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>

#include "lcag/error.hpp"
#include "value_codec.hpp"

namespace lcag {

namespace {

constexpr std::string_view kScheme = "urn:lcag:";
constexpr std::string_view kNodePrefix = "urn:lcag:node:";
constexpr std::string_view kEdgePrefix = "urn:lcag:edge:";
constexpr std::string_view kLabelPrefix = "urn:lcag:label:";
constexpr std::string_view kPropPrefix = "urn:lcag:prop:";
constexpr std::string_view kRelPrefix = "urn:lcag:rel:";
constexpr std::string_view kDtPrefix = "urn:lcag:dt:";
constexpr std::string_view kMetaLabel = "urn:lcag:meta:label";
constexpr std::string_view kMetaKind = "urn:lcag:meta:kind";
constexpr std::string_view kMetaNode = "urn:lcag:meta:Node";
constexpr std::string_view kMetaSrc = "urn:lcag:meta:src";
constexpr std::string_view kMetaRel = "urn:lcag:meta:rel";
constexpr std::string_view kMetaDst = "urn:lcag:meta:dst";

bool unreserved(unsigned char c) {
  return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_' || c == '.' ||
         c == '~' || c == '-';
}

std::string percent_encode(std::string_view name) {
  static constexpr char kHex[] = "0123456789ABCDEF";
  std::string out;
  out.reserve(name.size());
  for (unsigned char c : name) {
    if (unreserved(c)) {
      out += static_cast<char>(c);
    } else {
      out += '%';
      out += kHex[c >> 4];
      out += kHex[c & 0xF];
    }
  }
  return out;
}

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  return -1;
}

std::string percent_decode(std::string_view segment) {
  std::string out;
  out.reserve(segment.size());
  for (std::size_t i = 0; i < segment.size(); ++i) {
    if (segment[i] != '%') {
      out += segment[i];
      continue;
    }
    if (i + 2 >= segment.size()) {
      throw IntegrityError("truncated percent escape in '" + std::string(segment) + "'");
    }
    const int hi = hex_value(segment[i + 1]);
    const int lo = hex_value(segment[i + 2]);
    if (hi < 0 || lo < 0) throw IntegrityError("bad percent escape in '" + std::string(segment) + "'");
    out += static_cast<char>(hi * 16 + lo);
    i += 2;
  }
  if (out.empty()) throw IntegrityError("empty name segment");
  return out;
}

std::string node_iri(NodeId id) { return std::string(kNodePrefix) + std::to_string(id.value); }
std::string edge_iri(EdgeId id) { return std::string(kEdgePrefix) + std::to_string(id.value); }

std::optional<std::uint64_t> parse_id(std::string_view iri, std::string_view prefix) {
  if (!iri.starts_with(prefix)) return std::nullopt;
  const auto digits = iri.substr(prefix.size());
  std::uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
  if (digits.empty() || ec != std::errc{} || ptr != digits.data() + digits.size()) return std::nullopt;
  return value;
}

Term literal_of(const PropertyValue& value) {
  std::string lexical;
  switch (kind_of(value)) {
    case ValueKind::text:
      lexical = std::get<std::string>(value);
      break;
    case ValueKind::integer:
      lexical = std::to_string(std::get<std::int64_t>(value));
      break;
    case ValueKind::real:
      lexical = format_real(std::get<double>(value));
      break;
    case ValueKind::boolean:
      lexical = std::get<bool>(value) ? "true" : "false";
      break;
    case ValueKind::real_array:
      lexical = format_value(value);
      break;
    case ValueKind::quantity:
      lexical = detail::dump_compact(detail::quantity_to_json(std::get<Quantity>(value)));
      break;
  }
  return Term::literal(std::move(lexical), std::string(kDtPrefix) + std::string(to_string(kind_of(value))));
}

double parse_real_lexical(std::string_view text) {
  double d = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), d);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(d)) {
    throw IntegrityError("invalid real literal '" + std::string(text) + "'");
  }
  return d;
}

PropertyValue value_of(const Term& term) {
  if (term.kind != Term::Kind::literal) throw IntegrityError("property object must be a literal");
  if (!term.datatype.starts_with(kDtPrefix)) {
    throw IntegrityError("literal datatype <" + term.datatype + "> is not in the urn:lcag:dt: vocabulary");
  }
  const auto kind = parse_value_kind(std::string_view(term.datatype).substr(kDtPrefix.size()));
  if (!kind) throw IntegrityError("unknown literal datatype <" + term.datatype + ">");
  const std::string& lex = term.value;
  switch (*kind) {
    case ValueKind::text:
      return lex;
    case ValueKind::integer: {
      std::int64_t i = 0;
      auto [ptr, ec] = std::from_chars(lex.data(), lex.data() + lex.size(), i);
      if (lex.empty() || ec != std::errc{} || ptr != lex.data() + lex.size()) {
        throw IntegrityError("invalid int literal '" + lex + "'");
      }
      return i;
    }
    case ValueKind::real:
      return parse_real_lexical(lex);
    case ValueKind::boolean:
      if (lex == "true") return true;
      if (lex == "false") return false;
      throw IntegrityError("invalid bool literal '" + lex + "'");
    case ValueKind::real_array: {
      if (lex.size() < 2 || lex.front() != '[' || lex.back() != ']') {
        throw IntegrityError("invalid realarray literal '" + lex + "'");
      }
      RealArray out;
      std::string_view body = std::string_view(lex).substr(1, lex.size() - 2);
      while (!body.empty()) {
        const auto comma = body.find(',');
        out.push_back(parse_real_lexical(body.substr(0, comma)));
        if (comma == std::string_view::npos) break;
        body.remove_prefix(comma + 1);
        if (body.empty()) throw IntegrityError("invalid realarray literal '" + lex + "'");
      }
      return out;
    }
    case ValueKind::quantity:
      try {
        return detail::quantity_from_json(detail::ojson::parse(lex));
      } catch (const detail::ojson::exception&) {
        throw IntegrityError("invalid quantity literal '" + lex + "'");
      } catch (const ValueError& e) {
        throw IntegrityError("invalid quantity literal '" + lex + "': " + e.what());
      }
  }
  return lex;
}

void escape_literal(std::string_view text, std::string& out) {
  for (unsigned char c : text) {
    switch (c) {
      case '\\':
        out += "\\\\";
        break;
      case '"':
        out += "\\\"";
        break;
      case '\n':
        out += "\\n";
        break;
      case '\r':
        out += "\\r";
        break;
      case '\t':
        out += "\\t";
        break;
      default:
        if (c < 0x20 || c == 0x7F) {
          static constexpr char kHex[] = "0123456789ABCDEF";
          out += "\\u00";
          out += kHex[c >> 4];
          out += kHex[c & 0xF];
        } else {
          out += static_cast<char>(c);
        }
    }
  }
}

void append_utf8(std::uint32_t cp, std::string& out) {
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

struct EdgeParts {
  std::optional<NodeId> src;
  std::optional<NodeId> dst;
  std::optional<std::string> rel;
  PropertyMap props;
};

struct NodeParts {
  std::vector<std::string> labels;
  PropertyMap props;
};

template <typename T>
void set_once(std::optional<T>& slot, T value, const std::string& subject, std::string_view what) {
  if (slot && *slot != value) throw IntegrityError(subject + " has conflicting " + std::string(what) + " statements");
  slot = std::move(value);
}

void add_prop(PropertyMap& props, std::string key, PropertyValue value, const std::string& subject) {
  auto [it, inserted] = props.emplace(key, value);
  if (!inserted && it->second != value) {
    throw IntegrityError(subject + " has conflicting values for property '" + key + "'");
  }
}

NodeId node_ref(const Term& object, const std::string& subject) {
  if (object.kind != Term::Kind::iri) throw IntegrityError(subject + ": expected a node IRI object");
  const auto id = parse_id(object.value, kNodePrefix);
  if (!id) throw IntegrityError(subject + ": '" + object.value + "' is not a node IRI");
  return NodeId{*id};
}

}  // namespace

std::string to_ntriples_line(const Triple& t) {
  std::string out;
  out.reserve(t.subject.size() + t.predicate.size() + t.object.value.size() + 16);
  out += '<';
  out += t.subject;
  out += "> <";
  out += t.predicate;
  out += "> ";
  if (t.object.kind == Term::Kind::iri) {
    out += '<';
    out += t.object.value;
    out += '>';
  } else {
    out += '"';
    escape_literal(t.object.value, out);
    out += "\"^^<";
    out += t.object.datatype;
    out += '>';
  }
  out += " .";
  return out;
}

std::vector<Triple> to_triples(const Graph& graph) {
  std::vector<Triple> triples;
  for (NodeId id : graph.node_ids()) {
    const auto node = *graph.node(id);
    const auto subject = node_iri(id);
    const auto labels = node.labels();
    for (auto label : labels) {
      triples.push_back({subject, std::string(kMetaLabel), Term::iri(std::string(kLabelPrefix) + percent_encode(label))});
    }
    for (const auto& [key, value] : node.props()) {
      triples.push_back({subject, std::string(kPropPrefix) + percent_encode(key), literal_of(value)});
    }
    if (labels.empty() && node.props().empty()) {
      triples.push_back({subject, std::string(kMetaKind), Term::iri(std::string(kMetaNode))});
    }
  }
  for (EdgeId id : graph.edge_ids()) {
    const auto edge = *graph.edge(id);
    const auto subject = edge_iri(id);
    const auto rel_iri = std::string(kRelPrefix) + percent_encode(edge.rel_type());
    triples.push_back({subject, std::string(kMetaSrc), Term::iri(node_iri(edge.src()))});
    triples.push_back({subject, std::string(kMetaRel), Term::iri(rel_iri)});
    triples.push_back({subject, std::string(kMetaDst), Term::iri(node_iri(edge.dst()))});
    for (const auto& [key, value] : edge.props()) {
      triples.push_back({subject, std::string(kPropPrefix) + percent_encode(key), literal_of(value)});
    }
    if (edge.props().empty()) {
      triples.push_back({node_iri(edge.src()), rel_iri, Term::iri(node_iri(edge.dst()))});
    }
  }

  std::vector<std::pair<std::string, std::size_t>> order;
  order.reserve(triples.size());
  for (std::size_t i = 0; i < triples.size(); ++i) order.emplace_back(to_ntriples_line(triples[i]), i);
  std::sort(order.begin(), order.end());
  std::vector<Triple> sorted;
  sorted.reserve(triples.size());
  for (const auto& [line, i] : order) sorted.push_back(std::move(triples[i]));
  return sorted;
}

Graph from_triples(const std::vector<Triple>& triples) {
  std::set<std::string> foreign;
  for (const auto& t : triples) {
    const bool object_foreign = t.object.kind == Term::Kind::iri ? !t.object.value.starts_with(kScheme)
                                                                 : !t.object.datatype.starts_with(kScheme);
    if (!t.subject.starts_with(kScheme) || !t.predicate.starts_with(kScheme) || object_foreign) {
      foreign.insert(t.subject);
    }
  }
  if (!foreign.empty()) {
    std::string msg = "triples use IRIs outside the urn:lcag: scheme; offending subjects:";
    for (const auto& s : foreign) msg += " <" + s + ">";
    throw UnsupportedVocabularyError({foreign.begin(), foreign.end()}, msg);
  }

  std::map<std::uint64_t, NodeParts> nodes;
  std::map<std::uint64_t, EdgeParts> edges;
  // (src, rel, dst) -> multiplicity of shortcut statements
  std::map<std::tuple<std::uint64_t, std::string, std::uint64_t>, std::size_t> shortcuts;
  std::set<Triple> seen;

  for (const auto& t : triples) {
    const bool duplicate = !seen.insert(t).second;
    if (auto nid = parse_id(t.subject, kNodePrefix)) {
      NodeParts& node = nodes[*nid];
      if (duplicate && !t.predicate.starts_with(kRelPrefix)) continue;
      if (t.predicate == kMetaLabel) {
        if (t.object.kind != Term::Kind::iri || !t.object.value.starts_with(kLabelPrefix)) {
          throw IntegrityError(t.subject + ": label object must be a urn:lcag:label: IRI");
        }
        node.labels.push_back(percent_decode(std::string_view(t.object.value).substr(kLabelPrefix.size())));
      } else if (t.predicate == kMetaKind) {
        if (t.object.kind != Term::Kind::iri || t.object.value != kMetaNode) {
          throw IntegrityError(t.subject + ": unexpected meta:kind object");
        }
      } else if (t.predicate.starts_with(kPropPrefix)) {
        add_prop(node.props, percent_decode(std::string_view(t.predicate).substr(kPropPrefix.size())),
                 value_of(t.object), t.subject);
      } else if (t.predicate.starts_with(kRelPrefix)) {
        const NodeId dst = node_ref(t.object, t.subject);
        ++shortcuts[{*nid, percent_decode(std::string_view(t.predicate).substr(kRelPrefix.size())), dst.value}];
      } else {
        throw IntegrityError(t.subject + ": unsupported predicate <" + t.predicate + ">");
      }
    } else if (auto eid = parse_id(t.subject, kEdgePrefix)) {
      EdgeParts& edge = edges[*eid];
      if (t.predicate == kMetaSrc) {
        set_once(edge.src, node_ref(t.object, t.subject), t.subject, "src");
      } else if (t.predicate == kMetaDst) {
        set_once(edge.dst, node_ref(t.object, t.subject), t.subject, "dst");
      } else if (t.predicate == kMetaRel) {
        if (t.object.kind != Term::Kind::iri || !t.object.value.starts_with(kRelPrefix)) {
          throw IntegrityError(t.subject + ": rel object must be a urn:lcag:rel: IRI");
        }
        set_once(edge.rel, percent_decode(std::string_view(t.object.value).substr(kRelPrefix.size())), t.subject,
                 "rel");
      } else if (t.predicate.starts_with(kPropPrefix)) {
        add_prop(edge.props, percent_decode(std::string_view(t.predicate).substr(kPropPrefix.size())),
                 value_of(t.object), t.subject);
      } else {
        throw IntegrityError(t.subject + ": unsupported predicate <" + t.predicate + ">");
      }
    } else {
      throw IntegrityError("subject <" + t.subject + "> is neither a node nor an edge IRI");
    }
  }

  Graph graph;
  for (auto& [id, parts] : nodes) graph.insert_node(NodeId{id}, parts.labels, std::move(parts.props));

  auto require_described = [&](NodeId n, const std::string& who) {
    if (!graph.contains(n)) throw IntegrityError(who + " references undescribed node <" + node_iri(n) + ">");
  };

  for (auto& [id, parts] : edges) {
    const auto subject = edge_iri(EdgeId{id});
    if (!parts.src) throw IntegrityError(subject + " is missing its meta:src statement");
    if (!parts.rel) throw IntegrityError(subject + " is missing its meta:rel statement");
    if (!parts.dst) throw IntegrityError(subject + " is missing its meta:dst statement");
    require_described(*parts.src, subject);
    require_described(*parts.dst, subject);
    if (parts.props.empty()) {
      auto it = shortcuts.find({parts.src->value, *parts.rel, parts.dst->value});
      if (it != shortcuts.end() && it->second > 0) --it->second;
    }
    graph.insert_edge(EdgeId{id}, *parts.rel, *parts.src, *parts.dst, std::move(parts.props));
  }

  // Shortcut statements without a reified counterpart become new edges.
  for (const auto& [key, count] : shortcuts) {
    const auto& [src, rel, dst] = key;
    for (std::size_t i = 0; i < count; ++i) {
      require_described(NodeId{src}, node_iri(NodeId{src}));
      require_described(NodeId{dst}, node_iri(NodeId{src}));
      graph.create_edge(rel, NodeId{src}, NodeId{dst});
    }
  }
  return graph;
}

void write_ntriples(const std::vector<Triple>& triples, std::ostream& out) {
  for (const auto& t : triples) out << to_ntriples_line(t) << '\n';
}

std::string write_ntriples(const std::vector<Triple>& triples) {
  std::ostringstream out;
  write_ntriples(triples, out);
  return std::move(out).str();
}

namespace {

class LineParser {
 public:
  LineParser(std::string_view text, std::size_t line) : text_(text), line_(line) {}

  void skip_ws() {
    while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t')) ++pos_;
  }
  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return at_end() ? '\0' : text_[pos_]; }

  [[noreturn]] void fail(const std::string& msg) const {
    throw FormatError(line_, msg + " at column " + std::to_string(pos_ + 1));
  }

  std::string iri() {
    if (peek() != '<') fail("expected '<'");
    ++pos_;
    const auto close = text_.find('>', pos_);
    if (close == std::string_view::npos) fail("unterminated IRI");
    std::string out(text_.substr(pos_, close - pos_));
    for (char c : out) {
      if (c == ' ' || c == '<' || c == '"' || static_cast<unsigned char>(c) < 0x20) fail("invalid character in IRI");
    }
    pos_ = close + 1;
    return out;
  }

  Term literal() {
    ++pos_;  // opening quote
    std::string value;
    while (true) {
      if (at_end()) fail("unterminated literal");
      const char c = text_[pos_++];
      if (c == '"') break;
      if (c != '\\') {
        value += c;
        continue;
      }
      if (at_end()) fail("dangling escape");
      const char e = text_[pos_++];
      switch (e) {
        case 'n':
          value += '\n';
          break;
        case 'r':
          value += '\r';
          break;
        case 't':
          value += '\t';
          break;
        case 'b':
          value += '\b';
          break;
        case 'f':
          value += '\f';
          break;
        case '"':
        case '\\':
        case '\'':
          value += e;
          break;
        case 'u':
        case 'U': {
          const std::size_t digits = e == 'u' ? 4 : 8;
          if (pos_ + digits > text_.size()) fail("truncated unicode escape");
          std::uint32_t cp = 0;
          for (std::size_t i = 0; i < digits; ++i) {
            const int h = hex_value(text_[pos_ + i]);
            if (h < 0) fail("bad unicode escape");
            cp = cp * 16 + static_cast<std::uint32_t>(h);
          }
          if (cp > 0x10FFFF) fail("unicode escape out of range");
          pos_ += digits;
          append_utf8(cp, value);
          break;
        }
        default:
          fail(std::string("unknown escape '\\") + e + "'");
      }
    }
    if (text_.substr(pos_, 2) != "^^") fail("literal must carry a ^^<datatype>");
    pos_ += 2;
    return Term::literal(std::move(value), iri());
  }

  Triple triple() {
    Triple t;
    t.subject = iri();
    skip_ws();
    t.predicate = iri();
    skip_ws();
    if (peek() == '<') {
      t.object = Term::iri(iri());
    } else if (peek() == '"') {
      t.object = literal();
    } else {
      fail("expected IRI or literal object");
    }
    skip_ws();
    if (peek() != '.') fail("expected '.'");
    ++pos_;
    skip_ws();
    if (!at_end() && peek() != '#') fail("unexpected trailing content");
    return t;
  }

 private:
  std::string_view text_;
  std::size_t line_;
  std::size_t pos_ = 0;
};

}  // namespace

std::vector<Triple> parse_ntriples(std::string_view text) {
  std::vector<Triple> out;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    LineParser p(line, line_no);
    p.skip_ws();
    if (p.at_end() || p.peek() == '#') continue;
    out.push_back(p.triple());
  }
  return out;
}

}  // namespace lcag
