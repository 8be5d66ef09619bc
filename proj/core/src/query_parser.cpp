#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <set>

#include "lcag/query.hpp"
#include "query_internal.hpp"
#include "query_lexer.hpp"

namespace lcag {

namespace {

using query::Tok;
using query::Token;

bool iequals(std::string_view a, std::string_view b) {
  return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           return std::toupper(static_cast<unsigned char>(x)) == std::toupper(static_cast<unsigned char>(y));
         });
}

const std::vector<std::string_view> kKeywords = {"MATCH", "WHERE", "RETURN", "DISTINCT", "ORDER", "BY",   "ASC",
                                                 "DESC",  "LIMIT", "AND",    "OR",       "NOT",   "AS",   "TRUE",
                                                 "FALSE"};

std::optional<Aggregate> aggregate_named(std::string_view name) {
  if (iequals(name, "COUNT")) return Aggregate::count;
  if (iequals(name, "SUM")) return Aggregate::sum;
  if (iequals(name, "AVG")) return Aggregate::avg;
  if (iequals(name, "MIN")) return Aggregate::min;
  if (iequals(name, "MAX")) return Aggregate::max;
  return std::nullopt;
}

std::string_view aggregate_name(Aggregate a) {
  switch (a) {
    case Aggregate::count:
      return "COUNT";
    case Aggregate::sum:
      return "SUM";
    case Aggregate::avg:
      return "AVG";
    case Aggregate::min:
      return "MIN";
    case Aggregate::max:
      return "MAX";
    case Aggregate::none:
      break;
  }
  return "";
}

std::string_view op_text(CompareOp op) {
  switch (op) {
    case CompareOp::eq:
      return "=";
    case CompareOp::ne:
      return "<>";
    case CompareOp::lt:
      return "<";
    case CompareOp::le:
      return "<=";
    case CompareOp::gt:
      return ">";
    case CompareOp::ge:
      return ">=";
  }
  return "?";
}

}  // namespace

namespace query {

std::string render_expr(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::literal:
      if (const auto* s = std::get_if<std::string>(&e.literal)) return "\"" + *s + "\"";
      return format_cell(e.literal);
    case Expr::Kind::variable:
      return e.name;
    case Expr::Kind::property:
      return e.name + "." + e.key;
    case Expr::Kind::compare:
      return "(" + render_expr(*e.args[0]) + std::string(op_text(e.op)) + render_expr(*e.args[1]) + ")";
    case Expr::Kind::logical_and:
      return "(" + render_expr(*e.args[0]) + " AND " + render_expr(*e.args[1]) + ")";
    case Expr::Kind::logical_or:
      return "(" + render_expr(*e.args[0]) + " OR " + render_expr(*e.args[1]) + ")";
    case Expr::Kind::logical_not:
      return "(NOT " + render_expr(*e.args[0]) + ")";
  }
  return "";
}

void collect_variables(const Expr& e, std::vector<std::string>& out) {
  if (e.kind == Expr::Kind::variable || e.kind == Expr::Kind::property) out.push_back(e.name);
  for (const auto& a : e.args) collect_variables(*a, out);
}

}  // namespace query

namespace {

using query::collect_variables;

std::string canonical(const Expr& e) { return query::render_expr(e); }

std::string canonical(Aggregate a, const ExprPtr& e) {
  if (a == Aggregate::none) return canonical(*e);
  return std::string(aggregate_name(a)) + "(" + (e ? canonical(*e) : "*") + ")";
}

enum class ExprContext { where, item, order };

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text), tokens_(query::tokenize(text)) {}

  QueryAst parse() {
    QueryAst ast;
    if (at_keyword("MATCH")) {
      next();
      ast.patterns.push_back(parse_path());
      while (accept(Tok::comma)) ast.patterns.push_back(parse_path());
      if (at_keyword("WHERE")) {
        next();
        ast.where = parse_expr(ExprContext::where);
      }
    }
    expect_keyword("RETURN", ast.patterns.empty() ? "MATCH or RETURN" : "WHERE or RETURN");
    if (at_keyword("DISTINCT")) {
      next();
      ast.distinct = true;
    }
    ast.items.push_back(parse_item());
    while (accept(Tok::comma)) ast.items.push_back(parse_item());
    if (at_keyword("ORDER")) {
      next();
      expect_keyword("BY", "BY");
      ast.order_by.push_back(parse_order_key(ast));
      while (accept(Tok::comma)) ast.order_by.push_back(parse_order_key(ast));
    }
    if (at_keyword("LIMIT")) {
      next();
      const Token& t = expect(Tok::integer, "a non-negative integer");
      std::int64_t n = 0;
      auto [end, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), n);
      if (ec != std::errc() || end != t.text.data() + t.text.size()) fail(t, "LIMIT out of range");
      ast.limit = n;
    }
    if (peek().kind != Tok::end) {
      fail(peek(), std::string("expected ") + (ast.limit ? "end of query" : "ORDER BY, LIMIT or end of query") +
                       ", found " + spell(peek()));
    }
    check_semantics(ast);
    return ast;
  }

 private:
  // Token helpers -------------------------------------------------------------

  const Token& peek(std::size_t ahead = 0) const {
    return tokens_[std::min(pos_ + ahead, tokens_.size() - 1)];
  }
  const Token& next() {
    const Token& t = tokens_[pos_];
    if (pos_ + 1 < tokens_.size()) ++pos_;
    return t;
  }
  const Token& previous() const { return tokens_[pos_ == 0 ? 0 : pos_ - 1]; }

  bool accept(Tok kind) {
    if (peek().kind != kind) return false;
    next();
    return true;
  }

  static std::string spell(const Token& t) {
    switch (t.kind) {
      case Tok::identifier:
        return "'" + t.text + "'";
      case Tok::string:
        return "string \"" + t.text + "\"";
      case Tok::integer:
      case Tok::real:
        return "'" + t.text + "'";
      default:
        return std::string(query::describe(t.kind));
    }
  }

  [[noreturn]] static void fail(const Token& t, const std::string& message) {
    throw QuerySyntaxError(t.line, t.column, message);
  }

  const Token& expect(Tok kind, std::string_view what) {
    if (peek().kind != kind) fail(peek(), "expected " + std::string(what) + ", found " + spell(peek()));
    return next();
  }

  bool at_keyword(std::string_view kw, std::size_t ahead = 0) const {
    const Token& t = peek(ahead);
    return t.kind == Tok::identifier && !t.quoted && iequals(t.text, kw);
  }

  void expect_keyword(std::string_view kw, std::string_view what) {
    if (!at_keyword(kw)) fail(peek(), "expected " + std::string(what) + ", found " + spell(peek()));
    next();
  }

  static bool is_keyword(const Token& t) {
    if (t.kind != Tok::identifier || t.quoted) return false;
    return std::any_of(kKeywords.begin(), kKeywords.end(), [&](std::string_view k) { return iequals(t.text, k); });
  }

  bool at_variable() const { return peek().kind == Tok::identifier && !is_keyword(peek()); }

  std::string name(std::string_view what) { return expect(Tok::identifier, what).text; }

  // Patterns ------------------------------------------------------------------

  PathPattern parse_path() {
    PathPattern path;
    path.nodes.push_back(parse_node());
    while (peek().kind == Tok::minus || (peek().kind == Tok::lt && peek(1).kind == Tok::minus)) {
      path.edges.push_back(parse_edge());
      path.nodes.push_back(parse_node());
    }
    return path;
  }

  NodePattern parse_node() {
    NodePattern node;
    expect(Tok::lparen, "'(' to start a node pattern");
    if (at_variable()) node.var = next().text;
    while (accept(Tok::colon)) node.labels.push_back(name("a label"));
    if (peek().kind == Tok::lbrace) node.props = parse_props();
    expect(Tok::rparen, node.labels.empty() && !node.var ? "variable, ':' label, '{' or ')'" : "':' label, '{' or ')'");
    return node;
  }

  EdgePattern parse_edge() {
    EdgePattern edge;
    bool left = false;
    if (accept(Tok::lt)) left = true;
    expect(Tok::minus, "'-'");
    expect(Tok::lbracket, "'[' after '-'");
    if (at_variable()) edge.var = next().text;
    if (accept(Tok::colon)) edge.rel_type = name("a relationship type");
    expect(Tok::rbracket, "']'");
    expect(Tok::minus, "'-' after ']'");
    bool right = accept(Tok::gt);
    if (left && right) fail(previous(), "an edge pattern cannot point both ways");
    edge.direction = left ? EdgeDirection::left : right ? EdgeDirection::right : EdgeDirection::undirected;
    return edge;
  }

  PropertyMap parse_props() {
    PropertyMap props;
    expect(Tok::lbrace, "'{'");
    if (accept(Tok::rbrace)) return props;
    do {
      const Token& key = expect(Tok::identifier, "a property key");
      expect(Tok::colon, "':' after property key");
      Value v = parse_literal();
      PropertyValue pv;
      std::visit(
          [&](const auto& x) {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, std::string> || std::is_same_v<T, std::int64_t> ||
                          std::is_same_v<T, double> || std::is_same_v<T, bool>) {
              pv = x;
            }
          },
          v);
      if (!props.emplace(key.text, std::move(pv)).second) fail(key, "duplicate property key '" + key.text + "'");
    } while (accept(Tok::comma));
    expect(Tok::rbrace, "',' or '}'");
    return props;
  }

  Value parse_literal() {
    const Token& t = peek();
    bool negative = false;
    if (t.kind == Tok::minus && (peek(1).kind == Tok::integer || peek(1).kind == Tok::real)) {
      negative = true;
      next();
    }
    const Token& n = peek();
    if (n.kind == Tok::integer) {
      next();
      std::string spelled = (negative ? "-" : "") + n.text;
      std::int64_t v = 0;
      auto [end, ec] = std::from_chars(spelled.data(), spelled.data() + spelled.size(), v);
      if (ec != std::errc() || end != spelled.data() + spelled.size()) fail(n, "integer literal out of range");
      return v;
    }
    if (n.kind == Tok::real) {
      next();
      std::string spelled = (negative ? "-" : "") + n.text;
      double v = 0;
      auto [end, ec] = std::from_chars(spelled.data(), spelled.data() + spelled.size(), v);
      if (ec != std::errc() || end != spelled.data() + spelled.size() || !std::isfinite(v)) {
        fail(n, "real literal out of range");
      }
      return v;
    }
    if (n.kind == Tok::string) {
      next();
      return n.text;
    }
    if (at_keyword("TRUE")) {
      next();
      return true;
    }
    if (at_keyword("FALSE")) {
      next();
      return false;
    }
    fail(n, "expected a literal (string, number, true or false), found " + spell(n));
  }

  // Expressions ---------------------------------------------------------------

  static ExprPtr make(Expr e) { return std::make_shared<const Expr>(std::move(e)); }

  ExprPtr parse_expr(ExprContext ctx) {
    ExprPtr lhs = parse_and(ctx);
    while (at_keyword("OR")) {
      next();
      Expr e;
      e.kind = Expr::Kind::logical_or;
      e.args = {lhs, parse_and(ctx)};
      lhs = make(std::move(e));
    }
    return lhs;
  }

  ExprPtr parse_and(ExprContext ctx) {
    ExprPtr lhs = parse_not(ctx);
    while (at_keyword("AND")) {
      next();
      Expr e;
      e.kind = Expr::Kind::logical_and;
      e.args = {lhs, parse_not(ctx)};
      lhs = make(std::move(e));
    }
    return lhs;
  }

  ExprPtr parse_not(ExprContext ctx) {
    if (at_keyword("NOT")) {
      next();
      Expr e;
      e.kind = Expr::Kind::logical_not;
      e.args = {parse_not(ctx)};
      return make(std::move(e));
    }
    return parse_comparison(ctx);
  }

  ExprPtr parse_comparison(ExprContext ctx) {
    ExprPtr lhs = parse_primary(ctx);
    std::optional<CompareOp> op;
    switch (peek().kind) {
      case Tok::eq:
        op = CompareOp::eq;
        break;
      case Tok::ne:
        op = CompareOp::ne;
        break;
      case Tok::lt:
        op = CompareOp::lt;
        break;
      case Tok::le:
        op = CompareOp::le;
        break;
      case Tok::gt:
        op = CompareOp::gt;
        break;
      case Tok::ge:
        op = CompareOp::ge;
        break;
      default:
        return lhs;
    }
    next();
    Expr e;
    e.kind = Expr::Kind::compare;
    e.op = *op;
    e.args = {lhs, parse_primary(ctx)};
    return make(std::move(e));
  }

  ExprPtr parse_primary(ExprContext ctx) {
    const Token& t = peek();
    if (accept(Tok::lparen)) {
      ExprPtr inner = parse_expr(ctx);
      expect(Tok::rparen, "')'");
      return inner;
    }
    if (t.kind == Tok::identifier && !t.quoted && aggregate_named(t.text) && peek(1).kind == Tok::lparen) {
      if (ctx == ExprContext::where) throw QuerySemanticError("aggregate " + t.text + "() is not allowed in WHERE");
      throw QuerySemanticError("aggregate " + t.text + "() must be a whole RETURN item");
    }
    if (at_variable()) {
      Expr e;
      e.name = next().text;
      if (accept(Tok::dot)) {
        e.kind = Expr::Kind::property;
        e.key = name("a property key after '.'");
      } else {
        e.kind = Expr::Kind::variable;
      }
      return make(std::move(e));
    }
    if (t.kind == Tok::integer || t.kind == Tok::real || t.kind == Tok::string || t.kind == Tok::minus ||
        at_keyword("TRUE") || at_keyword("FALSE")) {
      Expr e;
      e.kind = Expr::Kind::literal;
      e.literal = parse_literal();
      return make(std::move(e));
    }
    fail(t, "expected an expression, found " + spell(t));
  }

  // RETURN / ORDER BY -----------------------------------------------------------

  struct ParsedItem {
    Aggregate aggregate = Aggregate::none;
    ExprPtr expr;
    std::size_t begin = 0;
    std::size_t end = 0;
  };

  ParsedItem parse_item_body(ExprContext ctx) {
    ParsedItem item;
    item.begin = peek().offset;
    const Token& t = peek();
    if (t.kind == Tok::identifier && !t.quoted && peek(1).kind == Tok::lparen) {
      if (auto agg = aggregate_named(t.text)) {
        next();
        next();
        item.aggregate = *agg;
        if (peek().kind == Tok::star) {
          if (*agg != Aggregate::count) fail(peek(), "only COUNT accepts '*'");
          next();
        } else {
          item.expr = parse_expr(ctx);
        }
        expect(Tok::rparen, "')'");
        item.end = previous().end;
        return item;
      }
    }
    item.expr = parse_expr(ctx);
    item.end = previous().end;
    return item;
  }

  ReturnItem parse_item() {
    ParsedItem body = parse_item_body(ExprContext::item);
    ReturnItem item;
    item.aggregate = body.aggregate;
    item.expr = body.expr;
    item.column = std::string(text_.substr(body.begin, body.end - body.begin));
    if (at_keyword("AS")) {
      next();
      item.column = name("a column name after AS");
      aliases_.push_back(item.column);
    } else {
      aliases_.emplace_back();
    }
    canonical_items_.push_back(canonical(item.aggregate, item.expr));
    return item;
  }

  OrderKey parse_order_key(const QueryAst& ast) {
    OrderKey key;
    const Token& start = peek();
    bool resolved = false;
    if (start.kind == Tok::integer && (peek(1).kind == Tok::comma || peek(1).kind == Tok::end ||
                                       at_keyword("ASC", 1) || at_keyword("DESC", 1) || at_keyword("LIMIT", 1))) {
      next();
      std::size_t position = 0;
      auto [end, ec] = std::from_chars(start.text.data(), start.text.data() + start.text.size(), position);
      if (ec != std::errc() || position == 0 || position > ast.items.size()) {
        fail(start, "ORDER BY position " + start.text + " is out of range");
      }
      key.item = position - 1;
      resolved = true;
    } else if (at_variable() && peek(1).kind != Tok::dot && peek(1).kind != Tok::lparen) {
      auto it = std::find(aliases_.begin(), aliases_.end(), start.text);
      if (it != aliases_.end()) {
        next();
        key.item = static_cast<std::size_t>(it - aliases_.begin());
        resolved = true;
      }
    }
    if (!resolved) {
      ParsedItem body = parse_item_body(ExprContext::order);
      const std::string wanted = canonical(body.aggregate, body.expr);
      auto it = std::find(canonical_items_.begin(), canonical_items_.end(), wanted);
      if (it == canonical_items_.end()) {
        throw QuerySemanticError("ORDER BY key '" + std::string(text_.substr(body.begin, body.end - body.begin)) +
                                 "' does not name a RETURN item");
      }
      key.item = static_cast<std::size_t>(it - canonical_items_.begin());
    }
    if (at_keyword("ASC")) {
      next();
    } else if (at_keyword("DESC")) {
      next();
      key.descending = true;
    }
    return key;
  }

  // Semantics -----------------------------------------------------------------

  void check_semantics(const QueryAst& ast) {
    std::set<std::string> node_vars;
    std::set<std::string> edge_vars;
    for (const auto& path : ast.patterns) {
      for (const auto& n : path.nodes) {
        if (n.var) node_vars.insert(*n.var);
      }
      for (const auto& e : path.edges) {
        if (!e.var) continue;
        if (!edge_vars.insert(*e.var).second) {
          throw QuerySemanticError("edge variable '" + *e.var + "' is bound more than once");
        }
      }
    }
    for (const auto& v : node_vars) {
      if (edge_vars.contains(v)) throw QuerySemanticError("variable '" + v + "' is used as both node and edge");
    }

    auto check = [&](const ExprPtr& e) {
      if (!e) return;
      std::vector<std::string> used;
      collect_variables(*e, used);
      for (const auto& v : used) {
        if (!node_vars.contains(v) && !edge_vars.contains(v)) {
          throw QuerySemanticError("unbound variable '" + v + "'");
        }
      }
    };
    check(ast.where);
    std::set<std::string> columns;
    for (const auto& item : ast.items) {
      check(item.expr);
      if (!columns.insert(item.column).second) {
        throw QuerySemanticError("duplicate column name '" + item.column + "'");
      }
    }
  }

  std::string_view text_;
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  std::vector<std::string> aliases_;
  std::vector<std::string> canonical_items_;
};

}  // namespace

bool QueryAst::has_aggregates() const {
  return std::any_of(items.begin(), items.end(), [](const ReturnItem& i) { return i.aggregate != Aggregate::none; });
}

QueryAst parse_query(std::string_view text) { return Parser(text).parse(); }

}  // namespace lcag
