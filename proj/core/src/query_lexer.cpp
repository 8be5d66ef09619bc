#include "query_lexer.hpp"

#include "lcag/query.hpp"

namespace lcag::query {

namespace {

bool ident_start(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; }
bool ident_char(char c) { return ident_start(c) || (c >= '0' && c <= '9'); }
bool digit(char c) { return c >= '0' && c <= '9'; }

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      skip_space();
      Token t;
      t.line = line_;
      t.column = column_;
      t.offset = pos_;
      if (pos_ >= text_.size()) {
        t.kind = Tok::end;
        t.end = pos_;
        out.push_back(std::move(t));
        return out;
      }
      lex_one(t);
      t.end = pos_;
      out.push_back(std::move(t));
    }
  }

 private:
  char peek(std::size_t ahead = 0) const { return pos_ + ahead < text_.size() ? text_[pos_ + ahead] : '\0'; }

  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++pos_;
  }

  [[noreturn]] void fail(const Token& at, const std::string& message) const {
    throw QuerySyntaxError(at.line, at.column, message);
  }

  void skip_space() {
    while (pos_ < text_.size()) {
      char c = peek();
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance();
      } else if (c == '/' && peek(1) == '/') {
        while (pos_ < text_.size() && peek() != '\n') advance();
      } else {
        break;
      }
    }
  }

  void single(Token& t, Tok kind) {
    t.kind = kind;
    advance();
  }

  void lex_one(Token& t) {
    const char c = peek();
    if (ident_start(c)) {
      t.kind = Tok::identifier;
      while (ident_char(peek())) {
        t.text += peek();
        advance();
      }
      return;
    }
    if (digit(c)) return lex_number(t);
    switch (c) {
      case '"':
      case '\'':
        return lex_string(t, c);
      case '`':
        return lex_backtick(t);
      case '(':
        return single(t, Tok::lparen);
      case ')':
        return single(t, Tok::rparen);
      case '[':
        return single(t, Tok::lbracket);
      case ']':
        return single(t, Tok::rbracket);
      case '{':
        return single(t, Tok::lbrace);
      case '}':
        return single(t, Tok::rbrace);
      case ':':
        return single(t, Tok::colon);
      case ',':
        return single(t, Tok::comma);
      case '.':
        return single(t, Tok::dot);
      case '*':
        return single(t, Tok::star);
      case '-':
        return single(t, Tok::minus);
      case '=':
        return single(t, Tok::eq);
      case '<':
        advance();
        if (peek() == '=') {
          t.kind = Tok::le;
          advance();
        } else if (peek() == '>') {
          t.kind = Tok::ne;
          advance();
        } else {
          t.kind = Tok::lt;
        }
        return;
      case '>':
        advance();
        if (peek() == '=') {
          t.kind = Tok::ge;
          advance();
        } else {
          t.kind = Tok::gt;
        }
        return;
      default:
        fail(t, "unexpected character '" + std::string(1, c) + "'");
    }
  }

  void lex_number(Token& t) {
    t.kind = Tok::integer;
    while (digit(peek())) {
      t.text += peek();
      advance();
    }
    if (peek() == '.' && digit(peek(1))) {
      t.kind = Tok::real;
      t.text += '.';
      advance();
      while (digit(peek())) {
        t.text += peek();
        advance();
      }
    }
    if ((peek() == 'e' || peek() == 'E') &&
        (digit(peek(1)) || ((peek(1) == '+' || peek(1) == '-') && digit(peek(2))))) {
      t.kind = Tok::real;
      t.text += peek();
      advance();
      if (peek() == '+' || peek() == '-') {
        t.text += peek();
        advance();
      }
      while (digit(peek())) {
        t.text += peek();
        advance();
      }
    }
    if (ident_start(peek())) fail(t, "malformed number");
  }

  void lex_string(Token& t, char quote) {
    t.kind = Tok::string;
    advance();
    while (true) {
      if (pos_ >= text_.size()) fail(t, "unterminated string literal");
      char c = peek();
      if (c == quote) {
        advance();
        return;
      }
      if (c == '\\') {
        advance();
        if (pos_ >= text_.size()) fail(t, "unterminated string literal");
        char e = peek();
        switch (e) {
          case 'n':
            t.text += '\n';
            break;
          case 't':
            t.text += '\t';
            break;
          case 'r':
            t.text += '\r';
            break;
          case '\\':
          case '"':
          case '\'':
            t.text += e;
            break;
          default:
            fail(t, "unknown escape \\" + std::string(1, e));
        }
        advance();
        continue;
      }
      t.text += c;
      advance();
    }
  }

  void lex_backtick(Token& t) {
    t.kind = Tok::identifier;
    t.quoted = true;
    advance();
    while (true) {
      if (pos_ >= text_.size()) fail(t, "unterminated quoted identifier");
      if (peek() == '`') {
        advance();
        if (t.text.empty()) fail(t, "empty quoted identifier");
        return;
      }
      t.text += peek();
      advance();
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t column_ = 1;
};

}  // namespace

std::string_view describe(Tok kind) {
  switch (kind) {
    case Tok::identifier:
      return "identifier";
    case Tok::string:
      return "string";
    case Tok::integer:
      return "integer";
    case Tok::real:
      return "number";
    case Tok::lparen:
      return "'('";
    case Tok::rparen:
      return "')'";
    case Tok::lbracket:
      return "'['";
    case Tok::rbracket:
      return "']'";
    case Tok::lbrace:
      return "'{'";
    case Tok::rbrace:
      return "'}'";
    case Tok::colon:
      return "':'";
    case Tok::comma:
      return "','";
    case Tok::dot:
      return "'.'";
    case Tok::star:
      return "'*'";
    case Tok::minus:
      return "'-'";
    case Tok::eq:
      return "'='";
    case Tok::ne:
      return "'<>'";
    case Tok::lt:
      return "'<'";
    case Tok::le:
      return "'<='";
    case Tok::gt:
      return "'>'";
    case Tok::ge:
      return "'>='";
    case Tok::end:
      return "end of input";
  }
  return "?";
}

std::vector<Token> tokenize(std::string_view text) { return Lexer(text).run(); }

}  // namespace lcag::query
