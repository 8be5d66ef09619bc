#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace lcag::query {

enum class Tok {
  identifier,
  string,
  integer,
  real,
  lparen,
  rparen,
  lbracket,
  rbracket,
  lbrace,
  rbrace,
  colon,
  comma,
  dot,
  star,
  minus,
  eq,
  ne,
  lt,
  le,
  gt,
  ge,
  end,
};

std::string_view describe(Tok kind);

struct Token {
  Tok kind = Tok::end;
  std::string text;  // identifier name, decoded string, or number spelling
  std::size_t line = 1;
  std::size_t column = 1;
  std::size_t offset = 0;  // byte offsets into the source
  std::size_t end = 0;
  bool quoted = false;  // identifier written in backticks
};

/// Throws QuerySyntaxError on unterminated strings and stray characters.
std::vector<Token> tokenize(std::string_view text);

}  // namespace lcag::query
