#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace lcag::csv {

struct Record {
  std::size_t line = 0;  // 1-based line on which the record starts
  std::vector<std::string> fields;
};

/// RFC-4180 reader: comma separator, double-quote quoting with "" escapes,
/// CRLF or LF line ends, quoted fields may span lines. Blank lines are
/// skipped and a leading UTF-8 BOM is ignored. Throws FormatError on an
/// unterminated quote or stray characters after a closing quote.
std::vector<Record> parse(std::string_view text);

/// Quotes the field when it contains a comma, quote, CR or LF.
std::string escape(std::string_view field);

std::string join(const std::vector<std::string>& fields);

}  // namespace lcag::csv
