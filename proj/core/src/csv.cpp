#include "lcag/csv.hpp"

#include "lcag/error.hpp"

namespace lcag::csv {

std::vector<Record> parse(std::string_view text) {
  if (text.starts_with("\xEF\xBB\xBF")) text.remove_prefix(3);

  std::vector<Record> records;
  std::size_t line = 1;
  std::size_t i = 0;
  const std::size_t n = text.size();

  while (i < n) {
    Record rec;
    rec.line = line;
    std::string field;
    bool blank = true;

    while (true) {
      if (i < n && text[i] == '"') {
        blank = false;
        ++i;
        while (true) {
          if (i >= n) throw FormatError(rec.line, "unterminated quoted field");
          const char c = text[i++];
          if (c == '"') {
            if (i < n && text[i] == '"') {
              field += '"';
              ++i;
              continue;
            }
            break;
          }
          if (c == '\n') ++line;
          field += c;
        }
        if (i < n && text[i] != ',' && text[i] != '\n' && text[i] != '\r') {
          throw FormatError(line, "unexpected character after closing quote");
        }
      } else {
        while (i < n && text[i] != ',' && text[i] != '\n' && text[i] != '\r') {
          if (text[i] == '"') throw FormatError(line, "quote inside unquoted field");
          field += text[i++];
        }
        if (!field.empty()) blank = false;
      }

      rec.fields.push_back(std::move(field));
      field.clear();
      if (i < n && text[i] == ',') {
        blank = false;
        ++i;
        continue;
      }
      if (i < n && text[i] == '\r') ++i;
      if (i < n && text[i] == '\n') ++i;
      ++line;
      break;
    }

    if (!blank) records.push_back(std::move(rec));
  }
  return records;
}

std::string escape(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string join(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out += ',';
    out += escape(fields[i]);
  }
  return out;
}

}  // namespace lcag::csv
