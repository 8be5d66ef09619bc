#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace lcag {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A property value violates a value invariant (NaN, infinity, empty unit, ...).
class ValueError : public Error {
 public:
  using Error::Error;
};

/// A node or edge id does not refer to a live entity.
class NotFoundError : public Error {
 public:
  using Error::Error;
};

/// A mutation or decoded document would break referential integrity.
class IntegrityError : public Error {
 public:
  using Error::Error;
};

/// Malformed textual input. `line()` is 1-based; 0 when not applicable.
class FormatError : public Error {
 public:
  FormatError(std::size_t line, const std::string& message)
      : Error(line == 0 ? message : "line " + std::to_string(line) + ": " + message),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Snapshot header names a format version this build cannot read.
class VersionError : public FormatError {
 public:
  using FormatError::FormatError;
};

/// Triples use IRIs outside the `urn:lcag:` scheme.
class UnsupportedVocabularyError : public Error {
 public:
  UnsupportedVocabularyError(std::vector<std::string> subjects, const std::string& message)
      : Error(message), subjects_(std::move(subjects)) {}

  const std::vector<std::string>& subjects() const noexcept { return subjects_; }

 private:
  std::vector<std::string> subjects_;
};

/// A mapping table entry names a canonical term the target schema lacks.
class MappingError : public Error {
 public:
  using Error::Error;
};

}  // namespace lcag
