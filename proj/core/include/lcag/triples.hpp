#pragma once

#include <compare>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "lcag/graph.hpp"

namespace lcag {

/// Object position of a triple: an IRI or a literal with a datatype IRI.
struct Term {
  enum class Kind { iri, literal };

  Kind kind = Kind::iri;
  std::string value;     // IRI, or literal lexical form (unescaped)
  std::string datatype;  // literals only

  static Term iri(std::string value) { return {Kind::iri, std::move(value), {}}; }
  static Term literal(std::string lexical, std::string datatype) {
    return {Kind::literal, std::move(lexical), std::move(datatype)};
  }

  auto operator<=>(const Term&) const = default;
};

struct Triple {
  std::string subject;
  std::string predicate;
  Term object;

  auto operator<=>(const Triple&) const = default;
};

/// Renders `<s> <p> <o> .` or `<s> <p> "lex"^^<dt> .` with N-Triples escapes.
std::string to_ntriples_line(const Triple& triple);

/// Encodes the graph in the `urn:lcag:` vocabulary, sorted by rendered line.
///
///   node labels      <urn:lcag:node:N> <urn:lcag:meta:label> <urn:lcag:label:L>
///   node properties  <urn:lcag:node:N> <urn:lcag:prop:K> "lex"^^<urn:lcag:dt:KIND>
///   bare nodes       <urn:lcag:node:N> <urn:lcag:meta:kind> <urn:lcag:meta:Node>
///   every edge       <urn:lcag:edge:E> <urn:lcag:meta:src|rel|dst> ...
///                    <urn:lcag:edge:E> <urn:lcag:prop:K> "lex"^^<...>
///   property-less    <urn:lcag:node:S> <urn:lcag:rel:T> <urn:lcag:node:D>
///
/// Name segments are percent-encoded outside [A-Za-z0-9_.~-].
std::vector<Triple> to_triples(const Graph& graph);

/// Inverse of to_triples. Throws UnsupportedVocabularyError when any IRI
/// lies outside `urn:lcag:` and IntegrityError when an edge reification is
/// incomplete or references an undescribed node.
Graph from_triples(const std::vector<Triple>& triples);

void write_ntriples(const std::vector<Triple>& triples, std::ostream& out);
std::string write_ntriples(const std::vector<Triple>& triples);

/// Parses N-Triples lines (blank lines and `#` comments allowed).
std::vector<Triple> parse_ntriples(std::string_view text);

}  // namespace lcag
