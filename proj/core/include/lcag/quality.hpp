#pragma once

#include <array>
#include <string>
#include <vector>

#include "lcag/graph.hpp"
#include "lcag/ontology.hpp"

namespace lcag {

/// One measured dimension. ratio == numerator / denominator, or 1.0 when the
/// denominator is zero; `details` names the denominator - numerator
/// offenders (entity ids such as "node:4", or vocabulary terms).
struct QualityDimension {
  std::string name;
  double ratio = 1.0;
  std::size_t numerator = 0;
  std::size_t denominator = 0;
  std::vector<std::string> details;

  bool operator==(const QualityDimension&) const = default;
};

struct QualityReport {
  /// Share of distinct labels, relationship types and property keys the
  /// schema knows.
  QualityDimension accuracy_proxy;
  /// Share of workflows whose activities cover production, transportation,
  /// usage and disposal.
  QualityDimension completeness;
  /// Share of nodes and edges without a schema violation.
  QualityDimension consistency;
  /// Share of HAS_INPUT / HAS_OUTPUT edges whose amount is a quantity with a
  /// unit.
  QualityDimension precision;
  /// Share of workflows with at least one HAS_REFERENCE edge.
  QualityDimension traceability;

  std::array<const QualityDimension*, 5> dimensions() const {
    return {&accuracy_proxy, &completeness, &consistency, &precision, &traceability};
  }
  bool operator==(const QualityReport&) const = default;
};

QualityReport score_quality(const Graph& graph, const SchemaDef& schema = builtin_schema());

struct FairCheck {
  std::string name;
  bool passed = false;
  std::vector<std::string> reasons;  // why it failed; empty on pass

  bool operator==(const FairCheck&) const = default;
};

struct FairReport {
  /// Every workflow has an id and at least one descriptive property or
  /// metadata edge.
  FairCheck findable;
  /// The graph exports to a snapshot that reads back equal.
  FairCheck accessible;
  /// No schema violations and the triple form round-trips.
  FairCheck interoperable;
  /// "reusable (reproducibility)": every workflow is referenced and every
  /// Reference has an author and a title.
  FairCheck reusable;
  /// Informational, never affects a verdict (e.g. license coverage).
  std::vector<std::string> notes;

  std::array<const FairCheck*, 4> checks() const { return {&findable, &accessible, &interoperable, &reusable}; }
  bool all_passed() const;
  bool operator==(const FairReport&) const = default;
};

FairReport fair_report(const Graph& graph, const SchemaDef& schema = builtin_schema());

std::string to_text(const QualityReport& report);
std::string to_json(const QualityReport& report);
std::string to_text(const FairReport& report);
std::string to_json(const FairReport& report);

}  // namespace lcag
